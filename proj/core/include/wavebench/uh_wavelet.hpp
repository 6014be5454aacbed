#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "wavebench/series.hpp"

namespace wavebench {

struct NodeKey {
    int level = 0; // 0 = coarsest mother wavelet
    int index = 1; // 1-based translation within the level

    friend auto operator<=>(const NodeKey&, const NodeKey&) = default;
};

/// One unbalanced Haar mother wavelet on the 1-based support [start, end].
///
/// The function is positive on [start, breakpoint] and negative on
/// [breakpoint + 1, end], with amplitudes chosen so it has zero sum and unit
/// norm.
struct WaveletNode {
    int start = 1;
    int breakpoint = 1;
    int end = 2;
    int level = 0;
    int index = 1;

    NodeKey key() const noexcept { return {level, index}; }
    int length() const noexcept { return end - start + 1; }
    int positive_length() const noexcept { return breakpoint - start + 1; }
    int negative_length() const noexcept { return end - breakpoint; }
    double positive_amplitude() const;
    double negative_amplitude() const; // magnitude; the function value is its negative
    double value_at(int t) const;      // t is 1-based
};

/// Father wavelet plus n - 1 mother wavelets spanning R^n.
class UHBasis {
public:
    UHBasis(int n, std::vector<WaveletNode> nodes, std::optional<int> split_level = std::nullopt);

    int size() const noexcept { return n_; }
    std::span<const WaveletNode> nodes() const noexcept { return nodes_; }
    // Deepest level present, or -1 when the basis is the father alone.
    int max_level() const noexcept { return max_level_; }
    // Boundary between levels mirrored from a low-frequency basis (<=) and
    // levels living inside single aggregation blocks (>); set for the high
    // member of a paired basis.
    std::optional<int> split_level() const noexcept { return split_level_; }
    const WaveletNode* find(NodeKey key) const;

private:
    int n_;
    std::vector<WaveletNode> nodes_; // ordered by (level, index)
    std::map<NodeKey, std::size_t> lookup_;
    int max_level_ = -1;
    std::optional<int> split_level_;
};

// 2^floor(log2 n)
int largest_dyadic_below(int n);

/// Basis whose every non-dyadic support gives its later part the largest
/// dyadic length and its earlier part the remainder; dyadic supports are
/// split at the midpoint, so n = 2^J yields the classical Haar basis.
UHBasis build_uh_basis(int n);

struct PairedBases {
    UHBasis low;
    UHBasis high;
    int split_level; // deepest level of the low basis (-1 when m == 1)
};

/// Low basis over m points and a high basis over k*m points whose first
/// levels are the k-expansions of the low nodes; the remaining high levels
/// refine each length-k block with the build_uh_basis rule.
PairedBases build_paired_bases(int m, int k);

struct WaveletCoefficients {
    double father = 0.0;
    std::map<NodeKey, double> details;
    std::optional<int> split_level;

    // Coefficients at one level, in index order.
    std::vector<double> level_values(int level) const;
};

WaveletCoefficients duht(std::span<const double> series, const UHBasis& basis);
WaveletCoefficients duht(const TimeSeries& series, const UHBasis& basis);

std::vector<double> iduht_values(const WaveletCoefficients& coeffs, const UHBasis& basis);
TimeSeries iduht(const WaveletCoefficients& coeffs, const UHBasis& basis);

// Orthogonal transform matrix: row 0 is the father, row i + 1 is nodes()[i].
Eigen::MatrixXd basis_matrix(const UHBasis& basis);

} // namespace wavebench
