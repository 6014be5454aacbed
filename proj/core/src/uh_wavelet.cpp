#include "wavebench/uh_wavelet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "wavebench/errors.hpp"

namespace wavebench {

namespace {

bool is_power_of_two(int n) {
    return n > 0 && std::has_single_bit(static_cast<unsigned>(n));
}

// Splits [start, end] (length >= 2) and recurses into both halves.
void split_support(int start, int end, int level, int index, std::vector<WaveletNode>& out) {
    const int length = end - start + 1;
    if (length < 2) {
        return;
    }
    const int positive = is_power_of_two(length) ? length / 2 : length - largest_dyadic_below(length);
    const int breakpoint = start + positive - 1;
    out.push_back({start, breakpoint, end, level, index});
    split_support(start, breakpoint, level + 1, 2 * index - 1, out);
    split_support(breakpoint + 1, end, level + 1, 2 * index, out);
}

} // namespace

double WaveletNode::positive_amplitude() const {
    return std::sqrt(1.0 / positive_length() - 1.0 / length());
}

double WaveletNode::negative_amplitude() const {
    return std::sqrt(1.0 / negative_length() - 1.0 / length());
}

double WaveletNode::value_at(int t) const {
    if (t < start || t > end) {
        return 0.0;
    }
    return t <= breakpoint ? positive_amplitude() : -negative_amplitude();
}

UHBasis::UHBasis(int n, std::vector<WaveletNode> nodes, std::optional<int> split_level)
    : n_(n), nodes_(std::move(nodes)), split_level_(split_level) {
    if (n_ < 1) {
        throw DimensionError("a wavelet basis needs n >= 1");
    }
    if (nodes_.size() != static_cast<std::size_t>(n_ - 1)) {
        throw DimensionError("a basis over " + std::to_string(n_) + " points needs " + std::to_string(n_ - 1) +
                             " mother wavelets, got " + std::to_string(nodes_.size()));
    }
    std::sort(nodes_.begin(), nodes_.end(),
              [](const WaveletNode& a, const WaveletNode& b) { return a.key() < b.key(); });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& node = nodes_[i];
        if (!(1 <= node.start && node.start <= node.breakpoint && node.breakpoint < node.end && node.end <= n_)) {
            throw DomainError("invalid wavelet support (" + std::to_string(node.start) + ", " +
                              std::to_string(node.breakpoint) + ", " + std::to_string(node.end) + ")");
        }
        if (node.level < 0 || node.index < 1) {
            throw DomainError("wavelet keys need level >= 0 and index >= 1");
        }
        if (!lookup_.emplace(node.key(), i).second) {
            throw DomainError("duplicate wavelet key (" + std::to_string(node.level) + ", " +
                              std::to_string(node.index) + ")");
        }
        max_level_ = std::max(max_level_, node.level);
    }
}

const WaveletNode* UHBasis::find(NodeKey key) const {
    const auto it = lookup_.find(key);
    return it == lookup_.end() ? nullptr : &nodes_[it->second];
}

int largest_dyadic_below(int n) {
    if (n < 1) {
        throw DomainError("largest_dyadic_below needs n >= 1, got " + std::to_string(n));
    }
    return static_cast<int>(std::bit_floor(static_cast<unsigned>(n)));
}

UHBasis build_uh_basis(int n) {
    if (n < 1) {
        throw DimensionError("a wavelet basis needs n >= 1, got " + std::to_string(n));
    }
    std::vector<WaveletNode> nodes;
    nodes.reserve(static_cast<std::size_t>(n - 1));
    split_support(1, n, 0, 1, nodes);
    return UHBasis(n, std::move(nodes));
}

PairedBases build_paired_bases(int m, int k) {
    if (m < 1) {
        throw DimensionError("paired bases need m >= 1, got " + std::to_string(m));
    }
    if (k < 2) {
        throw ConfigError("paired bases need an aggregation factor k >= 2, got " + std::to_string(k));
    }
    UHBasis low = build_uh_basis(m);
    const int split = low.max_level();

    std::vector<WaveletNode> high;
    high.reserve(static_cast<std::size_t>(k * m - 1));
    for (const auto& node : low.nodes()) {
        high.push_back({k * (node.start - 1) + 1, k * node.breakpoint, k * node.end, node.level, node.index});
    }

    const UHBasis block = build_uh_basis(k);
    for (int b = 0; b < m; ++b) {
        for (const auto& node : block.nodes()) {
            const int width = 1 << node.level;
            high.push_back({node.start + b * k, node.breakpoint + b * k, node.end + b * k,
                            split + 1 + node.level, b * width + node.index});
        }
    }
    return PairedBases{std::move(low), UHBasis(k * m, std::move(high), split), split};
}

std::vector<double> WaveletCoefficients::level_values(int level) const {
    std::vector<double> out;
    for (auto it = details.lower_bound({level, 0}); it != details.end() && it->first.level == level; ++it) {
        out.push_back(it->second);
    }
    return out;
}

WaveletCoefficients duht(std::span<const double> series, const UHBasis& basis) {
    const auto n = static_cast<std::size_t>(basis.size());
    if (series.size() != n) {
        throw DimensionError("series of length " + std::to_string(series.size()) + " cannot use a basis over " +
                             std::to_string(n) + " points");
    }
    WaveletCoefficients out;
    out.split_level = basis.split_level();
    double total = 0.0;
    for (double v : series) {
        total += v;
    }
    out.father = total / std::sqrt(static_cast<double>(n));
    // Direct summation over each support keeps coefficients of nodes inside
    // a block dependent only on that block's values.
    for (const auto& node : basis.nodes()) {
        double positive = 0.0;
        for (int t = node.start; t <= node.breakpoint; ++t) {
            positive += series[static_cast<std::size_t>(t - 1)];
        }
        double negative = 0.0;
        for (int t = node.breakpoint + 1; t <= node.end; ++t) {
            negative += series[static_cast<std::size_t>(t - 1)];
        }
        out.details.emplace(node.key(), node.positive_amplitude() * positive - node.negative_amplitude() * negative);
    }
    return out;
}

WaveletCoefficients duht(const TimeSeries& series, const UHBasis& basis) {
    return duht(series.values(), basis);
}

std::vector<double> iduht_values(const WaveletCoefficients& coeffs, const UHBasis& basis) {
    if (coeffs.details.size() != basis.nodes().size()) {
        throw DimensionError("coefficient set has " + std::to_string(coeffs.details.size()) +
                             " details but the basis has " + std::to_string(basis.nodes().size()) + " wavelets");
    }
    const auto n = static_cast<std::size_t>(basis.size());
    std::vector<double> out(n, coeffs.father / std::sqrt(static_cast<double>(n)));
    for (const auto& node : basis.nodes()) {
        const auto it = coeffs.details.find(node.key());
        if (it == coeffs.details.end()) {
            throw DomainError("missing coefficient for wavelet (" + std::to_string(node.level) + ", " +
                              std::to_string(node.index) + ")");
        }
        const double up = it->second * node.positive_amplitude();
        const double down = it->second * node.negative_amplitude();
        for (int t = node.start; t <= node.breakpoint; ++t) {
            out[static_cast<std::size_t>(t - 1)] += up;
        }
        for (int t = node.breakpoint + 1; t <= node.end; ++t) {
            out[static_cast<std::size_t>(t - 1)] -= down;
        }
    }
    return out;
}

TimeSeries iduht(const WaveletCoefficients& coeffs, const UHBasis& basis) {
    return TimeSeries(iduht_values(coeffs, basis));
}

Eigen::MatrixXd basis_matrix(const UHBasis& basis) {
    const int n = basis.size();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    w.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::Index row = 1;
    for (const auto& node : basis.nodes()) {
        w.row(row).segment(node.start - 1, node.positive_length()).setConstant(node.positive_amplitude());
        w.row(row).segment(node.breakpoint, node.negative_length()).setConstant(-node.negative_amplitude());
        ++row;
    }
    return w;
}

} // namespace wavebench
