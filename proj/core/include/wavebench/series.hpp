#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wavebench {

/// Ordered real-valued observations labelled by an integer period.
///
/// Values are always non-empty and finite; the constructor enforces this.
/// `freq_per_low` is descriptive only (e.g. 4 for quarterly data that
/// benchmarks to annual totals).
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values,
                        std::int64_t start_index = 1,
                        std::optional<int> freq_per_low = std::nullopt);

    static TimeSeries from_vector(const Eigen::VectorXd& values,
                                  std::int64_t start_index = 1,
                                  std::optional<int> freq_per_low = std::nullopt);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::int64_t start_index() const noexcept { return start_index_; }
    std::optional<int> freq_per_low() const noexcept { return freq_per_low_; }

    Eigen::Map<const Eigen::VectorXd> as_vector() const;

    // Same labels, new values (which must have the same length).
    TimeSeries with_values(std::vector<double> values) const;
    TimeSeries with_values(const Eigen::VectorXd& values) const;

    // First `count` observations.
    TimeSeries head(std::size_t count) const;

private:
    std::vector<double> values_;
    std::int64_t start_index_;
    std::optional<int> freq_per_low_;
};

enum class AggregationKind { FlowSum };

/// Ties a high-frequency series to a low-frequency one: every k consecutive
/// high values, starting at the first, sum to one low value.
class AggregationConstraint {
public:
    explicit AggregationConstraint(int factor_k);

    int factor_k() const noexcept { return factor_k_; }
    AggregationKind kind() const noexcept { return AggregationKind::FlowSum; }

    // Number of low periods covered by `high_length` high periods; throws
    // DimensionError when the length is not a multiple of k.
    std::size_t low_length(std::size_t high_length) const;

private:
    int factor_k_;
};

TimeSeries aggregate(const TimeSeries& high, AggregationConstraint c);

// Block sums of a raw vector; length must be a multiple of k.
Eigen::VectorXd block_sums(const Eigen::Ref<const Eigen::VectorXd>& high, int k);

/// low_s - sum of the s-th block of `high`.
std::vector<double> constraint_residual(const TimeSeries& high,
                                        const TimeSeries& low,
                                        AggregationConstraint c);

// Throws DimensionError unless high.size() == k * low.size().
void check_paired(const TimeSeries& high, const TimeSeries& low, AggregationConstraint c);

enum class MethodKind { Original, Denton, DagumCholette, ElementaryWavelet, Wavelet };

struct Method {
    MethodKind kind = MethodKind::Original;
    int denton_order = 0; // only meaningful for MethodKind::Denton

    static Method original() { return {MethodKind::Original, 0}; }
    static Method denton(int order) { return {MethodKind::Denton, order}; }
    static Method dagum_cholette() { return {MethodKind::DagumCholette, 0}; }
    static Method elementary() { return {MethodKind::ElementaryWavelet, 0}; }
    static Method wavelet() { return {MethodKind::Wavelet, 0}; }

    bool binding() const noexcept { return kind != MethodKind::Original; }
    std::string label() const;

    friend bool operator==(const Method&, const Method&) = default;
};

struct BenchmarkResult {
    TimeSeries benchmarked;
    Method method;
    std::vector<double> constraint_residual;
    std::optional<TimeSeries> seasonal;

    double max_abs_residual() const;
};

// Packages a benchmarked series with its residual against `low`.
BenchmarkResult make_result(TimeSeries benchmarked,
                            Method method,
                            const TimeSeries& low,
                            AggregationConstraint c,
                            std::optional<TimeSeries> seasonal = std::nullopt);

// max |residual| <= rel_tol * (1 + max |low|)
bool satisfies_constraint(const BenchmarkResult& result, const TimeSeries& low, double rel_tol = 1e-8);

// The unadjusted high-frequency series, reported through the common result type.
BenchmarkResult original_benchmark(const TimeSeries& high, const TimeSeries& low, AggregationConstraint c);

} // namespace wavebench
