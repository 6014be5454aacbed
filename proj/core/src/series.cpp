#include "wavebench/series.hpp"

#include <algorithm>
#include <cmath>

#include "wavebench/errors.hpp"

namespace wavebench {

TimeSeries::TimeSeries(std::vector<double> values, std::int64_t start_index, std::optional<int> freq_per_low)
    : values_(std::move(values)), start_index_(start_index), freq_per_low_(freq_per_low) {
    if (values_.empty()) {
        throw DomainError("time series must contain at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("time series value at position " + std::to_string(i) + " is not finite");
        }
    }
    if (freq_per_low_ && *freq_per_low_ <= 0) {
        throw ConfigError("freq_per_low must be positive");
    }
}

TimeSeries TimeSeries::from_vector(const Eigen::VectorXd& values,
                                   std::int64_t start_index,
                                   std::optional<int> freq_per_low) {
    return TimeSeries(std::vector<double>(values.data(), values.data() + values.size()),
                      start_index, freq_per_low);
}

Eigen::Map<const Eigen::VectorXd> TimeSeries::as_vector() const {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
    if (values.size() != values_.size()) {
        throw DimensionError("replacement values have length " + std::to_string(values.size()) +
                             ", expected " + std::to_string(values_.size()));
    }
    return TimeSeries(std::move(values), start_index_, freq_per_low_);
}

TimeSeries TimeSeries::with_values(const Eigen::VectorXd& values) const {
    return with_values(std::vector<double>(values.data(), values.data() + values.size()));
}

TimeSeries TimeSeries::head(std::size_t count) const {
    if (count == 0 || count > values_.size()) {
        throw DimensionError("head(" + std::to_string(count) + ") of a series of length " +
                             std::to_string(values_.size()));
    }
    return TimeSeries(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(count)),
                      start_index_, freq_per_low_);
}

AggregationConstraint::AggregationConstraint(int factor_k) : factor_k_(factor_k) {
    if (factor_k_ < 1) {
        throw ConfigError("aggregation factor must be a positive integer, got " + std::to_string(factor_k));
    }
}

std::size_t AggregationConstraint::low_length(std::size_t high_length) const {
    const auto k = static_cast<std::size_t>(factor_k_);
    if (high_length % k != 0) {
        throw DimensionError("series length " + std::to_string(high_length) +
                             " is not divisible by the aggregation factor " + std::to_string(k));
    }
    return high_length / k;
}

Eigen::VectorXd block_sums(const Eigen::Ref<const Eigen::VectorXd>& high, int k) {
    const auto m = AggregationConstraint(k).low_length(static_cast<std::size_t>(high.size()));
    Eigen::VectorXd out(static_cast<Eigen::Index>(m));
    for (Eigen::Index s = 0; s < out.size(); ++s) {
        out[s] = high.segment(s * k, k).sum();
    }
    return out;
}

TimeSeries aggregate(const TimeSeries& high, AggregationConstraint c) {
    const Eigen::VectorXd sums = block_sums(high.as_vector(), c.factor_k());
    // Low periods are numbered from 1.
    return TimeSeries::from_vector(sums, 1);
}

void check_paired(const TimeSeries& high, const TimeSeries& low, AggregationConstraint c) {
    const auto m = c.low_length(high.size());
    if (m != low.size()) {
        throw DimensionError("high series of length " + std::to_string(high.size()) + " with k=" +
                             std::to_string(c.factor_k()) + " needs a low series of length " +
                             std::to_string(m) + ", got " + std::to_string(low.size()));
    }
}

std::vector<double> constraint_residual(const TimeSeries& high, const TimeSeries& low, AggregationConstraint c) {
    check_paired(high, low, c);
    const Eigen::VectorXd sums = block_sums(high.as_vector(), c.factor_k());
    std::vector<double> out(low.size());
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = low[s] - sums[static_cast<Eigen::Index>(s)];
    }
    return out;
}

std::string Method::label() const {
    switch (kind) {
    case MethodKind::Original:
        return "Original";
    case MethodKind::Denton:
        return "Denton " + std::to_string(denton_order);
    case MethodKind::DagumCholette:
        return "Dagum and Cholette";
    case MethodKind::ElementaryWavelet:
        return "Elementary Wavelet";
    case MethodKind::Wavelet:
        return "Wavelet";
    }
    return "Unknown";
}

double BenchmarkResult::max_abs_residual() const {
    double worst = 0.0;
    for (double r : constraint_residual) {
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

BenchmarkResult make_result(TimeSeries benchmarked,
                            Method method,
                            const TimeSeries& low,
                            AggregationConstraint c,
                            std::optional<TimeSeries> seasonal) {
    auto residual = constraint_residual(benchmarked, low, c);
    return BenchmarkResult{std::move(benchmarked), method, std::move(residual), std::move(seasonal)};
}

bool satisfies_constraint(const BenchmarkResult& result, const TimeSeries& low, double rel_tol) {
    double scale = 0.0;
    for (double v : low.values()) {
        scale = std::max(scale, std::abs(v));
    }
    return result.max_abs_residual() <= rel_tol * (1.0 + scale);
}

BenchmarkResult original_benchmark(const TimeSeries& high, const TimeSeries& low, AggregationConstraint c) {
    check_paired(high, low, c);
    return make_result(high, Method::original(), low, c);
}

} // namespace wavebench
