#include "wavebench/metrics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "wavebench/errors.hpp"

namespace wavebench {

double mse(const TimeSeries& estimate, const TimeSeries& truth) {
    if (estimate.size() != truth.size()) {
        throw DimensionError("mse needs equal lengths, got " + std::to_string(estimate.size()) + " and " +
                             std::to_string(truth.size()));
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < estimate.size(); ++t) {
        const double d = estimate[t] - truth[t];
        acc += d * d;
    }
    return acc / static_cast<double>(estimate.size());
}

double revision_metric(const TimeSeries& base, std::span<const TimeSeries> extensions, int k) {
    if (k < 1) {
        throw ConfigError("k must be >= 1");
    }
    if (base.size() < static_cast<std::size_t>(k)) {
        throw DimensionError("base series is shorter than one block");
    }
    if (extensions.empty()) {
        throw DimensionError("revision metric needs at least one extension");
    }
    const std::size_t first = base.size() - static_cast<std::size_t>(k);
    for (std::size_t t = first; t < base.size(); ++t) {
        if (base[t] == 0.0) {
            throw DomainError("base value at period " + std::to_string(base.start_index() + static_cast<std::int64_t>(t)) +
                              " is zero");
        }
    }
    double total = 0.0;
    for (const auto& ext : extensions) {
        const std::int64_t offset = base.start_index() - ext.start_index();
        if (offset < 0 || static_cast<std::size_t>(offset) + base.size() > ext.size()) {
            throw DimensionError("extension does not cover the base period range");
        }
        double acc = 0.0;
        for (std::size_t t = first; t < base.size(); ++t) {
            acc += std::abs(1.0 - ext[static_cast<std::size_t>(offset) + t] / base[t]);
        }
        total += 100.0 * acc / k;
    }
    return total / static_cast<double>(extensions.size());
}

double revision_metric(const BenchmarkResult& base, std::span<const BenchmarkResult> extensions, int k) {
    std::vector<TimeSeries> ext;
    ext.reserve(extensions.size());
    for (const auto& e : extensions) {
        ext.push_back(e.benchmarked);
    }
    return revision_metric(base.benchmarked, ext, k);
}

} // namespace wavebench
