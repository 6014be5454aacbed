#pragma once

#include <span>

#include "wavebench/series.hpp"

namespace wavebench {

// (1/n) sum (estimate_t - truth_t)^2
double mse(const TimeSeries& estimate, const TimeSeries& truth);

/// Mean over extensions of 100 * (1/k) * sum |1 - extended_t / base_t|, the
/// sum running over the base's last k points. Extensions are matched to the
/// base by period label, so each must cover the base's range.
double revision_metric(const BenchmarkResult& base, std::span<const BenchmarkResult> extensions, int k);
double revision_metric(const TimeSeries& base, std::span<const TimeSeries> extensions, int k);

} // namespace wavebench
