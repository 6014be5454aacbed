#pragma once

#include <optional>

#include "wavebench/periodic_seasonal.hpp"
#include "wavebench/series.hpp"
#include "wavebench/uh_wavelet.hpp"

namespace wavebench {

// Scale between a low coefficient and the matching high coefficient: sqrt(k).
double replacement_scale(int k);

/// Replaces the father and every high coefficient at levels up to the low
/// basis depth with the matching low coefficient divided by sqrt(k); finer
/// high levels (the within-block detail) are kept.
///
/// The replacement leaves the within-block deviations of `high` untouched and
/// sets each block mean to low / k, so the output is evaluated in that
/// block-local form: later data can never perturb earlier blocks, not even by
/// round-off.
BenchmarkResult elementary_benchmark(const TimeSeries& high, const TimeSeries& low, AggregationConstraint c);

// The same map computed on the paired coefficient trees (transform, replace,
// inverse).
BenchmarkResult elementary_benchmark_by_replacement(const TimeSeries& high,
                                                    const TimeSeries& low,
                                                    AggregationConstraint c);

// The same replacement on coefficients; `high` is modified in place.
void replace_coarse_coefficients(WaveletCoefficients& high,
                                 const WaveletCoefficients& low,
                                 const UHBasis& low_basis,
                                 int k);

struct WaveletBenchmarkConfig {
    bool apply_thresholding = true;
    std::optional<int> seasonal_period; // must equal k when set
    VarianceFitOptions fit_options;
};

/// Full pipeline: optional seasonal adjustment, coefficient replacement,
/// SURE soft thresholding of the within-block levels, inverse transform and
/// re-addition of the seasonal estimate.
///
/// Noise for within-block wavelet level j is the Haar MODWT variance of the
/// (adjusted) high series at MODWT level depth + 1 - j, where depth is the
/// deepest high level, so the finest wavelets pair with MODWT level 1.
BenchmarkResult wavelet_benchmark(const TimeSeries& high,
                                  const TimeSeries& low,
                                  AggregationConstraint c,
                                  const WaveletBenchmarkConfig& cfg = {});

} // namespace wavebench
