#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "wavebench/series.hpp"
#include "wavebench/uh_wavelet.hpp"

namespace wavebench {

struct LevelNoiseEstimate {
    int level_j = 1;     // level the estimate is attached to
    double sigma2 = 0.0; // noise variance on the orthonormal-coefficient scale
    int n_used = 1;      // non-boundary coefficients averaged
};

struct ThresholdPlan {
    std::map<int, double> lambda_by_level;
};

// sgn(w) * max(|w| - lambda, 0)
double soft_threshold(double w, double lambda);

// Haar MODWT wavelet coefficients at `level` (1 = finest) with periodic
// extension; entry t uses x_t, x_{t-1}, ..., x_{t-2^level+1}.
std::vector<double> haar_modwt(std::span<const double> series, int level);

/// Unbiased Haar MODWT wavelet variance at `level`, scaled by 2^level.
///
/// Boundary coefficients (the first 2^level - 1) are excluded. The scaling
/// makes white noise with variance s^2 estimate s^2 at every level, which is
/// the variance of its orthonormal DWT coefficients.
LevelNoiseEstimate modwt_level_variance(const TimeSeries& series, int level);
LevelNoiseEstimate modwt_level_variance(std::span<const double> series, int level);

// sum_i [sigma2 - 2 sigma2 1(|w_i| <= lambda) + min(w_i^2, lambda^2)]
double sure_risk(std::span<const double> coeffs, double sigma2, double lambda);

// Minimizer of sure_risk over {0} U {|w_i|}; the smallest one on ties.
double sure_lambda(std::span<const double> coeffs, double sigma2);

/// SURE threshold per requested level. `noise` is keyed by wavelet level; a
/// level whose noise variance is zero gets lambda = 0.
ThresholdPlan plan_thresholds(const WaveletCoefficients& coeffs,
                              const std::set<int>& levels,
                              const std::map<int, LevelNoiseEstimate>& noise);

WaveletCoefficients apply_thresholds(const WaveletCoefficients& coeffs, const ThresholdPlan& plan);

// plan_thresholds followed by apply_thresholds.
WaveletCoefficients threshold_details(const WaveletCoefficients& coeffs,
                                      const std::set<int>& levels,
                                      const std::map<int, LevelNoiseEstimate>& noise);

} // namespace wavebench
