#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "wavebench/series.hpp"

namespace wavebench {

/// Linear Gaussian state-space model with periodically time-varying system
/// matrices:
///
///   y_t       = Z_t a_t + e_t,       e_t ~ N(0, obs_noise_var)
///   a_{t+1}   = T_t a_t + w_t,       w_t ~ N(0, Q_t)
///   a_0       ~ N(initial_mean, initial_cov)
///
/// Z_t, T_t and Q_t are taken from entry t mod P of their vectors (each
/// vector has length 1 or P). t is 0-based.
struct StateSpaceModel {
    std::vector<Eigen::RowVectorXd> obs_map;
    std::vector<Eigen::MatrixXd> transition;
    std::vector<Eigen::MatrixXd> state_noise_cov;
    double obs_noise_var = 0.0;
    Eigen::VectorXd initial_mean;
    Eigen::MatrixXd initial_cov;

    Eigen::Index state_dim() const noexcept { return initial_mean.size(); }

    // Dimension consistency and symmetric PSD covariances; throws
    // DimensionError / DomainError.
    void validate() const;
};

struct PeriodicSeasonalSpec {
    int period_k = 4;
    double sigma2_omega = 0.0;     // seasonal random-walk disturbance (per year)
    double sigma2_level = 0.0;
    double sigma2_slope = 0.0;
    double sigma2_irregular = 0.0;
};

// sigma2 * (I_k - 11'/k)
Eigen::MatrixXd seasonal_disturbance_cov(int k, double sigma2);

/// Local linear trend plus a zero-sum periodic seasonal block.
///
/// State is [level, slope, gamma_1, ..., gamma_k]; observation t reads
/// level + gamma_{(t mod k) + 1}. The seasonal vector takes one random-walk
/// step with covariance seasonal_disturbance_cov at each block boundary and
/// is otherwise constant. Initial means are zero; the initial covariance is
/// `diffuse_var` on level and slope and diffuse_var * (I - 11'/k) on the
/// seasonal block, so seasonal sums start (and stay) at zero.
StateSpaceModel build_periodic_model(const PeriodicSeasonalSpec& spec, double diffuse_var = 1e7);

struct KalmanOutput {
    std::vector<Eigen::VectorXd> predicted_means; // a_t given y_0..y_{t-1}
    std::vector<Eigen::MatrixXd> predicted_covs;
    std::vector<Eigen::VectorXd> filtered_means; // a_t given y_0..y_t
    std::vector<Eigen::MatrixXd> filtered_covs;
    Eigen::VectorXd innovations;
    Eigen::VectorXd innovation_vars; // 0 marks a perfectly predicted (skipped) observation
    double log_likelihood = 0.0;
};

/// Kalman filter with prediction-error-decomposition log-likelihood.
///
/// An observation with vanishing innovation variance and innovation is
/// treated as carrying no information; a vanishing variance with a non-zero
/// innovation throws NumericalError.
KalmanOutput kalman_filter(const StateSpaceModel& model, std::span<const double> obs);
KalmanOutput kalman_filter(const StateSpaceModel& model, const TimeSeries& obs);

// Log-likelihood only, without storing the filtered path.
double kalman_log_likelihood(const StateSpaceModel& model, std::span<const double> obs);

// kalman_log_likelihood(build_periodic_model(spec, diffuse_var), obs), using
// the model's sparsity; this is what the variance fit evaluates.
double periodic_log_likelihood(const PeriodicSeasonalSpec& spec, std::span<const double> obs, double diffuse_var = 1e7);

// Fixed-interval smoothed state means (backward state-smoothing recursion
// that never inverts a predicted covariance).
std::vector<Eigen::VectorXd> kalman_smooth(const StateSpaceModel& model, std::span<const double> obs);
std::vector<Eigen::VectorXd> kalman_smooth(const StateSpaceModel& model, const TimeSeries& obs);

struct VarianceFitOptions {
    // Grid exponents (base 10) for each variance relative to the variance of
    // the first differences of the data.
    std::vector<double> grid_exponents{-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0};
    int max_refine_iterations = 600;
    double simplex_tolerance = 1e-4; // natural-log units
    double diffuse_factor = 1e7;
};

struct VarianceFit {
    PeriodicSeasonalSpec spec;
    double log_likelihood = 0.0;
    bool converged = false;
    int evaluations = 0;
};

/// Maximum-likelihood variances of the periodic model.
///
/// A fixed grid over the four log-variances picks the start (first best wins
/// ties), then a Nelder-Mead simplex refines it. `converged` is false when
/// the simplex hit the iteration cap; the best point found is still returned.
VarianceFit fit_variances(const TimeSeries& obs, int k, const VarianceFitOptions& options = {});

// Diffuse variance used for a given series: factor * sample variance (or
// factor when the series is constant).
double diffuse_variance(std::span<const double> obs, double factor);

struct SeasonalAdjustment {
    TimeSeries adjusted;
    TimeSeries gamma_hat;
    VarianceFit fit;
};

/// Fits the periodic model, smooths it, and returns the seasonal path
/// projected so every length-k block sums to zero, with adjusted = obs - gamma_hat.
SeasonalAdjustment seasonal_adjust(const TimeSeries& obs, int k, const VarianceFitOptions& options = {});

// Smoothed seasonal path for known variances, projected to zero block sums.
TimeSeries smoothed_seasonal(const TimeSeries& obs, const PeriodicSeasonalSpec& spec, double diffuse_factor = 1e7);

} // namespace wavebench
