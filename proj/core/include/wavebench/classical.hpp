#pragma once

#include <Eigen/Core>

#include "wavebench/series.hpp"

namespace wavebench {

struct DentonConfig {
    int order_h = 1; // 1 = first differences, 2 = second differences
};

struct DagumCholetteConfig {
    double rho = 0.729; // 0.9^3, the usual quarterly choice
    bool include_bias = false;
};

// n x m block-diagonal matrix of k-length ones vectors (k = n / m).
Eigen::MatrixXd aggregation_matrix(Eigen::Index n, Eigen::Index m);

// n x n lower bidiagonal first-difference matrix with first row [1, 0, ..., 0].
Eigen::MatrixXd difference_matrix(Eigen::Index n);

// Stationary AR(1) covariance with unit innovation variance:
// rho^|i-j| / (1 - rho^2).
Eigen::MatrixXd ar1_covariance(Eigen::Index n, double rho);

/// Additive Denton benchmarking of order h.
///
/// Minimizes d' (D^h)' D^h d over adjustments d = benchmarked - high, subject
/// to the block sums of the benchmarked series equalling `low`. D keeps its
/// first row, so the first adjustment is penalized as well (no boundary
/// correction). Throws NumericalError when the reduced constraint system is
/// numerically singular.
BenchmarkResult denton_benchmark(const TimeSeries& high,
                                 const TimeSeries& low,
                                 AggregationConstraint c,
                                 DentonConfig cfg = {});

/// Binding Dagum-Cholette benchmarking with AR(1) high-frequency errors.
///
/// Minimizes d' V^{-1} d subject to the binding constraint, V =
/// ar1_covariance(n, rho). With include_bias a constant bias b (H = 1) is
/// estimated jointly by GLS and the benchmarked series excludes it.
BenchmarkResult dagum_cholette_benchmark(const TimeSeries& high,
                                         const TimeSeries& low,
                                         AggregationConstraint c,
                                         DagumCholetteConfig cfg = {});

} // namespace wavebench
