#include "wavebench/periodic_seasonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "wavebench/errors.hpp"

namespace wavebench {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_psd(const MatrixXd& m, const std::string& what) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (!m.isApprox(m.transpose(), 1e-12) && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw DomainError(what + " is not symmetric");
    }
    if (m.size() == 0) {
        return;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
        throw DomainError(what + " is not positive semi-definite");
    }
}

// Row-compressed copy of a small matrix; system matrices here are mostly zeros.
struct SparseRows {
    std::vector<std::vector<std::pair<Index, double>>> rows;

    explicit SparseRows(const MatrixXd& m) : rows(static_cast<std::size_t>(m.rows())) {
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                if (m(i, j) != 0.0) {
                    rows[static_cast<std::size_t>(i)].emplace_back(j, m(i, j));
                }
            }
        }
    }

    // out = this * in
    void left_apply(const MatrixXd& in, MatrixXd& out) const {
        out.setZero(static_cast<Index>(rows.size()), in.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (const auto& [j, v] : rows[i]) {
                out.row(static_cast<Index>(i)) += v * in.row(j);
            }
        }
    }

    void apply(const VectorXd& in, VectorXd& out) const {
        out.setZero(static_cast<Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double acc = 0.0;
            for (const auto& [j, v] : rows[i]) {
                acc += v * in(j);
            }
            out(static_cast<Index>(i)) = acc;
        }
    }
};

struct SparseVec {
    std::vector<std::pair<Index, double>> entries;

    explicit SparseVec(const RowVectorXd& z) {
        for (Index j = 0; j < z.size(); ++j) {
            if (z(j) != 0.0) {
                entries.emplace_back(j, z(j));
            }
        }
    }

    double dot(const VectorXd& x) const {
        double acc = 0.0;
        for (const auto& [j, v] : entries) {
            acc += v * x(j);
        }
        return acc;
    }

    // P z'
    void column_combo(const MatrixXd& p, VectorXd& out) const {
        out.setZero(p.rows());
        for (const auto& [j, v] : entries) {
            out += v * p.col(j);
        }
    }
};

struct CompiledModel {
    std::vector<SparseVec> z;
    std::vector<SparseRows> t;
    std::vector<MatrixXd> q;
    std::vector<bool> q_zero;
    double h;
    double degenerate_f;

    explicit CompiledModel(const StateSpaceModel& model) : h(model.obs_noise_var) {
        for (const auto& row : model.obs_map) {
            z.emplace_back(row);
        }
        for (const auto& m : model.transition) {
            t.emplace_back(m);
        }
        for (const auto& m : model.state_noise_cov) {
            q.push_back(m);
            q_zero.push_back(m.isZero(0.0));
        }
        const double p0 = model.initial_cov.size() > 0 ? model.initial_cov.cwiseAbs().maxCoeff() : 0.0;
        degenerate_f = 1e-13 * std::max({1.0, p0, std::abs(h)});
    }
};

struct FilterStore {
    std::vector<VectorXd>* predicted_means = nullptr;
    std::vector<MatrixXd>* predicted_covs = nullptr;
    std::vector<VectorXd>* filtered_means = nullptr;
    std::vector<MatrixXd>* filtered_covs = nullptr;
    VectorXd* innovations = nullptr;
    VectorXd* innovation_vars = nullptr;
};

double run_filter(const StateSpaceModel& model, std::span<const double> obs, const FilterStore& store) {
    const CompiledModel cm(model);
    const Index d = model.state_dim();
    VectorXd a = model.initial_mean;
    MatrixXd p = model.initial_cov;
    VectorXd pz(d);
    VectorXd next(d);
    MatrixXd tp(d, d);
    MatrixXd tpt(d, d);
    double loglik = 0.0;

    for (std::size_t t = 0; t < obs.size(); ++t) {
        if (store.predicted_means != nullptr) {
            store.predicted_means->push_back(a);
            store.predicted_covs->push_back(p);
        }
        const auto& z = cm.z[t % cm.z.size()];
        z.column_combo(p, pz);
        const double f = z.dot(pz) + cm.h;
        const double v = obs[t] - z.dot(a);

        if (f <= cm.degenerate_f) {
            if (std::abs(v) > 1e-8 * (1.0 + std::abs(obs[t])) + std::sqrt(cm.degenerate_f)) {
                throw NumericalError("innovation variance vanished at t=" + std::to_string(t) +
                                     " with non-zero innovation " + std::to_string(v));
            }
            if (store.innovations != nullptr) {
                (*store.innovations)(static_cast<Index>(t)) = 0.0;
                (*store.innovation_vars)(static_cast<Index>(t)) = 0.0;
            }
        } else {
            if (!std::isfinite(f)) {
                throw NumericalError("non-finite innovation variance at t=" + std::to_string(t));
            }
            loglik -= 0.5 * (kLog2Pi + std::log(f) + v * v / f);
            a += pz * (v / f);
            p.noalias() -= pz * (pz.transpose() / f);
            if (store.innovations != nullptr) {
                (*store.innovations)(static_cast<Index>(t)) = v;
                (*store.innovation_vars)(static_cast<Index>(t)) = f;
            }
        }
        if (store.filtered_means != nullptr) {
            store.filtered_means->push_back(a);
            store.filtered_covs->push_back(p);
        }

        const std::size_t ti = t % cm.t.size();
        cm.t[ti].apply(a, next);
        a.swap(next);
        cm.t[ti].left_apply(p, tp);
        tp.transposeInPlace();
        cm.t[ti].left_apply(tp, tpt);
        const std::size_t qi = t % cm.q.size();
        if (!cm.q_zero[qi]) {
            tpt += cm.q[qi];
        }
        p = 0.5 * (tpt + tpt.transpose());
    }
    return loglik;
}

// The periodic model's filter written against its structure: Z picks two
// state entries, T only adds the slope to the level, Q is diagonal apart
// from the seasonal block at block ends. Same arithmetic and degeneracy
// rules as run_filter, without per-step allocation.
double periodic_filter(const PeriodicSeasonalSpec& spec, double diffuse_var, std::span<const double> obs) {
    const std::size_t k = static_cast<std::size_t>(spec.period_k);
    const std::size_t d = k + 2;
    std::vector<double> a(d, 0.0);
    std::vector<double> p(d * d, 0.0);
    std::vector<double> pz(d);
    p[0] = diffuse_var;
    p[d + 1] = diffuse_var;
    for (std::size_t i = 2; i < d; ++i) {
        for (std::size_t j = 2; j < d; ++j) {
            p[i * d + j] = (i == j ? diffuse_var : 0.0) - diffuse_var / static_cast<double>(k);
        }
    }
    const double h = spec.sigma2_irregular;
    const double degenerate_f = 1e-13 * std::max({1.0, diffuse_var, h});
    const double omega_diag = spec.sigma2_omega - spec.sigma2_omega / static_cast<double>(k);
    const double omega_off = -spec.sigma2_omega / static_cast<double>(k);
    double loglik = 0.0;

    for (std::size_t t = 0; t < obs.size(); ++t) {
        const std::size_t s = t % k;
        const std::size_t c = 2 + s;
        for (std::size_t i = 0; i < d; ++i) {
            pz[i] = p[i * d] + p[i * d + c];
        }
        const double f = pz[0] + pz[c] + h;
        const double v = obs[t] - (a[0] + a[c]);
        if (f <= degenerate_f) {
            if (std::abs(v) > 1e-8 * (1.0 + std::abs(obs[t])) + std::sqrt(degenerate_f)) {
                throw NumericalError("innovation variance vanished at t=" + std::to_string(t));
            }
        } else {
            if (!std::isfinite(f)) {
                throw NumericalError("non-finite innovation variance at t=" + std::to_string(t));
            }
            loglik -= 0.5 * (kLog2Pi + std::log(f) + v * v / f);
            const double gain = v / f;
            for (std::size_t i = 0; i < d; ++i) {
                a[i] += pz[i] * gain;
            }
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i; j < d; ++j) {
                    const double upd = p[i * d + j] - pz[i] * pz[j] / f;
                    p[i * d + j] = upd;
                    p[j * d + i] = upd;
                }
            }
        }

        a[0] += a[1];
        for (std::size_t j = 0; j < d; ++j) {
            p[j] += p[d + j];
        }
        for (std::size_t i = 0; i < d; ++i) {
            p[i * d] += p[i * d + 1];
        }
        p[0] += spec.sigma2_level;
        p[d + 1] += spec.sigma2_slope;
        if (s == k - 1) {
            for (std::size_t i = 2; i < d; ++i) {
                for (std::size_t j = 2; j < d; ++j) {
                    p[i * d + j] += i == j ? omega_diag : omega_off;
                }
            }
        }
    }
    return loglik;
}

void check_obs(const StateSpaceModel& model, std::span<const double> obs) {
    model.validate();
    for (double y : obs) {
        if (!std::isfinite(y)) {
            throw DomainError("observations must be finite");
        }
    }
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return ss / static_cast<double>(x.size() - 1);
}

void block_center(std::vector<double>& gamma, int k) {
    for (std::size_t s = 0; s + static_cast<std::size_t>(k) <= gamma.size(); s += static_cast<std::size_t>(k)) {
        double mean = 0.0;
        for (int i = 0; i < k; ++i) {
            mean += gamma[s + static_cast<std::size_t>(i)];
        }
        mean /= k;
        for (int i = 0; i < k; ++i) {
            gamma[s + static_cast<std::size_t>(i)] -= mean;
        }
    }
}

void check_period(int k) {
    if (k < 2) {
        throw ConfigError("seasonal period must be >= 2, got " + std::to_string(k));
    }
}

// Minimizer state shared with the GSL callback.
struct FitProblem {
    std::span<const double> obs;
    int k;
    double scale;
    double diffuse_var;
    int evaluations = 0;
};

constexpr double kMinLogVar = -18.420680743952367; // log(1e-8)
constexpr double kMaxLogVar = 9.2103403719761836;  // log(1e4)

PeriodicSeasonalSpec spec_from(const double* x, const FitProblem& prob) {
    auto var = [&](double v) { return prob.scale * std::exp(std::clamp(v, kMinLogVar, kMaxLogVar)); };
    PeriodicSeasonalSpec spec;
    spec.period_k = prob.k;
    spec.sigma2_irregular = var(x[0]);
    spec.sigma2_level = var(x[1]);
    spec.sigma2_slope = var(x[2]);
    spec.sigma2_omega = var(x[3]);
    return spec;
}

double negative_loglik(const double* x, FitProblem& prob) {
    ++prob.evaluations;
    try {
        const double ll = periodic_filter(spec_from(x, prob), prob.diffuse_var, prob.obs);
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
    } catch (const NumericalError&) {
        return std::numeric_limits<double>::max();
    }
}

double gsl_objective(const gsl_vector* x, void* params) {
    auto& prob = *static_cast<FitProblem*>(params);
    const double xs[4] = {gsl_vector_get(x, 0), gsl_vector_get(x, 1), gsl_vector_get(x, 2), gsl_vector_get(x, 3)};
    return negative_loglik(xs, prob);
}

void silence_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

} // namespace

void StateSpaceModel::validate() const {
    const Index d = state_dim();
    if (d == 0) {
        throw DimensionError("state dimension must be positive");
    }
    if (obs_map.empty() || transition.empty() || state_noise_cov.empty()) {
        throw DimensionError("system matrix sequences must be non-empty");
    }
    if (initial_cov.rows() != d || initial_cov.cols() != d) {
        throw DimensionError("initial covariance does not match the state dimension");
    }
    for (const auto& z : obs_map) {
        if (z.size() != d) {
            throw DimensionError("observation map does not match the state dimension");
        }
    }
    for (const auto& t : transition) {
        if (t.rows() != d || t.cols() != d) {
            throw DimensionError("transition does not match the state dimension");
        }
    }
    for (const auto& q : state_noise_cov) {
        if (q.rows() != d || q.cols() != d) {
            throw DimensionError("state noise covariance does not match the state dimension");
        }
        check_psd(q, "state noise covariance");
    }
    check_psd(initial_cov, "initial covariance");
    if (!(obs_noise_var >= 0.0) || !std::isfinite(obs_noise_var)) {
        throw DomainError("observation noise variance must be finite and non-negative");
    }
}

MatrixXd seasonal_disturbance_cov(int k, double sigma2) {
    check_period(k);
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw DomainError("seasonal variance must be finite and non-negative");
    }
    MatrixXd m = MatrixXd::Constant(k, k, -sigma2 / k);
    m.diagonal().array() += sigma2;
    return m;
}

StateSpaceModel build_periodic_model(const PeriodicSeasonalSpec& spec, double diffuse_var) {
    const int k = spec.period_k;
    check_period(k);
    for (double v : {spec.sigma2_omega, spec.sigma2_level, spec.sigma2_slope, spec.sigma2_irregular}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("variances must be finite and non-negative");
        }
    }
    if (!(diffuse_var >= 0.0) || !std::isfinite(diffuse_var)) {
        throw ConfigError("diffuse variance must be finite and non-negative");
    }
    const Index d = k + 2;
    StateSpaceModel model;

    MatrixXd t = MatrixXd::Identity(d, d);
    t(0, 1) = 1.0;
    model.transition.push_back(std::move(t));

    MatrixXd q = MatrixXd::Zero(d, d);
    q(0, 0) = spec.sigma2_level;
    q(1, 1) = spec.sigma2_slope;
    for (int s = 0; s < k; ++s) {
        RowVectorXd z = RowVectorXd::Zero(d);
        z(0) = 1.0;
        z(2 + s) = 1.0;
        model.obs_map.push_back(std::move(z));
        if (s == k - 1) {
            MatrixXd boundary = q;
            boundary.bottomRightCorner(k, k) = seasonal_disturbance_cov(k, spec.sigma2_omega);
            model.state_noise_cov.push_back(std::move(boundary));
        } else {
            model.state_noise_cov.push_back(q);
        }
    }
    model.obs_noise_var = spec.sigma2_irregular;
    model.initial_mean = VectorXd::Zero(d);
    model.initial_cov = MatrixXd::Zero(d, d);
    model.initial_cov(0, 0) = diffuse_var;
    model.initial_cov(1, 1) = diffuse_var;
    model.initial_cov.bottomRightCorner(k, k) = seasonal_disturbance_cov(k, diffuse_var);
    return model;
}

KalmanOutput kalman_filter(const StateSpaceModel& model, std::span<const double> obs) {
    check_obs(model, obs);
    KalmanOutput out;
    const auto n = static_cast<Index>(obs.size());
    out.innovations = VectorXd::Zero(n);
    out.innovation_vars = VectorXd::Zero(n);
    out.predicted_means.reserve(obs.size());
    out.predicted_covs.reserve(obs.size());
    out.filtered_means.reserve(obs.size());
    out.filtered_covs.reserve(obs.size());
    FilterStore store{&out.predicted_means, &out.predicted_covs, &out.filtered_means,
                      &out.filtered_covs,   &out.innovations,    &out.innovation_vars};
    out.log_likelihood = run_filter(model, obs, store);
    return out;
}

double periodic_log_likelihood(const PeriodicSeasonalSpec& spec, std::span<const double> obs, double diffuse_var) {
    build_periodic_model(spec, diffuse_var).validate();
    for (double y : obs) {
        if (!std::isfinite(y)) {
            throw DomainError("observations must be finite");
        }
    }
    return periodic_filter(spec, diffuse_var, obs);
}

KalmanOutput kalman_filter(const StateSpaceModel& model, const TimeSeries& obs) {
    return kalman_filter(model, obs.values());
}

double kalman_log_likelihood(const StateSpaceModel& model, std::span<const double> obs) {
    check_obs(model, obs);
    return run_filter(model, obs, {});
}

std::vector<VectorXd> kalman_smooth(const StateSpaceModel& model, std::span<const double> obs) {
    const KalmanOutput filt = kalman_filter(model, obs);
    const Index d = model.state_dim();
    const std::size_t n = obs.size();
    std::vector<VectorXd> smoothed(n);
    VectorXd r = VectorXd::Zero(d); // r_t, weighted sum of future innovations
    for (std::size_t idx = n; idx-- > 0;) {
        const auto& tm = model.transition[idx % model.transition.size()];
        const auto& z = model.obs_map[idx % model.obs_map.size()];
        const double f = filt.innovation_vars(static_cast<Index>(idx));
        VectorXd r_prev;
        if (f > 0.0) {
            const double v = filt.innovations(static_cast<Index>(idx));
            const VectorXd k_gain = tm * (filt.predicted_covs[idx] * z.transpose()) / f;
            // L' r with L = T - K z
            r_prev = z.transpose() * (v / f) + tm.transpose() * r - z.transpose() * k_gain.dot(r);
        } else {
            r_prev = tm.transpose() * r;
        }
        smoothed[idx] = filt.predicted_means[idx] + filt.predicted_covs[idx] * r_prev;
        r = std::move(r_prev);
    }
    return smoothed;
}

std::vector<VectorXd> kalman_smooth(const StateSpaceModel& model, const TimeSeries& obs) {
    return kalman_smooth(model, obs.values());
}

double diffuse_variance(std::span<const double> obs, double factor) {
    const double var = sample_variance(obs);
    return factor * (var > 0.0 ? var : 1.0);
}

VarianceFit fit_variances(const TimeSeries& obs, int k, const VarianceFitOptions& options) {
    check_period(k);
    if (obs.size() < static_cast<std::size_t>(3 * k)) {
        throw DimensionError("variance fitting needs at least " + std::to_string(3 * k) + " observations, got " +
                             std::to_string(obs.size()));
    }
    if (options.grid_exponents.empty()) {
        throw ConfigError("variance grid must be non-empty");
    }
    const auto y = obs.values();
    std::vector<double> diffs(y.size() - 1);
    for (std::size_t i = 1; i < y.size(); ++i) {
        diffs[i - 1] = y[i] - y[i - 1];
    }
    double scale = sample_variance(diffs);
    if (!(scale > 0.0)) {
        scale = sample_variance(y);
    }
    if (!(scale > 0.0)) {
        scale = 1.0;
    }
    FitProblem prob{y, k, scale, diffuse_variance(y, options.diffuse_factor)};

    std::vector<double> grid;
    for (double e : options.grid_exponents) {
        grid.push_back(e * std::numbers::ln10);
    }
    const std::size_t g = grid.size();
    double best_x[4] = {grid[0], grid[0], grid[0], grid[0]};
    double best_f = std::numeric_limits<double>::infinity();
    for (std::size_t i0 = 0; i0 < g; ++i0) {
        for (std::size_t i1 = 0; i1 < g; ++i1) {
            for (std::size_t i2 = 0; i2 < g; ++i2) {
                for (std::size_t i3 = 0; i3 < g; ++i3) {
                    const double x[4] = {grid[i0], grid[i1], grid[i2], grid[i3]};
                    const double f = negative_loglik(x, prob);
                    if (f < best_f) {
                        best_f = f;
                        std::copy(x, x + 4, best_x);
                    }
                }
            }
        }
    }

    silence_gsl();
    bool converged = false;
    {
        gsl_multimin_function fn{&gsl_objective, 4, &prob};
        gsl_vector* x = gsl_vector_alloc(4);
        gsl_vector* step = gsl_vector_alloc(4);
        for (std::size_t i = 0; i < 4; ++i) {
            gsl_vector_set(x, i, best_x[i]);
        }
        gsl_vector_set_all(step, 1.0);
        gsl_multimin_fminimizer* nm = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4);
        gsl_multimin_fminimizer_set(nm, &fn, x, step);
        for (int iter = 0; iter < options.max_refine_iterations; ++iter) {
            if (gsl_multimin_fminimizer_iterate(nm) != GSL_SUCCESS) {
                break;
            }
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm), options.simplex_tolerance) == GSL_SUCCESS) {
                converged = true;
                break;
            }
        }
        const double f = gsl_multimin_fminimizer_minimum(nm);
        if (f < best_f) {
            best_f = f;
            for (std::size_t i = 0; i < 4; ++i) {
                best_x[i] = gsl_vector_get(nm->x, i);
            }
        }
        gsl_multimin_fminimizer_free(nm);
        gsl_vector_free(step);
        gsl_vector_free(x);
    }

    if (!std::isfinite(best_f) || best_f == std::numeric_limits<double>::max()) {
        throw NumericalError("likelihood could not be evaluated at any grid point");
    }
    VarianceFit fit;
    fit.spec = spec_from(best_x, prob);
    fit.log_likelihood = -best_f;
    fit.converged = converged;
    fit.evaluations = prob.evaluations;
    return fit;
}

TimeSeries smoothed_seasonal(const TimeSeries& obs, const PeriodicSeasonalSpec& spec, double diffuse_factor) {
    const int k = spec.period_k;
    check_period(k);
    if (obs.size() % static_cast<std::size_t>(k) != 0) {
        throw DimensionError("series length " + std::to_string(obs.size()) + " is not a multiple of the period " +
                             std::to_string(k));
    }
    const auto model = build_periodic_model(spec, diffuse_variance(obs.values(), diffuse_factor));
    const auto states = kalman_smooth(model, obs.values());
    std::vector<double> gamma(obs.size());
    for (std::size_t t = 0; t < obs.size(); ++t) {
        gamma[t] = states[t](2 + static_cast<Index>(t % static_cast<std::size_t>(k)));
    }
    block_center(gamma, k);
    return obs.with_values(std::move(gamma));
}

SeasonalAdjustment seasonal_adjust(const TimeSeries& obs, int k, const VarianceFitOptions& options) {
    check_period(k);
    if (obs.size() % static_cast<std::size_t>(k) != 0) {
        throw DimensionError("series length " + std::to_string(obs.size()) + " is not a multiple of the period " +
                             std::to_string(k));
    }
    VarianceFit fit = fit_variances(obs, k, options);
    TimeSeries gamma = smoothed_seasonal(obs, fit.spec, options.diffuse_factor);
    std::vector<double> adjusted(obs.size());
    for (std::size_t t = 0; t < obs.size(); ++t) {
        adjusted[t] = obs[t] - gamma[t];
    }
    return {obs.with_values(std::move(adjusted)), std::move(gamma), fit};
}

} // namespace wavebench
