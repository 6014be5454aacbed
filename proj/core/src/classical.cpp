#include "wavebench/classical.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "wavebench/errors.hpp"

namespace wavebench {

namespace {

// Lower-triangular factor F with V = F F' (or A^{-1} = F F' for Denton),
// applied in O(n) without forming the matrix.
class LowerFactor {
public:
    virtual ~LowerFactor() = default;
    virtual void apply(Eigen::Ref<Eigen::VectorXd> x) const = 0;
    virtual void apply_transpose(Eigen::Ref<Eigen::VectorXd> x) const = 0;
};

// F = (D^{-1})^h; D^{-1} is the cumulative-sum matrix.
class CumulativeSumPower final : public LowerFactor {
public:
    explicit CumulativeSumPower(int order) : order_(order) {}

    void apply(Eigen::Ref<Eigen::VectorXd> x) const override {
        for (int p = 0; p < order_; ++p) {
            for (Eigen::Index t = 1; t < x.size(); ++t) {
                x[t] += x[t - 1];
            }
        }
    }

    void apply_transpose(Eigen::Ref<Eigen::VectorXd> x) const override {
        for (int p = 0; p < order_; ++p) {
            for (Eigen::Index t = x.size() - 2; t >= 0; --t) {
                x[t] += x[t + 1];
            }
        }
    }

private:
    int order_;
};

// Cholesky factor of the stationary AR(1) covariance: the filter
// x_1 = e_1 / sqrt(1 - rho^2), x_t = rho x_{t-1} + e_t.
class Ar1Factor final : public LowerFactor {
public:
    explicit Ar1Factor(double rho) : rho_(rho), scale_(1.0 / std::sqrt(1.0 - rho * rho)) {}

    void apply(Eigen::Ref<Eigen::VectorXd> x) const override {
        x[0] *= scale_;
        for (Eigen::Index t = 1; t < x.size(); ++t) {
            x[t] += rho_ * x[t - 1];
        }
    }

    void apply_transpose(Eigen::Ref<Eigen::VectorXd> x) const override {
        for (Eigen::Index t = x.size() - 2; t >= 0; --t) {
            x[t] += rho_ * x[t + 1];
        }
        x[0] *= scale_;
    }

private:
    double rho_;
    double scale_;
};

// Solves  min ||u||^2  s.t.  B' F u = r  (optionally with a free constant
// bias b entering as d = F u - b 1) and returns the adjustment d.
//
// Writing M = B'F, the minimum-norm solution is u = M' (M M')^{-1} r; a thin
// QR of M' gives it without squaring the condition number.
class ConstrainedAdjustment {
public:
    ConstrainedAdjustment(const LowerFactor& factor, Eigen::Index n, int k) : factor_(factor), n_(n), k_(k) {
        const Eigen::Index m = n / k;
        Eigen::MatrixXd mt = Eigen::MatrixXd::Zero(n, m);
        for (Eigen::Index s = 0; s < m; ++s) {
            mt.col(s).segment(s * k, k).setOnes();
            factor_.apply_transpose(mt.col(s));
        }
        qr_.compute(mt);
        const auto r_diag = qr_.matrixQR().diagonal().head(m).cwiseAbs();
        if (!(r_diag.minCoeff() > kRelativePivotFloor * r_diag.maxCoeff())) {
            throw NumericalError("benchmark constraint system is numerically singular (pivot ratio " +
                                 std::to_string(r_diag.minCoeff() / r_diag.maxCoeff()) + ")");
        }
    }

    // (M M')^{-1} x = R^{-1} R'^{-1} x
    Eigen::VectorXd gram_solve(const Eigen::VectorXd& x) const {
        const Eigen::Index m = x.size();
        const auto r = qr_.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
        Eigen::VectorXd y = r.transpose().solve(x);
        return r.solve(y);
    }

    Eigen::VectorXd adjustment(const Eigen::VectorXd& discrepancy) const {
        const Eigen::Index m = discrepancy.size();
        const auto r = qr_.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
        d.head(m) = r.transpose().solve(discrepancy);
        d.applyOnTheLeft(qr_.householderQ());
        factor_.apply(d);
        return d;
    }

    // One step of iterative refinement against the constraint residual.
    Eigen::VectorXd refined_adjustment(const Eigen::VectorXd& discrepancy) const {
        Eigen::VectorXd d = adjustment(discrepancy);
        const Eigen::VectorXd leftover = discrepancy - block_sums(d, k_);
        d += adjustment(leftover);
        return d;
    }

    Eigen::VectorXd biased_adjustment(const Eigen::VectorXd& discrepancy) const {
        // d = F v - b 1 with B' F v - k b 1 = r; profile out b by GLS.
        const Eigen::Index m = discrepancy.size();
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
        const Eigen::VectorXd g_r = gram_solve(discrepancy);
        const Eigen::VectorXd g_1 = gram_solve(ones);
        const double bias = -ones.dot(g_r) / (static_cast<double>(k_) * ones.dot(g_1));
        Eigen::VectorXd target = discrepancy + static_cast<double>(k_) * bias * ones;
        Eigen::VectorXd d = refined_adjustment(target);
        d.array() -= bias;
        return d;
    }

    Eigen::Index size() const noexcept { return n_; }

private:
    static constexpr double kRelativePivotFloor = 1e-13;

    const LowerFactor& factor_;
    Eigen::Index n_;
    int k_;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
};

Eigen::VectorXd discrepancy(const TimeSeries& high, const TimeSeries& low, int k) {
    return low.as_vector() - block_sums(high.as_vector(), k);
}

} // namespace

Eigen::MatrixXd aggregation_matrix(Eigen::Index n, Eigen::Index m) {
    if (n < 1 || m < 1 || n % m != 0) {
        throw DimensionError("aggregation matrix needs n divisible by m, got n=" + std::to_string(n) +
                             ", m=" + std::to_string(m));
    }
    const Eigen::Index k = n / m;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, m);
    for (Eigen::Index s = 0; s < m; ++s) {
        b.col(s).segment(s * k, k).setOnes();
    }
    return b;
}

Eigen::MatrixXd difference_matrix(Eigen::Index n) {
    if (n < 1) {
        throw DimensionError("difference matrix needs n >= 1");
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index t = 1; t < n; ++t) {
        d(t, t - 1) = -1.0;
    }
    return d;
}

Eigen::MatrixXd ar1_covariance(Eigen::Index n, double rho) {
    if (!(std::abs(rho) < 1.0)) {
        throw ConfigError("AR(1) parameter must satisfy |rho| < 1, got " + std::to_string(rho));
    }
    if (n < 1) {
        throw DimensionError("AR(1) covariance needs n >= 1");
    }
    const double scale = 1.0 / (1.0 - rho * rho);
    Eigen::MatrixXd v(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            v(i, j) = scale * std::pow(rho, static_cast<double>(std::abs(i - j)));
        }
    }
    return v;
}

BenchmarkResult denton_benchmark(const TimeSeries& high,
                                 const TimeSeries& low,
                                 AggregationConstraint c,
                                 DentonConfig cfg) {
    if (cfg.order_h < 1) {
        throw ConfigError("Denton order must be >= 1, got " + std::to_string(cfg.order_h));
    }
    check_paired(high, low, c);
    const CumulativeSumPower factor(cfg.order_h);
    const ConstrainedAdjustment solver(factor, static_cast<Eigen::Index>(high.size()), c.factor_k());
    const Eigen::VectorXd d = solver.refined_adjustment(discrepancy(high, low, c.factor_k()));
    return make_result(high.with_values(Eigen::VectorXd(high.as_vector() + d)), Method::denton(cfg.order_h), low, c);
}

BenchmarkResult dagum_cholette_benchmark(const TimeSeries& high,
                                         const TimeSeries& low,
                                         AggregationConstraint c,
                                         DagumCholetteConfig cfg) {
    if (!(std::abs(cfg.rho) < 1.0)) {
        throw ConfigError("Dagum-Cholette AR(1) parameter must satisfy |rho| < 1, got " + std::to_string(cfg.rho));
    }
    check_paired(high, low, c);
    const Ar1Factor factor(cfg.rho);
    const ConstrainedAdjustment solver(factor, static_cast<Eigen::Index>(high.size()), c.factor_k());
    const Eigen::VectorXd r = discrepancy(high, low, c.factor_k());
    const Eigen::VectorXd d = cfg.include_bias ? solver.biased_adjustment(r) : solver.refined_adjustment(r);
    return make_result(high.with_values(Eigen::VectorXd(high.as_vector() + d)), Method::dagum_cholette(), low, c);
}

} // namespace wavebench
