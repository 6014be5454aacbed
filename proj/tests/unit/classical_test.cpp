#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wavebench/classical.hpp"
#include "wavebench/errors.hpp"

using namespace wavebench;
using wavebench::testing::make_series;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void expect_values(const TimeSeries& s, const std::vector<double>& want, double tol) {
    ASSERT_EQ(s.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(s[i], want[i], tol) << "at " << i;
    }
}

} // namespace

TEST(ClassicalMatrices, AggregationMatrix) {
    EXPECT_TRUE(aggregation_matrix(4, 1).isApprox(MatrixXd::Ones(4, 1)));
    EXPECT_TRUE(aggregation_matrix(2, 2).isApprox(MatrixXd::Identity(2, 2)));
    MatrixXd want = MatrixXd::Zero(6, 2);
    want.block(0, 0, 3, 1).setOnes();
    want.block(3, 1, 3, 1).setOnes();
    EXPECT_EQ(aggregation_matrix(6, 2), want);
    EXPECT_THROW(aggregation_matrix(5, 2), DimensionError);
}

TEST(ClassicalMatrices, DifferenceMatrix) {
    MatrixXd want(3, 3);
    want << 1, 0, 0, -1, 1, 0, 0, -1, 1;
    EXPECT_EQ(difference_matrix(3), want);
    EXPECT_EQ(difference_matrix(1), MatrixXd::Ones(1, 1));
    const VectorXd d = difference_matrix(5) * VectorXd::Constant(5, 2.5);
    EXPECT_DOUBLE_EQ(d(0), 2.5);
    EXPECT_TRUE(d.tail(4).isZero());
}

TEST(ClassicalMatrices, Ar1Covariance) {
    EXPECT_TRUE(ar1_covariance(3, 0.0).isApprox(MatrixXd::Identity(3, 3)));
    MatrixXd want(2, 2);
    want << 4.0 / 3, 2.0 / 3, 2.0 / 3, 4.0 / 3;
    EXPECT_TRUE(ar1_covariance(2, 0.5).isApprox(want, 1e-14));
    const Eigen::LLT<MatrixXd> llt(ar1_covariance(64, 0.729));
    EXPECT_EQ(llt.info(), Eigen::Success);
    EXPECT_THROW(ar1_covariance(3, 1.0), ConfigError);
}

TEST(Denton, QuarterlyAnnualExamples) {
    const AggregationConstraint k4(4);
    const auto a = denton_benchmark(make_series({1, 2, 3, 4}), make_series({14}), k4);
    expect_values(a.benchmarked, {1 + 16.0 / 30, 2 + 28.0 / 30, 3 + 36.0 / 30, 4 + 40.0 / 30}, 1e-12);

    const auto b = denton_benchmark(make_series({1, 1, 1, 1}), make_series({8}), k4);
    expect_values(b.benchmarked, {1 + 16.0 / 30, 1 + 28.0 / 30, 1 + 36.0 / 30, 1 + 40.0 / 30}, 1e-12);
}

TEST(Denton, ConsistentInputIsUnchanged) {
    const auto high = make_series({3, 1, 4, 1, 5, 9, 2, 6});
    const auto low = aggregate(high, AggregationConstraint(4));
    for (int h : {1, 2}) {
        const auto r = denton_benchmark(high, low, AggregationConstraint(4), {h});
        expect_values(r.benchmarked, {3, 1, 4, 1, 5, 9, 2, 6}, 1e-12);
    }
}

TEST(Denton, MatchesKktOracleAndPerturbationsCostMore) {
    std::mt19937_64 rng(5);
    for (int k : {2, 3, 4}) {
        for (int m : {1, 3, 8}) {
            const auto [high, low] = wavebench::testing::random_pair(rng, m, k);
            const auto n = static_cast<Eigen::Index>(high.size());
            for (int h : {1, 2}) {
                const auto r = denton_benchmark(high, low, AggregationConstraint(k), {h});
                const VectorXd want =
                    wavebench::testing::kkt_benchmark(high.as_vector(), low.as_vector(), wavebench::testing::denton_penalty(n, h));
                EXPECT_LT((r.benchmarked.as_vector() - want).cwiseAbs().maxCoeff(), 1e-8);
            }
            // Feasible perturbations (zero block sums) never lower the Denton-1 objective.
            const auto r = denton_benchmark(high, low, AggregationConstraint(k), {1});
            const MatrixXd a = wavebench::testing::denton_penalty(n, 1);
            const VectorXd d = r.benchmarked.as_vector() - high.as_vector();
            const double base = d.dot(a * d);
            for (int trial = 0; trial < 5; ++trial) {
                auto e = wavebench::testing::normal_draws(rng, high.size());
                VectorXd pert = Eigen::Map<VectorXd>(e.data(), n);
                for (int s = 0; s < m; ++s) {
                    pert.segment(s * k, k).array() -= pert.segment(s * k, k).mean();
                }
                const VectorXd moved = d + 0.1 * pert;
                EXPECT_GE(moved.dot(a * moved), base - 1e-9);
            }
        }
    }
}

TEST(Denton, RejectsBadOrderAndShapes) {
    EXPECT_THROW(denton_benchmark(make_series({1, 2}), make_series({3}), AggregationConstraint(2), {0}), ConfigError);
    EXPECT_THROW(denton_benchmark(make_series({1, 2, 3}), make_series({3}), AggregationConstraint(2)), DimensionError);
}

TEST(DagumCholette, Examples) {
    const auto r = dagum_cholette_benchmark(make_series({1, 1, 1, 1}), make_series({8}), AggregationConstraint(4), {0.0});
    expect_values(r.benchmarked, {2, 2, 2, 2}, 1e-12);
    const auto high = make_series({2, 7, 1, 8, 2, 8});
    const auto same = dagum_cholette_benchmark(high, aggregate(high, AggregationConstraint(3)), AggregationConstraint(3));
    expect_values(same.benchmarked, {2, 7, 1, 8, 2, 8}, 1e-12);
    EXPECT_THROW(dagum_cholette_benchmark(high, make_series({1, 2}), AggregationConstraint(3), {1.2}), ConfigError);
}

TEST(DagumCholette, MatchesKktOracle) {
    std::mt19937_64 rng(6);
    for (double rho : {0.0, 0.5, 0.729, -0.4}) {
        for (int k : {2, 4}) {
            const auto [high, low] = wavebench::testing::random_pair(rng, 5, k);
            const auto n = static_cast<Eigen::Index>(high.size());
            const auto r = dagum_cholette_benchmark(high, low, AggregationConstraint(k), {rho});
            const VectorXd want = wavebench::testing::kkt_benchmark(
                high.as_vector(), low.as_vector(), wavebench::testing::dagum_cholette_penalty(n, rho));
            EXPECT_LT((r.benchmarked.as_vector() - want).cwiseAbs().maxCoeff(), 1e-8) << "rho " << rho;
        }
    }
}

TEST(DagumCholette, BiasVariantMatchesGlsOracle) {
    // Joint GLS: minimize (d - b1)' V^{-1} (d - b1) over (d, b) subject to the
    // constraint, where the benchmarked series is high + d.
    std::mt19937_64 rng(8);
    const int k = 4;
    const int m = 4;
    const auto [high, low] = wavebench::testing::random_pair(rng, m, k);
    const Eigen::Index n = k * m;
    const MatrixXd vinv = wavebench::testing::dagum_cholette_penalty(n, 0.729);
    const MatrixXd b = aggregation_matrix(n, m);
    MatrixXd kkt = MatrixXd::Zero(n + 1 + m, n + 1 + m);
    const VectorXd ones = VectorXd::Ones(n);
    kkt.topLeftCorner(n, n) = 2 * vinv;
    kkt.block(0, n, n, 1) = -2 * vinv * ones;
    kkt.block(n, 0, 1, n) = -2 * ones.transpose() * vinv;
    kkt(n, n) = 2 * ones.dot(vinv * ones);
    kkt.block(0, n + 1, n, m) = b;
    kkt.block(n + 1, 0, m, n) = b.transpose();
    VectorXd rhs = VectorXd::Zero(n + 1 + m);
    rhs.tail(m) = low.as_vector() - b.transpose() * high.as_vector();
    const VectorXd sol = kkt.fullPivLu().solve(rhs);
    const auto r = dagum_cholette_benchmark(high, low, AggregationConstraint(k), {0.729, true});
    const VectorXd want = high.as_vector() + sol.head(n);
    EXPECT_LT((r.benchmarked.as_vector() - want).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_TRUE(satisfies_constraint(r, low));
}

TEST(Classical, ScaleEquivariance) {
    std::mt19937_64 rng(9);
    const auto [high, low] = wavebench::testing::random_pair(rng, 6, 3);
    const double a = 7.25;
    const auto scaled_high = high.with_values(Eigen::VectorXd(a * high.as_vector()));
    const auto scaled_low = low.with_values(Eigen::VectorXd(a * low.as_vector()));
    const AggregationConstraint c(3);
    const Eigen::VectorXd d1 = denton_benchmark(high, low, c).benchmarked.as_vector();
    const Eigen::VectorXd d2 = denton_benchmark(scaled_high, scaled_low, c).benchmarked.as_vector();
    EXPECT_LT((a * d1 - d2).cwiseAbs().maxCoeff(), 1e-9);
    const Eigen::VectorXd g1 = dagum_cholette_benchmark(high, low, c).benchmarked.as_vector();
    const Eigen::VectorXd g2 = dagum_cholette_benchmark(scaled_high, scaled_low, c).benchmarked.as_vector();
    EXPECT_LT((a * g1 - g2).cwiseAbs().maxCoeff(), 1e-9);
}
