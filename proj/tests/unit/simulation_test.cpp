#include <cmath>

#include <gtest/gtest.h>

#include "wavebench/errors.hpp"
#include "wavebench/simulation.hpp"

using namespace wavebench;

namespace {

SimulationParams quiet(int m = 8, int k = 4) {
    SimulationParams p;
    p.m = m;
    p.k = k;
    p.n = m * k;
    p.sigma_gamma_init.assign(static_cast<std::size_t>(k - 1), 0.0);
    p.sigma_mu1 = p.sigma_upsilon1 = 0.0;
    p.sigma_phi = p.sigma_zeta = p.sigma_omega = p.sigma_tau = 0.0;
    return p;
}

double var_of(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) {
        mean += v / static_cast<double>(x.size());
    }
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return ss / static_cast<double>(x.size() - 1);
}

} // namespace

TEST(Simulation, AllZeroVariancesGiveZeros) {
    const auto sim = simulate(quiet(), 3);
    for (std::size_t t = 0; t < sim.true_high.size(); ++t) {
        EXPECT_EQ(sim.true_high[t], 0.0);
        EXPECT_EQ(sim.obs_high[t], 0.0);
    }
    EXPECT_EQ(sim.obs_low.size(), 8u);
}

TEST(Simulation, TrendOnlyIsDeterministicLine) {
    // Only initial draws are random; the rest is a line plus a fixed pattern.
    auto p = quiet(6, 3);
    p.sigma_mu1 = 2.0;
    p.sigma_upsilon1 = 1.0;
    p.sigma_gamma_init = {1.0, 1.0};
    const auto sim = simulate(p, 11);
    const auto& y = sim.true_high;
    const double slope = (y[3] - y[0]) / 3.0;
    for (std::size_t t = 3; t < y.size(); ++t) {
        EXPECT_NEAR(y[t] - y[t - 3], 3.0 * slope, 1e-9);
    }
    for (std::size_t t = 0; t < y.size(); ++t) {
        EXPECT_EQ(sim.obs_high[t], y[t]);
    }
}

TEST(Simulation, SameSeedSameOutputDifferentSeedDifferent) {
    SimulationParams p;
    const auto a = simulate(p, 42);
    const auto b = simulate(p, 42);
    const auto c = simulate(p, 43);
    EXPECT_EQ(a.obs_high.as_vector(), b.obs_high.as_vector());
    EXPECT_EQ(a.true_high.as_vector(), b.true_high.as_vector());
    EXPECT_NE(a.obs_high.as_vector(), c.obs_high.as_vector());
}

TEST(Simulation, ExtraBlocksExtendTheBaseReplicate) {
    SimulationParams p;
    for (auto model : {NoiseModel::ScaledAr1, NoiseModel::Arma11}) {
        p.noise_model = model;
        const auto base = simulate(p, 5);
        const auto ext = simulate(p, 5, 3);
        ASSERT_EQ(ext.obs_high.size(), base.obs_high.size() + 12);
        for (std::size_t t = 0; t < base.obs_high.size(); ++t) {
            ASSERT_EQ(base.obs_high[t], ext.obs_high[t]);
            ASSERT_EQ(base.true_high[t], ext.true_high[t]);
        }
    }
}

TEST(Simulation, LowIsTheAggregateOfTrueHigh) {
    SimulationParams p;
    const auto sim = simulate(p, 9);
    const auto agg = aggregate(sim.true_high, AggregationConstraint(p.k));
    EXPECT_LT((agg.as_vector() - sim.obs_low.as_vector()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Simulation, NoiseVarianceMatchesTheory) {
    for (auto model : {NoiseModel::ScaledAr1, NoiseModel::Arma11}) {
        SimulationParams p;
        p.noise_model = model;
        std::vector<double> samples;
        for (int r = 0; r < 500; ++r) {
            const auto sim = simulate(p, 1000 + r);
            // One draw per replicate at a fixed position keeps samples independent.
            samples.push_back(sim.obs_high[100] - sim.true_high[100]);
            samples.push_back(sim.obs_high[0] - sim.true_high[0]);
        }
        EXPECT_NEAR(var_of(samples) / p.noise_variance(), 1.0, 0.1);
    }
}

TEST(Simulation, DisturbanceMoments) {
    // Second differences of the trend: zeta_{t-1} + phi_t - phi_{t-1}.
    auto p = quiet(64, 4);
    p.sigma_phi = 1.5;
    p.sigma_zeta = 0.5;
    std::vector<double> d2;
    for (int r = 0; r < 200; ++r) {
        const auto y = simulate(p, 50 + r).true_high;
        d2.push_back(y[30] - 2 * y[29] + y[28]);
    }
    EXPECT_NEAR(var_of(d2) / (0.25 + 2 * 2.25), 1.0, 0.2);

    // Seasonal sums over k consecutive points move by omega only.
    auto s = quiet(64, 4);
    s.sigma_omega = 2.0;
    std::vector<double> sums;
    for (int r = 0; r < 400; ++r) {
        const auto y = simulate(s, 900 + r).true_high;
        sums.push_back(y[40] + y[39] + y[38] + y[37]);
    }
    EXPECT_NEAR(var_of(sums) / 4.0, 1.0, 0.2);
}

TEST(Simulation, InvalidParams) {
    SimulationParams p;
    p.phi = 1.0;
    EXPECT_THROW(simulate(p, 1), ConfigError);
    p = {};
    p.n = 100;
    EXPECT_THROW(simulate(p, 1), ConfigError);
    p = {};
    p.sigma_gamma_init = {1.0};
    EXPECT_THROW(simulate(p, 1), ConfigError);
    p = {};
    p.sigma_omega = -1.0;
    EXPECT_THROW(simulate(p, 1), ConfigError);
}

TEST(Simulation, BatchUsesConsecutiveSeeds) {
    SimulationParams p;
    p.m = 4;
    p.n = 16;
    const auto batch = simulate_batch(p, 3, 20);
    ASSERT_EQ(batch.size(), 3u);
    EXPECT_EQ(batch[2].obs_high.as_vector(), simulate(p, 22).obs_high.as_vector());
}
