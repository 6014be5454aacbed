#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wavebench/errors.hpp"
#include "wavebench/shrinkage.hpp"

using namespace wavebench;

namespace {

// Minimizer of sure_risk over an even grid on [0, max |w|].
double grid_lambda(const std::vector<double>& w, double sigma2, int points) {
    double top = 0.0;
    for (double v : w) {
        top = std::max(top, std::abs(v));
    }
    double best = 0.0;
    double best_risk = sure_risk(w, sigma2, 0.0);
    for (int i = 1; i <= points; ++i) {
        const double lambda = top * i / points;
        const double r = sure_risk(w, sigma2, lambda);
        if (r < best_risk) {
            best_risk = r;
            best = lambda;
        }
    }
    return best;
}

} // namespace

TEST(SoftThreshold, Examples) {
    EXPECT_DOUBLE_EQ(soft_threshold(3, 1), 2);
    EXPECT_DOUBLE_EQ(soft_threshold(-0.5, 1), 0);
    EXPECT_DOUBLE_EQ(soft_threshold(-2.75, 0), -2.75);
    EXPECT_THROW(soft_threshold(1, -0.1), DomainError);
}

TEST(SoftThreshold, OddAndNonExpansive) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 1000; ++i) {
        const double w = u(rng);
        const double l = std::abs(u(rng));
        EXPECT_DOUBLE_EQ(soft_threshold(-w, l), -soft_threshold(w, l));
        EXPECT_LE(std::abs(soft_threshold(w, l)), std::abs(w));
        EXPECT_NEAR(soft_threshold(w, l + 1e-9), soft_threshold(w, l), 2e-9);
    }
}

TEST(ModwtVariance, Examples) {
    const std::vector<double> flat(64, 3.5);
    for (int j = 1; j <= 4; ++j) {
        EXPECT_EQ(modwt_level_variance(flat, j).sigma2, 0.0);
    }
    std::vector<double> alt(64);
    for (std::size_t t = 0; t < alt.size(); ++t) {
        alt[t] = t % 2 == 0 ? 1.5 : -1.5;
    }
    const auto est = modwt_level_variance(alt, 1);
    EXPECT_NEAR(est.sigma2, 2 * 1.5 * 1.5, 1e-12);
    EXPECT_EQ(est.n_used, 63);
    EXPECT_THROW(modwt_level_variance(std::vector<double>(4, 1.0), 2), DimensionError);
}

TEST(ModwtVariance, WhiteNoiseCalibration) {
    std::mt19937_64 rng(31);
    for (int j = 1; j <= 3; ++j) {
        double mean = 0.0;
        for (int rep = 0; rep < 50; ++rep) {
            mean += modwt_level_variance(wavebench::testing::normal_draws(rng, 4096), j).sigma2 / 50;
        }
        EXPECT_NEAR(mean, 1.0, 0.1) << "level " << j;
    }
}

TEST(ModwtVariance, FilterIsHaar) {
    const std::vector<double> x{1, 2, 4, 8, 16, 32, 64, 128};
    const auto w2 = haar_modwt(x, 2);
    // t = 3: (x3 + x2 - x1 - x0) / 4
    EXPECT_DOUBLE_EQ(w2[3], (8 + 4 - 2 - 1) / 4.0);
    // t = 0 wraps around: (x0 + x7 - x6 - x5) / 4
    EXPECT_DOUBLE_EQ(w2[0], (1 + 128 - 64 - 32) / 4.0);
}

TEST(Sure, Examples) {
    EXPECT_EQ(sure_lambda(std::vector<double>(10, 0.0), 1.0), 0.0);
    std::vector<double> spike(20, 0.0);
    spike[7] = 50.0;
    const double l = sure_lambda(spike, 1.0);
    EXPECT_LT(l, 50.0);
    EXPECT_NEAR(sure_risk(spike, 1.0, l), sure_risk(spike, 1.0, grid_lambda(spike, 1.0, 10000)), 1e-6);
    EXPECT_THROW(sure_lambda(spike, 0.0), DomainError);
    EXPECT_THROW(sure_lambda(std::vector<double>{}, 1.0), DimensionError);
}

TEST(Sure, CandidateMinimizerMatchesGrid) {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        auto w = wavebench::testing::normal_draws(rng, 40, 1.0 + rep % 5);
        w[static_cast<std::size_t>(rep % 40)] += 8.0;
        const double sigma2 = 1.0 + 0.1 * rep;
        const double cand = sure_lambda(w, sigma2);
        double top = 0.0;
        for (double v : w) {
            top = std::max(top, std::abs(v));
        }
        EXPECT_GE(cand, 0.0);
        EXPECT_LE(cand, top);
        const double grid = grid_lambda(w, sigma2, 10000);
        // Never worse than any grid point, and the grid's best is within one spacing.
        EXPECT_LE(sure_risk(w, sigma2, cand), sure_risk(w, sigma2, grid) + 1e-9);
        for (int i = 0; i <= 200; ++i) {
            EXPECT_LE(sure_risk(w, sigma2, cand), sure_risk(w, sigma2, top * i / 200) + 1e-9);
        }
    }
}

TEST(Thresholding, LevelsAndErrors) {
    const auto basis = build_uh_basis(16);
    std::mt19937_64 rng(3);
    const auto c = duht(wavebench::testing::normal_draws(rng, 16), basis);

    const auto same = threshold_details(c, {}, {});
    EXPECT_EQ(same.details, c.details);

    ThresholdPlan plan;
    plan.lambda_by_level[3] = 1e6;
    const auto zeroed = apply_thresholds(c, plan);
    for (const auto& [key, v] : zeroed.details) {
        if (key.level == 3) {
            EXPECT_EQ(v, 0.0);
        } else {
            EXPECT_EQ(v, c.details.at(key));
        }
    }
    EXPECT_THROW(plan_thresholds(c, {2}, {}), ConfigError);

    // A zero noise estimate leaves the level alone.
    const auto kept = threshold_details(c, {2}, {{2, {2, 0.0, 10}}});
    EXPECT_EQ(kept.details, c.details);
}

TEST(Thresholding, SecondApplicationShrinksAgain) {
    WaveletCoefficients c;
    c.details[{0, 1}] = 3.0;
    ThresholdPlan plan;
    plan.lambda_by_level[0] = 1.0;
    const auto once = apply_thresholds(c, plan);
    const auto twice = apply_thresholds(once, plan);
    EXPECT_DOUBLE_EQ(once.details.at({0, 1}), 2.0);
    EXPECT_DOUBLE_EQ(twice.details.at({0, 1}), 1.0);
}

TEST(Thresholding, RemovesMostPureNoiseEnergy) {
    std::mt19937_64 rng(77);
    const auto basis = build_uh_basis(1024);
    const int finest = basis.max_level();
    double before = 0.0;
    double after = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto noise = wavebench::testing::normal_draws(rng, 1024);
        const auto c = duht(noise, basis);
        const auto est = modwt_level_variance(noise, 1);
        const auto t = threshold_details(c, {finest}, {{finest, est}});
        for (double v : c.level_values(finest)) {
            before += v * v;
        }
        for (double v : t.level_values(finest)) {
            after += v * v;
        }
    }
    EXPECT_LE(after, 0.5 * before);
}
