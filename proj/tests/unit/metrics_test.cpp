#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wavebench/errors.hpp"
#include "wavebench/metrics.hpp"

using namespace wavebench;
using wavebench::testing::make_series;

TEST(Mse, Basics) {
    EXPECT_DOUBLE_EQ(mse(make_series({1, 2, 3}), make_series({1, 2, 3})), 0.0);
    EXPECT_DOUBLE_EQ(mse(make_series({1, 2, 3}), make_series({2, 2, 5})), 5.0 / 3.0);
    EXPECT_THROW(mse(make_series({1, 2}), make_series({1, 2, 3})), DimensionError);
}

TEST(Mse, TranslationInvariant) {
    const auto a = make_series({1.5, -2, 7, 3});
    const auto b = make_series({0.5, 1, 6, 4});
    const auto shift = [](const TimeSeries& s, double c) {
        return s.with_values(Eigen::VectorXd(s.as_vector().array() + c));
    };
    EXPECT_NEAR(mse(shift(a, 100), shift(b, 100)), mse(a, b), 1e-9);
}

TEST(Revision, Examples) {
    const auto base = make_series({5, 5, 5, 5, 1, 1, 1, 1});
    const std::vector<TimeSeries> same{make_series({5, 5, 5, 5, 1, 1, 1, 1, 9, 9, 9, 9})};
    EXPECT_DOUBLE_EQ(revision_metric(base, same, 4), 0.0);

    const std::vector<TimeSeries> moved{make_series({5, 5, 5, 5, 1.01, 0.99, 1.02, 0.98, 2, 2, 2, 2})};
    EXPECT_NEAR(revision_metric(base, moved, 4), 1.5, 1e-12);

    // Mean over extensions.
    const std::vector<TimeSeries> two{same[0], moved[0]};
    EXPECT_NEAR(revision_metric(base, two, 4), 0.75, 1e-12);
}

TEST(Revision, Errors) {
    const auto base = make_series({5, 5, 0, 1});
    const std::vector<TimeSeries> ext{make_series({5, 5, 1, 1, 3, 3})};
    EXPECT_THROW(revision_metric(base, ext, 2), DomainError);
    EXPECT_THROW(revision_metric(make_series({1, 1, 1, 1}), std::span<const TimeSeries>{}, 2), DimensionError);
    const std::vector<TimeSeries> short_ext{make_series({1, 1})};
    EXPECT_THROW(revision_metric(make_series({1, 1, 1, 1}), short_ext, 2), DimensionError);
}
