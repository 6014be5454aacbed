#include <cmath>
#include <random>
#include <tuple>

#include <Eigen/Core>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wavebench/errors.hpp"
#include "wavebench/uh_wavelet.hpp"

using namespace wavebench;
using Eigen::MatrixXd;

namespace {

using Triple = std::tuple<int, int, int>;

std::vector<Triple> supports_at(const UHBasis& basis, int level) {
    std::vector<Triple> out;
    for (const auto& node : basis.nodes()) {
        if (node.level == level) {
            out.emplace_back(node.start, node.breakpoint, node.end);
        }
    }
    return out;
}

double orthonormality_error(const UHBasis& basis) {
    const MatrixXd w = basis_matrix(basis);
    return (w.transpose() * w - MatrixXd::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST(LargestDyadic, Examples) {
    EXPECT_EQ(largest_dyadic_below(600), 512);
    EXPECT_EQ(largest_dyadic_below(88), 64);
    EXPECT_EQ(largest_dyadic_below(8), 8);
    EXPECT_EQ(largest_dyadic_below(1), 1);
    EXPECT_THROW(largest_dyadic_below(0), DomainError);
}

TEST(UHBasis, Table600) {
    const auto b = build_uh_basis(600);
    EXPECT_EQ(supports_at(b, 0), (std::vector<Triple>{{1, 88, 600}}));
    EXPECT_EQ(supports_at(b, 1), (std::vector<Triple>{{1, 24, 88}, {89, 344, 600}}));
    const auto l2 = supports_at(b, 2);
    ASSERT_EQ(l2.size(), 4u);
    EXPECT_EQ(l2[0], Triple(1, 8, 24));
    EXPECT_EQ(l2[1], Triple(25, 56, 88));
    EXPECT_EQ(l2[3], Triple(345, 472, 600));
}

TEST(UHBasis, DyadicIsHaar) {
    const auto b = build_uh_basis(8);
    EXPECT_EQ(supports_at(b, 0), (std::vector<Triple>{{1, 4, 8}}));
    EXPECT_EQ(supports_at(b, 1), (std::vector<Triple>{{1, 2, 4}, {5, 6, 8}}));
    EXPECT_EQ(supports_at(b, 2), (std::vector<Triple>{{1, 1, 2}, {3, 3, 4}, {5, 5, 6}, {7, 7, 8}}));
    for (int j = 1; j <= 6; ++j) {
        const auto h = build_uh_basis(1 << j);
        for (const auto& node : h.nodes()) {
            EXPECT_EQ(node.positive_length(), node.negative_length());
            EXPECT_EQ(node.index, (node.start - 1) / node.length() + 1);
        }
    }
}

TEST(UHBasis, SixPointRecursion) {
    const auto b = build_uh_basis(6);
    EXPECT_EQ(supports_at(b, 0), (std::vector<Triple>{{1, 2, 6}}));
    EXPECT_EQ(supports_at(b, 1), (std::vector<Triple>{{1, 1, 2}, {3, 4, 6}}));
    EXPECT_EQ(supports_at(b, 2), (std::vector<Triple>{{3, 3, 4}, {5, 5, 6}}));
}

TEST(UHBasis, CompleteAndOrthonormal) {
    for (int n = 1; n <= 64; ++n) {
        const auto b = build_uh_basis(n);
        EXPECT_EQ(b.nodes().size(), static_cast<std::size_t>(n - 1));
        EXPECT_LT(orthonormality_error(b), 1e-10) << "n=" << n;
    }
    EXPECT_LT(orthonormality_error(build_uh_basis(600)), 1e-10);
}

TEST(UHBasis, RejectsInconsistentNodes) {
    EXPECT_THROW(UHBasis(3, {{1, 1, 3, 0, 1}}), DimensionError);
    EXPECT_THROW(UHBasis(2, {{1, 2, 2, 0, 1}}), DomainError);
    EXPECT_THROW(UHBasis(3, {{1, 1, 3, 0, 1}, {2, 2, 3, 0, 1}}), DomainError);
}

TEST(PairedBases, MirrorsLowNodesAndStaysInBlocks) {
    for (auto [m, k] : {std::pair{2, 4}, std::pair{64, 4}, std::pair{2, 3}, std::pair{70, 3}, std::pair{5, 12}}) {
        const auto p = build_paired_bases(m, k);
        EXPECT_EQ(p.split_level, p.low.max_level());
        EXPECT_EQ(p.high.split_level(), p.split_level);
        for (const auto& low : p.low.nodes()) {
            const auto* high = p.high.find(low.key());
            ASSERT_NE(high, nullptr);
            EXPECT_EQ(high->start, k * (low.start - 1) + 1);
            EXPECT_EQ(high->breakpoint, k * low.breakpoint);
            EXPECT_EQ(high->end, k * low.end);
        }
        int deepest = 0;
        for (const auto& node : p.high.nodes()) {
            if (node.level > p.split_level) {
                EXPECT_EQ((node.start - 1) / k, (node.end - 1) / k) << "node crosses a block";
                deepest = std::max(deepest, node.level - p.split_level);
            }
        }
        EXPECT_EQ(deepest, static_cast<int>(std::ceil(std::log2(k))));
        EXPECT_LT(orthonormality_error(p.high), 1e-10);
    }
}

TEST(PairedBases, SmallCases) {
    const auto a = build_paired_bases(2, 4);
    EXPECT_EQ(supports_at(a.high, 0), (std::vector<Triple>{{1, 4, 8}}));
    EXPECT_EQ(supports_at(a.high, 1), (std::vector<Triple>{{1, 2, 4}, {5, 6, 8}}));
    const auto b = build_paired_bases(2, 3);
    EXPECT_EQ(supports_at(b.high, 1), (std::vector<Triple>{{1, 1, 3}, {4, 4, 6}}));
    EXPECT_EQ(supports_at(b.high, 2), (std::vector<Triple>{{2, 2, 3}, {5, 5, 6}}));
    const auto single = build_paired_bases(1, 4);
    EXPECT_EQ(single.split_level, -1);
    EXPECT_THROW(build_paired_bases(3, 1), ConfigError);
}

TEST(Duht, Examples) {
    const auto haar = build_uh_basis(4);
    const auto c = duht(std::vector<double>{1, 2, 3, 4}, haar);
    EXPECT_NEAR(c.father, 5.0, 1e-14);
    EXPECT_NEAR(c.details.at({0, 1}), -2.0, 1e-14);
    EXPECT_NEAR(c.details.at({1, 1}), -1 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(c.details.at({1, 2}), -1 / std::sqrt(2.0), 1e-14);

    const auto b = build_uh_basis(7);
    const auto ones = duht(std::vector<double>(7, 1.0), b);
    EXPECT_NEAR(ones.father, std::sqrt(7.0), 1e-14);
    for (const auto& [key, v] : ones.details) {
        EXPECT_NEAR(v, 0.0, 1e-14);
    }
}

TEST(Duht, MatchesMatrixAndRoundTrips) {
    std::mt19937_64 rng(21);
    for (int n : {1, 2, 3, 5, 17, 33, 64, 600}) {
        const auto b = build_uh_basis(n);
        const auto y = wavebench::testing::normal_draws(rng, static_cast<std::size_t>(n));
        const auto c = duht(y, b);
        const Eigen::VectorXd wy = basis_matrix(b) * Eigen::Map<const Eigen::VectorXd>(y.data(), n);
        EXPECT_NEAR(wy(0), c.father, 1e-10);
        for (std::size_t i = 0; i < b.nodes().size(); ++i) {
            EXPECT_NEAR(wy(static_cast<Eigen::Index>(i + 1)), c.details.at(b.nodes()[i].key()), 1e-10);
        }
        const auto back = iduht_values(c, b);
        for (int t = 0; t < n; ++t) {
            EXPECT_NEAR(back[static_cast<std::size_t>(t)], y[static_cast<std::size_t>(t)], 1e-10);
        }
        // Coefficients -> series -> coefficients.
        WaveletCoefficients w = c;
        for (auto& [key, v] : w.details) {
            v = std::normal_distribution<double>()(rng);
        }
        const auto again = duht(iduht_values(w, b), b);
        for (const auto& [key, v] : w.details) {
            EXPECT_NEAR(again.details.at(key), v, 1e-10);
        }
    }
}

TEST(Iduht, TrivialAndErrors) {
    const auto b = build_uh_basis(5);
    WaveletCoefficients zero;
    zero.father = 0.0;
    for (const auto& node : b.nodes()) {
        zero.details[node.key()] = 0.0;
    }
    for (double v : iduht_values(zero, b)) {
        EXPECT_EQ(v, 0.0);
    }
    WaveletCoefficients father = zero;
    father.father = std::sqrt(5.0);
    for (double v : iduht_values(father, b)) {
        EXPECT_NEAR(v, 1.0, 1e-14);
    }
    WaveletCoefficients missing = zero;
    missing.details.erase(missing.details.begin());
    EXPECT_THROW(iduht_values(missing, b), DimensionError);
    WaveletCoefficients extra = zero;
    extra.details[{9, 9}] = 1.0;
    EXPECT_THROW(iduht_values(extra, b), DimensionError);
    EXPECT_THROW(duht(std::vector<double>{1, 2}, b), DimensionError);
}

TEST(BasisMatrix, TwoPoint) {
    const MatrixXd w = basis_matrix(build_uh_basis(2));
    const double r = 1 / std::sqrt(2.0);
    MatrixXd want(2, 2);
    want << r, r, r, -r;
    EXPECT_TRUE(w.isApprox(want, 1e-15));
}
