#include "ssakit/error.hpp"
#include "ssakit/grouping.hpp"

#include "../support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

namespace ssakit {
namespace {

using testing::code_of;

std::vector<std::vector<int>> as_lists(const std::vector<Grouping>& gs) {
    std::vector<std::vector<int>> out;
    for (const auto& g : gs) out.emplace_back(g.indices().begin(), g.indices().end());
    return out;
}

TEST(GroupingType, NormalizesAndLabels) {
    const Grouping g({3, 1, 3, 2});
    EXPECT_EQ(std::vector<int>(g.indices().begin(), g.indices().end()), (std::vector<int>{1, 2, 3}));
    EXPECT_TRUE(g.is_prefix());
    EXPECT_EQ(g.label(), "prefix:3");
    EXPECT_EQ(Grouping({1, 4}).label(), "set:1;4");
    EXPECT_EQ(code_of([] { Grouping g(std::vector<int>{}); }), ErrorCode::kEmptyGrouping);
    EXPECT_EQ(code_of([] { Grouping g({0, 1}); }), ErrorCode::kIndexOutOfRange);
}

TEST(WeightedInner, Examples) {
    const TimeSeries ones(std::vector<double>(6, 1.0));
    const auto w = antidiagonal_weights(3, 4);
    EXPECT_DOUBLE_EQ(weighted_inner(ones, ones, w), 12.0);
    // y = e_1, z = e_2 have disjoint support
    const TimeSeries y({1, 0, 0, 0, 0, 0});
    const TimeSeries z({0, 1, 0, 0, 0, 0});
    EXPECT_DOUBLE_EQ(weighted_inner(y, z, w), 0.0);
    // (1, -1, ...) against weights (1, 2, ...) balanced by construction
    const TimeSeries a({2, -1, 0, 0, 0, 0});
    const TimeSeries b({1, 1, 0, 0, 0, 0});
    EXPECT_DOUBLE_EQ(weighted_inner(a, b, w), 0.0);
    EXPECT_EQ(code_of([&] { weighted_inner(ones, TimeSeries({1, 2}), w); }), ErrorCode::kLengthMismatch);
}

TEST(WeightedInner, NormMatchesTrajectoryFrobenius) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + rng() % 100;
        const auto x = testing::gaussian_noise(n, 2.0, rng());
        const int window = 2 + static_cast<int>(rng() % (n / 2 - 1));
        const auto w = antidiagonal_weights(window, static_cast<int>(n) - window + 1);
        const double frob = testing::oracle_trajectory(x, window).squaredNorm();
        EXPECT_NEAR(weighted_inner(TimeSeries(x), TimeSeries(x), w), frob, 1e-10 * frob);
    }
}

TEST(WCor, SingleComponent) {
    const auto d = decompose(TimeSeries(testing::sinusoid(40, 9.0)), 10);
    const std::vector<ElementarySeries> one{elementary_series(d, 1)};
    const auto m = wcor_matrix(one, antidiagonal_weights(10, 31));
    ASSERT_EQ(m.entries.rows(), 1);
    EXPECT_DOUBLE_EQ(m.entries(0, 0), 1.0);
}

TEST(WCor, SeparatedSinusoidsFormBlocks) {
    const auto x = testing::add(testing::sinusoid(400, 20.0, 10.0), testing::sinusoid(400, 5.0, 3.0));
    const auto d = decompose(TimeSeries(x), 100);
    const auto comps = elementary_series(d);
    const std::vector<ElementarySeries> first(comps.begin(), comps.begin() + 4);
    const auto m = wcor_matrix(first, antidiagonal_weights(100, 301));
    // oracle: direct weighted products of the constructed components
    const auto w = antidiagonal_weights(100, 301);
    auto s = [&](int i, int j) {
        const double ij = weighted_inner(first[i].series, first[j].series, w);
        return ij / std::sqrt(weighted_inner(first[i].series, first[i].series, w) *
                              weighted_inner(first[j].series, first[j].series, w));
    };
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(m.entries(i, j), s(i, j), 1e-12);
    }
    EXPECT_GT(std::abs(m.entries(0, 1)), 0.9);
    EXPECT_GT(std::abs(m.entries(2, 3)), 0.9);
    for (int i : {0, 1}) {
        for (int j : {2, 3}) EXPECT_LT(std::abs(m.entries(i, j)), 0.05);
    }
}

TEST(WCor, ZeroComponentIsIsolated) {
    const std::vector<ElementarySeries> comps{{1, TimeSeries({1, 2, 3, 4, 5})},
                                              {2, TimeSeries({0, 0, 0, 0, 0})},
                                              {3, TimeSeries({2, 1, 0, 1, 2})}};
    const auto m = wcor_matrix(comps, antidiagonal_weights(2, 4));
    EXPECT_EQ(m.entries(1, 1), 1.0);
    EXPECT_EQ(m.norms[1], 0.0);
    for (int k : {0, 2}) {
        EXPECT_EQ(m.entries(1, k), 0.0);
        EXPECT_EQ(m.entries(k, 1), 0.0);
    }

    // a constant series leaves a numerically zero second component
    const auto d = decompose(TimeSeries(std::vector<double>(12, 2.0)), 3);
    const auto near = wcor_matrix(elementary_series(d), antidiagonal_weights(3, 10));
    EXPECT_NEAR(near.entries(0, 1), 0.0, 1e-12);
}

TEST(WCor, InvariantsOnRandomDecompositions) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 20 + rng() % 180;
        const auto x = testing::gaussian_noise(n, 1.0, rng());
        const int window = 2 + static_cast<int>(rng() % std::min<std::size_t>(n / 2 - 1, 30));
        const int k = static_cast<int>(n) - window + 1;
        const auto d = decompose(TimeSeries(x), window);
        const auto comps = elementary_series(d);
        const auto w = antidiagonal_weights(window, k);
        const auto m = wcor_matrix(comps, w);
        EXPECT_LT((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff(), 1e-14);
        for (int i = 0; i < window; ++i) {
            if (m.norms[i] > 0) EXPECT_NEAR(m.entries(i, i), 1.0, 1e-12);
            for (int j = 0; j < window; ++j) EXPECT_LE(std::abs(m.entries(i, j)), 1.0 + 1e-10);
            // weighted norm equals the Frobenius norm of the Hankelized elementary matrix
            const double wn = weighted_inner(comps[i].series, comps[i].series, w);
            const double fro = hankelize(elementary_matrix(d, i + 1)).squaredNorm();
            EXPECT_NEAR(wn, fro, 1e-8 * std::max(fro, 1e-300));
        }
    }
}

TEST(Clustering, CompleteLinkageSmallCase) {
    // points on a line: 0, 1, 5, 6, 20
    const std::vector<double> p{0, 1, 5, 6, 20};
    Eigen::MatrixXd dist(5, 5);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) dist(i, j) = std::abs(p[i] - p[j]);
    }
    EXPECT_EQ(cluster_complete_linkage(dist, 3), (std::vector<int>{0, 0, 1, 1, 2}));
    EXPECT_EQ(cluster_complete_linkage(dist, 2), (std::vector<int>{0, 0, 0, 0, 1}));
    EXPECT_EQ(cluster_complete_linkage(dist, 1), (std::vector<int>{0, 0, 0, 0, 0}));
}

TEST(Clustering, PermutationInvariantForDistinctDistances) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 8;
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
        }
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd dp(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) dp(i, j) = d(perm[i], perm[j]);
        }
        const auto a = cluster_complete_linkage(d, 3);
        const auto b = cluster_complete_linkage(dp, 3);
        // same partition: items i, j together in a iff together in b
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                EXPECT_EQ(a[perm[i]] == a[perm[j]], b[i] == b[j]);
            }
        }
    }
}

TEST(AutoGroup, OneClusterIsEverything) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = testing::gaussian_noise(60, 1.0, rng());
        const auto d = decompose(TimeSeries(x), 12);
        EXPECT_EQ(auto_group_wcor(d, 1), Grouping::prefix(12));
    }
}

TEST(AutoGroup, SinusoidPlusNoise) {
    const auto x = testing::add(testing::sinusoid(700, 7.0, 10.0), testing::gaussian_noise(700, 0.5, 3));
    const auto d = decompose(TimeSeries(x), 14);
    const auto g = auto_group_wcor(d, 2);
    EXPECT_TRUE(g.contains(1));
    EXPECT_TRUE(g.contains(2));
}

TEST(AutoGroup, ConstantSeries) {
    const auto d = decompose(TimeSeries(std::vector<double>(20, 3.0)), 2);
    EXPECT_EQ(auto_group_wcor(d, 2), Grouping({1}));
}

TEST(PrefixGroupings, Examples) {
    EXPECT_EQ(as_lists(prefix_groupings(3)), (std::vector<std::vector<int>>{{1}, {1, 2}, {1, 2, 3}}));
    EXPECT_EQ(as_lists(prefix_groupings(1)), (std::vector<std::vector<int>>{{1}}));
    EXPECT_TRUE(prefix_groupings(0).empty());
}

TEST(Neighborhood, Examples) {
    auto as_set = [](const std::vector<Grouping>& gs) {
        const auto l = as_lists(gs);
        return std::set<std::vector<int>>(l.begin(), l.end());
    };
    EXPECT_EQ(as_set(neighborhood(2, 5)),
              (std::set<std::vector<int>>{{2}, {1}, {1, 2, 3}, {1, 2, 4}, {1, 2, 5}}));
    EXPECT_EQ(as_set(neighborhood(1, 3)), (std::set<std::vector<int>>{{1, 2}, {1, 3}}));
    EXPECT_EQ(as_set(neighborhood(3, 3)), (std::set<std::vector<int>>{{2, 3}, {1, 3}, {1, 2}}));
}

TEST(Neighborhood, ExactCount) {
    for (int l_min = 1; l_min <= 30; ++l_min) {
        for (int m = 1; m <= l_min; ++m) {
            const auto n = neighborhood(m, l_min);
            EXPECT_EQ(static_cast<int>(n.size()), m + (l_min - m) - (m == 1 ? 1 : 0));
            std::set<Grouping> unique(n.begin(), n.end());
            EXPECT_EQ(unique.size(), n.size());
        }
    }
    EXPECT_EQ(code_of([] { neighborhood(4, 3); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace ssakit
