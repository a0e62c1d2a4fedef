#include "ssakit/decomposition.hpp"
#include "ssakit/error.hpp"
#include "ssakit/forecast.hpp"

#include "../support.hpp"

#include <gtest/gtest.h>

namespace ssakit {
namespace {

using testing::code_of;

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    return x;
}

TEST(Decompose, ConstantSevens) {
    const auto d = decompose(embed(TimeSeries({7, 7, 7, 7}), 2));
    ASSERT_EQ(d.singular_values().size(), 2);
    EXPECT_NEAR(d.singular_values()(0), 7.0 * std::sqrt(6.0), 1e-12);
    EXPECT_NEAR(d.singular_values()(1), 0.0, 1e-12);
}

TEST(Decompose, PureSinusoidHasRankTwo) {
    const auto x = testing::sinusoid(70, 7.0);
    // oracle: numeric rank of the explicitly built matrix via Jacobi SVD
    Eigen::JacobiSVD<Eigen::MatrixXd> jacobi(testing::oracle_trajectory(x, 14));
    const Eigen::VectorXd ref = jacobi.singularValues();
    int oracle_rank = 0;
    for (Eigen::Index k = 0; k < ref.size(); ++k) oracle_rank += ref(k) > 1e-8 * ref(0);
    ASSERT_EQ(oracle_rank, 2);

    const auto d = decompose(TimeSeries(x), 14);
    const auto& s = d.singular_values();
    int rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) rank += s(k) > 1e-8 * s(0);
    EXPECT_EQ(rank, 2);
    EXPECT_NEAR(s(0), ref(0), 1e-10 * ref(0));
    EXPECT_NEAR(s(1), ref(1), 1e-10 * ref(0));
}

TEST(ElementaryMatrix, RankOneInputIsReproduced) {
    const auto t = embed(TimeSeries({2, 2, 2, 2, 2, 2}), 3);
    const auto d = decompose(t);
    EXPECT_LT((elementary_matrix(d, 1) - t.entries()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(elementary_matrix(d, 2).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(elementary_matrix(d, 3).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ElementaryMatrix, ThreeByFiveHankelSumsBack) {
    std::mt19937_64 rng(3);
    const auto x = random_series(rng, 7);
    const auto t = embed(TimeSeries(x), 3);
    const auto d = decompose(t);
    // oracle: reconstruction from an independent Jacobi SVD
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(testing::oracle_trajectory(x, 3),
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXd oracle =
        svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
    const Eigen::MatrixXd sum = elementary_matrix(d, 1) + elementary_matrix(d, 2) + elementary_matrix(d, 3);
    EXPECT_LT((sum - t.entries()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((sum - oracle).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ElementaryMatrix, IndexChecked) {
    const auto d = decompose(TimeSeries({1, 2, 3, 5, 8, 13}), 3);
    EXPECT_EQ(code_of([&] { elementary_matrix(d, 0); }), ErrorCode::kIndexOutOfRange);
    EXPECT_EQ(code_of([&] { elementary_matrix(d, 4); }), ErrorCode::kIndexOutOfRange);
}

TEST(Hankelize, Examples) {
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 3, 4;
    Eigen::MatrixXd expected(2, 2);
    expected << 1, 2.5, 2.5, 4;
    EXPECT_EQ(hankelize(m), expected);

    const Eigen::MatrixXd h = embed(TimeSeries({3, 1, 4, 1, 5, 9, 2}), 3).entries();
    EXPECT_EQ(hankelize(h), h);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    Eigen::MatrixXd r(4, 6);
    for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = g(rng);
    const Eigen::MatrixXd once = hankelize(r);
    EXPECT_LT((hankelize(once) - once).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hankelize, IsNearestHankelMatrix) {
    // oracle: least squares over the 6-dimensional space of 3x4 Hankel matrices
    Eigen::MatrixXd basis(12, 6);
    basis.setZero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) basis(j * 3 + i, i + j) = 1.0;
    }
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd m(3, 4);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
        const Eigen::VectorXd vec = Eigen::Map<const Eigen::VectorXd>(m.data(), 12);
        const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(vec);
        const Eigen::VectorXd best = basis * coef;
        const Eigen::MatrixXd h = hankelize(m);
        const Eigen::VectorXd got = Eigen::Map<const Eigen::VectorXd>(h.data(), 12);
        EXPECT_LT((got - best).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(ElementarySeries, ConstantSeries) {
    const TimeSeries c({4.5, 4.5, 4.5, 4.5, 4.5});
    const auto d = decompose(c, 2);
    const auto first = elementary_series(d, 1);
    const auto second = elementary_series(d, 2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_NEAR(first.series[i], 4.5, 1e-12);
        EXPECT_NEAR(second.series[i], 0.0, 1e-12);
    }
}

TEST(ElementarySeries, RampSumsBack) {
    std::vector<double> x(10);
    for (int i = 0; i < 10; ++i) x[i] = i + 1;
    const auto d = decompose(TimeSeries(x), 3);
    std::vector<double> sum(10, 0.0);
    for (const auto& e : elementary_series(d)) {
        for (std::size_t i = 0; i < 10; ++i) sum[i] += e.series[i];
    }
    EXPECT_LT(testing::max_abs_diff(x, sum), 1e-10);
}

TEST(Reconstruct, FullAndSingleton) {
    std::mt19937_64 rng(4);
    const auto x = random_series(rng, 60);
    const auto d = decompose(TimeSeries(x), 20);
    const auto full = reconstruct(d, Grouping::prefix(20));
    EXPECT_LT(testing::max_abs_diff(x, full.values()), 1e-8);
    const auto single = reconstruct(d, Grouping({5}));
    const auto e5 = elementary_series(d, 5);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(single[i], e5.series[i], 1e-12);
}

TEST(Reconstruct, SinusoidSeparatedFromSmallTrend) {
    std::vector<double> sine = testing::sinusoid(70, 7.0);
    std::vector<double> x = sine;
    double trend_max = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += 0.001 * static_cast<double>(i + 1);
        trend_max = std::max(trend_max, 0.001 * static_cast<double>(i + 1));
    }
    const auto d = decompose(TimeSeries(x), 14);
    // the two components carrying the sinusoid are those whose vectors oscillate
    std::vector<int> sine_components;
    for (int k = 1; k <= 3; ++k) {
        const Eigen::VectorXd u = d.left_vectors().col(k - 1);
        int changes = 0;
        for (Eigen::Index i = 1; i < u.size(); ++i) changes += (u(i) > 0) != (u(i - 1) > 0);
        if (changes >= 2) sine_components.push_back(k);
    }
    ASSERT_EQ(sine_components.size(), 2u);
    const auto rec = reconstruct(d, Grouping(sine_components));
    EXPECT_LT(testing::max_abs_diff(sine, rec.values()), trend_max);
}

TEST(DecompositionInvariants, EnergyCompletenessOrthogonality) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 6 + rng() % 195;
        const auto x = random_series(rng, n);
        const int window = 2 + static_cast<int>(rng() % (n / 2 - 1));
        const auto t = embed(TimeSeries(x), window);
        const auto d = decompose(t);
        const auto& s = d.singular_values();
        const double frob = t.entries().squaredNorm();
        EXPECT_NEAR(s.squaredNorm(), frob, 1e-8 * frob);
        for (Eigen::Index k = 1; k < s.size(); ++k) EXPECT_LE(s(k), s(k - 1));
        EXPECT_GE(s.minCoeff(), 0.0);
        const Eigen::MatrixXd& u = d.left_vectors();
        EXPECT_LT((u.transpose() * u - Eigen::MatrixXd::Identity(window, window)).cwiseAbs().maxCoeff(), 1e-10);
        const Eigen::MatrixXd& v = d.right_vectors();
        EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(window, window)).cwiseAbs().maxCoeff(), 1e-10);

        const auto full = reconstruct(d, Grouping::prefix(window));
        double scale = 0.0;
        for (double xi : x) scale = std::max(scale, std::abs(xi));
        EXPECT_LT(testing::max_abs_diff(x, full.values()), 1e-8 * scale);

        std::vector<Eigen::MatrixXd> parts;
        for (int k = 1; k <= window; ++k) parts.push_back(elementary_matrix(d, k));
        for (int i = 0; i < window; ++i) {
            for (int j = i + 1; j < window; ++j) {
                if (s(i) <= 1e-12 * s(0) || s(j) <= 1e-12 * s(0)) continue;
                const double inner = (parts[i].array() * parts[j].array()).sum();
                EXPECT_LT(std::abs(inner), 1e-8 * frob);
            }
        }
    }
}

TEST(DecompositionInvariants, ScaleEquivariance) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 10 + rng() % 150;
        const auto x = random_series(rng, n);
        const double a = scale(rng);
        const int window = 2 + static_cast<int>(rng() % (n / 2 - 1));
        const auto d = decompose(TimeSeries(x), window);
        const auto da = decompose(TimeSeries(x).affine(a), window);
        const auto& s = d.singular_values();
        EXPECT_LT((da.singular_values() - a * s).cwiseAbs().maxCoeff(), 1e-9 * a * s(0));
        for (int k = 0; k < window; ++k) {
            // well-separated components only; ties leave the basis arbitrary
            const double gap_prev = k > 0 ? s(k - 1) - s(k) : s(0);
            const double gap_next = k + 1 < window ? s(k) - s(k + 1) : s(k);
            if (std::min(gap_prev, gap_next) < 1e-3 * s(0)) continue;
            const double dot = d.left_vectors().col(k).dot(da.left_vectors().col(k));
            EXPECT_NEAR(std::abs(dot), 1.0, 1e-8);
        }
    }
}

TEST(Decompose, SignConvention) {
    std::mt19937_64 rng(8);
    const auto x = random_series(rng, 80);
    const auto d = decompose(TimeSeries(x), 30);
    for (int k = 0; k < 30; ++k) {
        Eigen::Index arg = 0;
        d.left_vectors().col(k).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(d.left_vectors()(arg, k), 0.0);
    }
}

TEST(Decompose, BackendsAgree) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 400 + rng() % 400;
        auto x = testing::add(testing::sinusoid(n, 30.0 + trial, 5.0), random_series(rng, n));
        const TimeSeries s(x);
        const int window = 70 + trial * 7;
        const auto a = decompose(s, window, SvdBackend::kDirect);
        const auto b = decompose(s, window, SvdBackend::kLagCovariance);
        EXPECT_FALSE(b.has_right_vectors());
        const double s0 = a.singular_values()(0);
        EXPECT_LT((a.singular_values() - b.singular_values()).cwiseAbs().maxCoeff(), 1e-9 * s0);
        // the leading pair is well separated from the noise floor
        const auto fa = vector_forecast(a, Grouping::prefix(2), 10);
        const auto fb = vector_forecast(b, Grouping::prefix(2), 10);
        for (int h = 0; h < 10; ++h) EXPECT_NEAR(fa.values[h], fb.values[h], 1e-8 * s0);
        const auto ea = elementary_series(a, 1);
        const auto eb = elementary_series(b, 1);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ea.series[i], eb.series[i], 1e-8 * s0);
    }
}

}  // namespace
}  // namespace ssakit
