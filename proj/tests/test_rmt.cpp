#include "edgejump/fredholm/determinants.hpp"
#include "edgejump/rmt/sim.hpp"
#include "edgejump/weightlab/opsystem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

using namespace edgejump;

namespace {

double trace(const GramMatrix<double>& g) {
    double s = 0;
    for (int j = 0; j < g.n; ++j) s += g.G(j, j);
    return s;
}

double trace_sq(const GramMatrix<double>& g) {
    double s = 0;
    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) s += g.G(j, k) * g.G(k, j);
    return s;
}

}  // namespace

TEST(Rng, SeededDeterminism) {
    auto a = stream_rng(42, 3), b = stream_rng(42, 3), c = stream_rng(42, 4), d = stream_rng(43, 3);
    const auto sa = sample_gue(10, a), sb = sample_gue(10, b), sc = sample_gue(10, c), sd = sample_gue(10, d);
    EXPECT_EQ(sa.x, sb.x);
    EXPECT_NE(sa.x, sc.x);
    EXPECT_NE(sa.x, sd.x);
}

TEST(Rng, ThreadCountDoesNotChangeResults) {
    setenv("EDGEJUMP_THREADS", "1", 1);
    const auto one = count_histogram(6, 1.0, 3 * mc_chunk + 17, 9).freq;
    setenv("EDGEJUMP_THREADS", "3", 1);
    const auto three = count_histogram(6, 1.0, 3 * mc_chunk + 17, 9).freq;
    unsetenv("EDGEJUMP_THREADS");
    EXPECT_EQ(one, three);
}

TEST(Gue, SortedDescendingAndSized) {
    auto rng = stream_rng(1, 0);
    for (int n : {1, 2, 17}) {
        const auto s = sample_gue(n, rng);
        ASSERT_EQ(static_cast<int>(s.x.size()), n);
        EXPECT_TRUE(std::is_sorted(s.x.begin(), s.x.end(), std::greater<>()));
    }
    EXPECT_THROW(sample_gue(0, rng), std::invalid_argument);
}

TEST(Gue, OneByOneIsHalfVarianceNormal) {
    auto rng = stream_rng(2, 0);
    const int m = 40000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < m; ++i) {
        const double x = sample_gue(1, rng).x[0];
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / m, var = s2 / m - mean * mean;
    EXPECT_LT(std::abs(mean), 3 * std::sqrt(0.5 / m));
    // Var of the sample variance of N(0, 1/2) is 2 (1/2)^2 / m
    EXPECT_LT(std::abs(var - 0.5), 3 * std::sqrt(0.5 / m));
}

TEST(Gue, GapProbabilityMatchesDeterminant) {
    const CountHistogram h = count_histogram(8, 3.0, 100000, 11);
    const McEstimate p = bernoulli_estimate(h.freq[0], h.trials);
    const double oracle = finite_n_det(8, 3.0, 1.0).real();
    EXPECT_LT(std::abs(p.mean - oracle), 3 * p.stderr_) << p.mean << " vs " << oracle;
}

TEST(Gue, SecondMomentMatchesKernelDiagonal) {
    const int n = 8;
    // int x^2 K_n(x, x) dx by quadrature of the Hermite functions
    const QuadratureRule<double> q = composite_gauss_legendre(20, 80, -12.0, 12.0);
    const double oracle = q.integrate([&](double x) {
        double k = 0;
        for (double p : hermite_functions_all(n, x)) k += p * p;
        return x * x * k;
    });
    EXPECT_NEAR(oracle, n * n / 2.0, 1e-10);
    auto rng = stream_rng(12, 0);
    const int m = 20000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < m; ++i) {
        double v = 0;
        for (double x : sample_gue(n, rng).x) v += x * x;
        s1 += v;
        s2 += v * v;
    }
    const double mean = s1 / m, se = std::sqrt((s2 / m - mean * mean) / m);
    EXPECT_LT(std::abs(mean - oracle), 3 * se);
}

TEST(Thin, ZeroRemovalKeepsAll) {
    auto rng = stream_rng(3, 0);
    const auto s = sample_gue(12, rng);
    EXPECT_EQ(thin(s, 0.0, rng).survivors, s.x);
    EXPECT_TRUE(thin(s, 1.0, rng).survivors.empty());
    EXPECT_THROW(thin(s, 1.5, rng), std::invalid_argument);
}

TEST(Thin, SurvivorCountIsBinomial) {
    auto rng = stream_rng(4, 0);
    const int m = 20000, n = 50;
    const double s = 0.999;
    long total = 0;
    for (int i = 0; i < m; ++i) total += thin(sample_gue(n, rng), s, rng).survivors.size();
    const double p = 1 - s, mean = double(total) / m;
    EXPECT_LT(std::abs(mean - n * p), 3 * std::sqrt(n * p * (1 - p) / m));
}

TEST(Thin, SurvivorsAreSubsetInOrder) {
    auto rng = stream_rng(5, 0);
    const auto s = sample_gue(30, rng);
    const auto t = thin(s, 0.4, rng);
    EXPECT_TRUE(std::includes(s.x.begin(), s.x.end(), t.survivors.begin(), t.survivors.end(), std::greater<>()));
}

TEST(Thin, GapUnderThinningMatchesDeterminant) {
    const int n = 20;
    const double s = 0.5, l0 = WeightParams::edge(0.0, n, -1.0).lambda0();
    const ThinningStats st = thinning_experiment(n, l0, s, 40000, 6);
    EXPECT_EQ(st.same_path_breaks, 0);
    const double oracle = finite_n_det(n, l0, 1 - s).real();
    const McEstimate p = st.probability(), rb = st.counts.generating_function(s);
    EXPECT_LT(std::abs(p.mean - oracle), 3 * p.stderr_);
    EXPECT_LT(std::abs(rb.mean - oracle), 3 * rb.stderr_);
    EXPECT_LT(std::abs(rb.mean - p.mean), 3 * p.stderr_);
}

TEST(Counting, FarLeftCountsEverything) {
    const auto m = counting_moments(9, -30.0, 500, 2, 7);
    EXPECT_EQ(m[0].mean, 9.0);
    EXPECT_EQ(m[1].mean, 81.0);
    EXPECT_EQ(m[0].stderr_, 0.0);
}

TEST(Counting, FirstTwoMomentsFromGram) {
    // E X = tr G, E X(X-1) = (tr G)^2 - tr G^2 for the determinantal count on [lambda0, inf)
    const int n = 50;
    const double l0 = WeightParams::edge(0.0, n, -1.0).lambda0();
    const auto g = hermite_gram(n, l0);
    const double m1 = trace(g), m2 = m1 + m1 * m1 - trace_sq(g);
    const auto est = counting_moments(n, l0, 30000, 2, 8);
    EXPECT_LT(std::abs(est[0].mean - m1), 3 * est[0].stderr_);
    EXPECT_LT(std::abs(est[1].mean - m2), 3 * est[1].stderr_);
}

TEST(Counting, EdgeMeanNearAiryLimit) {
    const int n = 200;
    const double l0 = WeightParams::edge(0.0, n, 0.0).lambda0();
    const double exact = trace(hermite_gram(n, l0));
    const double airy_limit = airy_tail_trace(0.0);  // int_0^inf tau Ai(tau)^2
    EXPECT_NEAR(exact, airy_limit, 0.005);
    const auto est = counting_moments(n, l0, 8192, 1, 9);
    EXPECT_LT(std::abs(est[0].mean - exact), 3 * est[0].stderr_ + 1e-12);
}

TEST(Rsk, SingleBox) {
    auto rng = stream_rng(10, 0);
    EXPECT_EQ(plancherel_sample(1, rng), std::vector<int>{1});
}

TEST(Rsk, KnownShapes) {
    EXPECT_EQ(rsk_shape(std::vector<int>{0, 1, 2, 3}), (std::vector<int>{4}));
    EXPECT_EQ(rsk_shape(std::vector<int>{3, 2, 1, 0}), (std::vector<int>{1, 1, 1, 1}));
    EXPECT_EQ(rsk_shape(std::vector<int>{1, 3, 0, 2}), (std::vector<int>{2, 2}));
}

TEST(Rsk, FirstRowIsLongestIncreasingSubsequence) {
    auto rng = stream_rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 1 + trial * 7;
        std::vector<int> perm(N);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto shape = rsk_shape(perm);
        EXPECT_EQ(shape[0], longest_increasing_subsequence(perm));
        EXPECT_EQ(std::accumulate(shape.begin(), shape.end(), 0), N);
        EXPECT_TRUE(std::is_sorted(shape.begin(), shape.end(), std::greater<>()));
        const auto capped = rsk_shape(perm, 3);
        for (std::size_t r = 0; r < capped.size(); ++r) EXPECT_EQ(capped[r], shape[r]);
    }
}

TEST(Rsk, HookLengthDimensions) {
    EXPECT_NEAR(young_dimension({2, 1}), 2, 1e-9);
    EXPECT_NEAR(young_dimension({3, 2, 1}), 16, 1e-9);
    EXPECT_NEAR(young_dimension({4, 4, 4}), 462, 1e-8);
}

TEST(Plancherel, ShapeDistributionAtFour) {
    auto rng = stream_rng(12, 0);
    const int m = 100000;
    std::map<std::vector<int>, int> freq;
    for (int i = 0; i < m; ++i) ++freq[plancherel_sample(4, rng)];
    ASSERT_EQ(freq.size(), 5u);
    double chi2 = 0;
    for (const auto& [shape, f] : freq) {
        const double d = young_dimension(shape);
        const double expected = m * d * d / 24.0;
        chi2 += (f - expected) * (f - expected) / expected;
    }
    EXPECT_LT(chi2, 18.47);  // 4 degrees of freedom, p = 0.001
}

TEST(Plancherel, ThinnedMaxSmallS) {
    // s = 0: the first row always survives
    auto a = stream_rng(13, 0), b = stream_rng(13, 0);
    const int mu = thinned_plancherel_max(500, 0.0, a);
    std::geometric_distribution<int>(1.0)(b);
    std::vector<int> perm(500);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), b);
    EXPECT_EQ(mu, longest_increasing_subsequence(perm));
}

TEST(Plancherel, ThinnedCdfNearAiryDeterminant) {
    const std::vector<double> ts{0.0, 1.0};
    const auto cdf = plancherel_thinned_cdf(2500, 0.5, ts, 4096, 14);
    for (std::size_t j = 0; j < ts.size(); ++j)
        EXPECT_LT(std::abs(cdf[j].mean - airy_fredholm_det(0.5, ts[j]).real()), 0.03 + 3 * cdf[j].stderr_) << ts[j];
}
