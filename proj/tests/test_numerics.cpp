#include "edgejump/numerics/linalg.hpp"
#include "edgejump/numerics/ode.hpp"
#include "edgejump/numerics/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace edgejump;

namespace {

Matrix<BigComplex> random_matrix(std::size_t n, PrecisionCtx ctx, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix<BigComplex> m(n, n, BigComplex(ctx));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = BigComplex(std::complex<double>(g(rng), g(rng)), ctx);
    return m;
}

}  // namespace

TEST(BigFloat, CarriesContextPrecision) {
    PrecisionCtx ctx(256);
    BigFloat a(1.0, ctx), b(3.0, ctx);
    BigFloat c = a / b;
    EXPECT_EQ(c.bits(), 256u);
    EXPECT_EQ((c * 3.0 - a).log2_abs() < -250, true);
    BigComplex z(std::complex<double>(1.0, 2.0), ctx);
    EXPECT_EQ((z * z).bits(), 256u);
    EXPECT_THROW(PrecisionCtx(32), std::invalid_argument);
}

TEST(LuDet, IdentityIsOne) {
    PrecisionCtx ctx(128);
    auto m = Matrix<BigComplex>::identity(3, BigComplex(ctx), BigComplex(1.0, ctx));
    BigComplex d = lu_det(m, ctx);
    EXPECT_EQ(d.to_complex(), std::complex<double>(1.0, 0.0));
}

TEST(LuDet, EmptyMatrixIsOne) {
    PrecisionCtx ctx(128);
    Matrix<BigComplex> m(0, 0, BigComplex(ctx));
    EXPECT_EQ(lu_det(m, ctx).to_complex(), std::complex<double>(1.0, 0.0));
}

TEST(LuDet, GaussianTwoByTwo) {
    PrecisionCtx ctx(256);
    BigFloat sqrtpi = sqrt(BigFloat::pi(ctx));
    Matrix<BigComplex> m(2, 2, BigComplex(ctx));
    m(0, 0) = BigComplex(sqrtpi);
    m(1, 1) = BigComplex(sqrtpi / 2L);
    BigComplex d = lu_det(m, ctx);
    BigFloat err = abs(d - BigComplex(BigFloat::pi(ctx) / 2L));
    EXPECT_LT(err.log2_abs(), -245);
}

TEST(LuDet, RepeatedRowIsZero) {
    PrecisionCtx ctx(160);
    std::mt19937_64 rng(7);
    auto m = random_matrix(5, ctx, rng);
    for (std::size_t j = 0; j < 5; ++j) m(3, j) = m(1, j);
    BigComplex d = lu_det(m, ctx);
    EXPECT_LT(d.log2_abs(), 16.0 - 160.0 + 4.0);
}

TEST(LuDet, ExactZeroColumnGivesExactZero) {
    PrecisionCtx ctx(128);
    Matrix<BigComplex> m(2, 2, BigComplex(ctx));
    m(0, 1) = BigComplex(1.0, ctx);
    m(1, 1) = BigComplex(2.0, ctx);
    EXPECT_TRUE(lu_det(m, ctx).is_zero());
}

TEST(LuDet, MultiplicativityProperty) {
    PrecisionCtx ctx(192);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + trial % 5;
        auto a = random_matrix(n, ctx, rng);
        auto b = random_matrix(n, ctx, rng);
        BigComplex da = lu_det(a, ctx), db = lu_det(b, ctx), dab = lu_det(a * b, ctx);
        double lhs = (dab - da * db).log2_abs();
        double scale = da.log2_abs() + db.log2_abs();
        EXPECT_LE(lhs, 24.0 - 192.0 + scale) << "n=" << n;
    }
}

TEST(LuDet, DoublingPrecisionIsSelfConsistent) {
    std::mt19937_64 rng(3);
    PrecisionCtx lo(96);
    auto m = random_matrix(6, lo, rng);
    Matrix<BigComplex> m2(6, 6, BigComplex(lo.doubled()));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) m2(i, j) = BigComplex(m(i, j), lo.doubled());
    BigComplex d1 = lu_det(m, lo), d2 = lu_det(m2, lo.doubled());
    EXPECT_LT((BigComplex(d1, lo.doubled()) - d2).log2_abs() - d2.log2_abs(), -80.0);
}

TEST(LuSolve, RecoversKnownSolution) {
    Matrix<double> a(3, 3, 0.0);
    double vals[3][3] = {{4, 1, 2}, {1, 5, 3}, {2, 3, 6}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = vals[i][j];
    std::vector<double> x = lu_solve(a, {7.0, 9.0, 11.0});
    EXPECT_NEAR(4 * x[0] + x[1] + 2 * x[2], 7.0, 1e-13);
    EXPECT_NEAR(x[0] + 5 * x[1] + 3 * x[2], 9.0, 1e-13);
    EXPECT_NEAR(2 * x[0] + 3 * x[1] + 6 * x[2], 11.0, 1e-13);
}

TEST(GaussLegendre, OnePointMidpoint) {
    auto r = gauss_legendre(1, -1.0, 1.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r.nodes[0], 0.0, 1e-16);
    EXPECT_NEAR(r.weights[0], 2.0, 1e-15);
}

TEST(GaussLegendre, TwoPointRule) {
    auto r = gauss_legendre(2, -1.0, 1.0);
    EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(GaussLegendre, QuarticWithThreePoints) {
    auto r = gauss_legendre(3, -1.0, 1.0);
    EXPECT_NEAR(r.integrate([](double x) { return x * x * x * x; }), 0.4, 1e-15);
}

TEST(GaussLegendre, RuleInvariantsInBigFloat) {
    PrecisionCtx ctx(200);
    for (int m : {1, 5, 16, 33}) {
        auto r = gauss_legendre(m, BigFloat(-2.0, ctx), BigFloat(5.0, ctx));
        BigFloat sum(ctx);
        for (auto& w : r.weights) {
            EXPECT_GT(w.sign(), 0);
            sum += w;
        }
        EXPECT_LT((sum - 7.0).log2_abs() - std::log2(7.0), 8.0 - 200.0);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) EXPECT_TRUE(r.nodes[i] < r.nodes[i + 1]);
        EXPECT_TRUE(r.nodes.front() > -2.0);
        EXPECT_TRUE(r.nodes.back() < 5.0);
    }
}

TEST(GaussLegendre, ExactOnRandomPolynomials) {
    PrecisionCtx ctx(192);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int m : {2, 7, 12}) {
        const int deg = 2 * m - 1;
        std::vector<double> c(deg + 1);
        for (auto& x : c) x = u(rng);
        BigFloat a(-1.5, ctx), b(2.0, ctx);
        auto r = gauss_legendre(m, a, b);
        BigFloat q = r.integrate([&](const BigFloat& x) {
            BigFloat acc(ctx);
            for (int k = deg; k >= 0; --k) acc = acc * x + c[k];
            return acc;
        });
        BigFloat exact(ctx);
        for (int k = 0; k <= deg; ++k) exact += c[k] * ((pow(b, k + 1L) - pow(a, k + 1L)) / static_cast<long>(k + 1));
        double scale = 0;
        for (int k = 0; k <= deg; ++k) scale += std::fabs(c[k]) * std::pow(2.0, k + 1);
        EXPECT_LT((q - exact).log2_abs(), 16.0 - 192.0 + std::log2(scale)) << "m=" << m;
    }
}

TEST(AdaptiveRk, Exponential) {
    VectorField<double> f = [](const double&, const std::vector<double>& y, std::vector<double>& dy) { dy[0] = y[0]; };
    OdeOptions opt;
    opt.rtol = opt.atol = 1e-12;
    auto tr = adaptive_rk(f, {1.0}, 0.0, 1.0, opt);
    ASSERT_EQ(tr.status, OdeStatus::Completed);
    EXPECT_NEAR(tr.y_end()[0], std::exp(1.0), 1e-10);
    EXPECT_NEAR(tr(0, 0.37), std::exp(0.37), 1e-10);
}

TEST(AdaptiveRk, SineBackwardAndDense) {
    VectorField<double> f = [](const double&, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    OdeOptions opt;
    opt.rtol = opt.atol = 1e-12;
    auto tr = adaptive_rk(f, {0.0, 1.0}, 0.0, std::numbers::pi, opt);
    EXPECT_NEAR(tr.y_end()[0], 0.0, 1e-9);
    for (double x : {0.1, 1.0, 2.2, 3.0}) EXPECT_NEAR(tr(0, x), std::sin(x), 1e-10);
    auto back = adaptive_rk(f, {0.0, -1.0}, std::numbers::pi, 0.0, opt);
    EXPECT_NEAR(back.y_end()[0], 0.0, 1e-9);
    EXPECT_NEAR(back.y_end()[1], 1.0, 1e-9);
    EXPECT_NEAR(back(0, 1.0), std::sin(1.0), 1e-10);
    for (double x : {0.3, 1.7, 2.9}) {
        EXPECT_NEAR(tr.derivative(0, x), std::cos(x), 1e-9);
        EXPECT_NEAR(back.derivative(1, x), -std::sin(x), 1e-9);
    }
}

TEST(AdaptiveRk, TighterToleranceReducesError) {
    VectorField<double> f = [](const double& t, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = -2.0 * t * y[0] + std::cos(t);
    };
    auto solve = [&](double tol) {
        OdeOptions o;
        o.rtol = o.atol = tol;
        return adaptive_rk(f, {0.5}, 0.0, 4.0, o).y_end()[0];
    };
    double ref = solve(1e-14);
    double e_loose = std::fabs(solve(1e-6) - ref);
    double e_tight = std::fabs(solve(1e-8) - ref);
    EXPECT_LT(e_tight, e_loose);
}

TEST(AdaptiveRk, StepUnderflowAtBlowUp) {
    // y' = y^2, y(0)=1 blows up at t=1.
    VectorField<double> f = [](const double&, const std::vector<double>& y, std::vector<double>& dy) { dy[0] = y[0] * y[0]; };
    OdeOptions o;
    o.rtol = o.atol = 1e-10;
    o.h_min = 1e-12;
    auto tr = adaptive_rk(f, {1.0}, 0.0, 2.0, o);
    EXPECT_EQ(tr.status, OdeStatus::StepUnderflow);
    EXPECT_NEAR(tr.t_end(), 1.0, 1e-3);
}

TEST(AdaptiveRk, StopPredicate) {
    VectorField<double> f = [](const double&, const std::vector<double>& y, std::vector<double>& dy) { dy[0] = y[0] * y[0]; };
    StopPredicate<double> stop = [](const double&, const std::vector<double>& y) { return std::fabs(y[0]) > 1e3; };
    auto tr = adaptive_rk(f, {1.0}, 0.0, 2.0, OdeOptions{}, stop);
    EXPECT_EQ(tr.status, OdeStatus::Stopped);
    EXPECT_GT(tr.y_end()[0], 1e3);
    EXPECT_LT(tr.t_end(), 1.0);
}

TEST(AdaptiveRk, BigFloatExponential) {
    PrecisionCtx ctx(160);
    VectorField<BigFloat> f = [](const BigFloat&, const std::vector<BigFloat>& y, std::vector<BigFloat>& dy) { dy[0] = y[0]; };
    OdeOptions opt;
    opt.rtol = opt.atol = 1e-24;
    auto tr = adaptive_rk(f, {BigFloat(1.0, ctx)}, BigFloat(0.0, ctx), BigFloat(1.0, ctx), opt);
    BigFloat e = exp(BigFloat(1.0, ctx));
    EXPECT_LT((tr.y_end()[0] - e).log2_abs(), std::log2(1e-22));
}
