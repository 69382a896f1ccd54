#include "edgejump/painleve/asymptotes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace edgejump;

namespace {

double airy_envelope(double t) {
    const auto [ai, aip] = airy(t);
    return std::sqrt(ai * ai + aip * aip / std::max(1.0, std::abs(t)));
}

// t in [lo, hi] where cos(singular_phase) = target, by bisection on a bracketing pair.
double solve_cos(double gamma, double lo, double hi, double target) {
    auto g = [&](double t) { return std::cos(singular_phase(t, gamma)) - target; };
    double glo = g(lo);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if ((gm > 0) == (glo > 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(Painleve, BetaKappaRoundTrip) {
    for (cplx k : {cplx(0.5, 0), cplx(0.3, 0.4), cplx(0, 1.585), cplx(1.2, 0.5)}) {
        const cplx b = beta_from_kappa(k);
        EXPECT_LT(std::abs(b.real()), 0.5);
        const cplx k2 = 1.0 - std::exp(cplx(0, -2 * std::numbers::pi) * b);
        EXPECT_LT(std::abs(k2 - k * k), 1e-14);
    }
    const cplx b = beta_from_kappa(1.5);
    EXPECT_DOUBLE_EQ(b.real(), 0.5);
    EXPECT_NEAR(b.imag(), std::log(1.25) / (2 * std::numbers::pi), 1e-15);
    EXPECT_EQ(kappa_from_beta(cplx(0, 0.2)).imag() > 0, true);
}

TEST(Painleve, ZeroKappaIsIdenticallyZero) {
    auto s = solve_as(0.0, -20);
    for (double t : {5.0, 0.0, -7.5, -20.0}) {
        const ASState st = s.at(t);
        EXPECT_EQ(std::abs(st.u), 0.0);
        EXPECT_EQ(std::abs(st.v), 0.0);
        EXPECT_EQ(std::abs(st.F), 0.0);
    }
}

TEST(Painleve, SmallKappaFollowsAiry) {
    const double k = 1e-6;
    SolveOptions opt;
    opt.t_max = 5;
    auto s = solve_as(k, -10, 1e-13, opt);
    double worst = 0;
    for (double t = -10; t <= 5; t += 0.05) worst = std::max(worst, std::abs(s.u(t) / k - airy_ai(t)) / airy_envelope(t));
    EXPECT_LT(worst, 1e-10);
}

TEST(Painleve, SmallKappaInBigFloat) {
    const PrecisionCtx ctx(160);
    const BigFloat k("1e-8", ctx);
    auto tr = solve_as_real(k, BigFloat(6L, ctx), BigFloat(0L, ctx), 1e-24);
    ASSERT_EQ(tr.status, OdeStatus::Completed);
    const BigFloat ratio = tr.y_end()[0] / k;
    const BigFloat ai0 = airy_ai(BigFloat(0L, ctx));
    const double rel = std::abs(((ratio - ai0) / ai0).to_double());
    EXPECT_LT(rel, 1e-15);  // the cubic correction is O(kappa^2)
    EXPECT_GT(rel, 1e-22);  // ... and visible above the integration error
}

TEST(Painleve, NoPolesForKappaHalf) {
    auto s = solve_as(0.5, -40, 1e-12, {.t_max = 10});
    EXPECT_EQ(s.status(), OdeStatus::Completed);
    EXPECT_TRUE(s.poles().empty());
    EXPECT_DOUBLE_EQ(s.path.t_reached, -40);
}

TEST(Painleve, AsymptoteBranchCalibration) {
    auto s = solve_as(0.5, -50);
    const cplx beta = s.beta;
    const cplx a15 = as_asymptote_minus(-15, beta), u15 = s.u(-15);
    EXPECT_GT((a15 * std::conj(u15)).real(), 0.0);
    EXPECT_LT(std::abs(a15 - u15), 0.02 * std::pow(15.0, -0.25));
    // error consistent with O(t^{-2+3|Re beta|}), Re beta = 0 here
    for (double t : {-30.0, -40.0, -50.0}) EXPECT_LT(std::abs(s.u(t) - as_asymptote_minus(t, beta)) * t * t, 1.0) << t;
}

TEST(Painleve, AsymptoteImaginaryBeta) {
    const cplx beta(0, 0.2);
    auto s = solve_as(kappa_from_beta(beta), -45);
    double worst = 0;
    for (double t = -40.5; t <= -39.5; t += 0.01) {
        const cplx u = s.u(t);
        worst = std::max(worst, std::abs(u - as_asymptote_minus(t, beta)) / (std::abs(std::sqrt(cplx(0, 2) * beta)) * std::pow(-t, -0.25)));
    }
    EXPECT_LT(worst, 2e-3);
}

TEST(Painleve, AsymptoteEnvelope) {
    auto s = solve_as(0.5, -50);
    const double amp = std::abs(std::sqrt(cplx(0, 2) * s.beta));
    double peak = 0;
    for (double t = -50; t <= -48; t += 0.002) peak = std::max(peak, std::abs(s.u(t)) * std::pow(-t, 0.25));
    EXPECT_NEAR(peak / amp, 1.0, 2e-3);
}

TEST(Painleve, AsymptoteComplexKappaAndSign) {
    for (cplx k : {cplx(0.3, 0.4), cplx(0.6, -0.5), cplx(0, -1.0)}) {
        auto s = solve_as(k, -60);
        const double scale = std::abs(std::sqrt(cplx(0, 2) * s.beta)) * std::pow(60.0, -0.25);
        EXPECT_LT(std::abs(s.u(-60) - as_asymptote_minus_kappa(-60, k)), 1e-2 * scale) << k;
        EXPECT_LT(std::abs(s.u(-60) + as_asymptote_minus_kappa(-60, -k)), 1e-2 * scale) << k;
    }
}

TEST(Painleve, LiteralPhaseIsOff) {
    auto s = solve_as(0.5, -40);
    double worst = 0;
    for (double t = -40; t <= -30; t += 0.1)
        worst = std::max(worst, std::abs(s.u(t) - as_asymptote_minus(t, s.beta, PhaseConvention::Literal)));
    EXPECT_GT(worst, 0.05);
}

TEST(Painleve, AsymptoteGuards) {
    EXPECT_THROW(as_asymptote_minus(-10, cplx(0, 5e-4)), std::invalid_argument);
    EXPECT_THROW(as_asymptote_minus(1, cplx(0, 0.2)), std::invalid_argument);
    EXPECT_THROW(as_asymptote_minus(-10, cplx(0.5, 0.2)), std::invalid_argument);
    EXPECT_THROW(solve_as(1.0, -5), std::invalid_argument);
    EXPECT_THROW(solve_as(0.5, -61), std::invalid_argument);
}

TEST(Painleve, P34Residual) {
    auto a = solve_as(0.5, -10);
    EXPECT_LT(p34_residual(a, -5), 1e-7);
    auto b = solve_as(cplx(0, 0.9), -1);
    EXPECT_LT(p34_residual(b, 2), 1e-7);
    auto z = solve_as(0.0, -5);
    EXPECT_THROW(p34_residual(z, -1), std::domain_error);
}

TEST(Painleve, SingularAsymptoteGammaZero) {
    const double t = -20;
    const double ph = singular_phase(t, 0.0);
    const double c = std::cos(ph), s = std::sin(ph);
    ASSERT_GT(std::abs(c), 0.15);
    const double expected = -t / (c * c) + std::tan(ph) / (2 * std::sqrt(-t)) - 3.0 / (16 * std::sqrt(-t)) * s / (c * c * c);
    EXPECT_NEAR(p34_singular_asymptote(t, 0.0), expected, 1e-12 * std::abs(expected));
}

TEST(Painleve, SingularAsymptoteAgainstPoleTraversal) {
    auto s = solve_as(std::sqrt(2.0), -13);  // gamma = 0
    EXPECT_NEAR(s.beta.real(), 0.5, 1e-15);
    EXPECT_NEAR(s.beta.imag(), 0.0, 1e-15);
    int checked = 0;
    for (double t = -12.5; t <= -11.5; t += 0.01) {
        if (std::abs(std::cos(singular_phase(t, 0.0))) <= 0.3) continue;
        const double y = (s.u(t) * s.u(t)).real();
        EXPECT_LT(std::abs(p34_singular_asymptote(t, 0.0) - y), 0.05 * std::abs(y)) << t;
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(Painleve, SingularAsymptoteGuard) {
    const double t = solve_cos(0.0, -12.0, -11.6, 0.1);
    ASSERT_NEAR(std::cos(singular_phase(t, 0.0)), 0.1, 1e-9);
    EXPECT_THROW(p34_singular_asymptote(t, 0.0), TooCloseToPole);
}

TEST(Painleve, PolesForKappaAboveOne) {
    auto s = solve_as(1.5, -12, 1e-12, {.t_max = 5});
    ASSERT_EQ(s.status(), OdeStatus::Completed);
    ASSERT_GE(s.poles().size(), 1u);
    int prev = 0;
    for (const auto& p : s.poles()) {
        EXPECT_LT(p.fit_residual, 1e-8);
        EXPECT_LT(std::abs(p.a.imag()), 1e-10);
        EXPECT_NE(p.eps, prev);  // real poles alternate in residue
        prev = p.eps;
        // just below the pole u ~ eps/(t - a)
        const double t = p.a.real() - 1e-3;
        EXPECT_NEAR((s.u(t) * (t - p.a.real())).real(), p.eps, 1e-5);
    }
    // exp(-F) changes sign across each pole, like the determinant
    const auto& p0 = s.poles().front();
    const cplx above = std::exp(-s.F(p0.a.real() + 0.1)), below = std::exp(-s.F(p0.a.real() - 0.1));
    EXPECT_LT(above.real() * below.real(), 0.0);
    EXPECT_LT(std::abs(above.imag()), 1e-10);
    EXPECT_LT(std::abs(below.imag()), 1e-10);
}

TEST(Painleve, PoleRoundTrip) {
    auto s = solve_as(1.5, -4);
    ASSERT_GE(s.poles().size(), 1u);
    const double a = s.poles().front().a.real();
    const double t_below = a - 0.3, t_above = a + 0.3;
    const ASState from = s.at(t_below);
    PiiPath back = integrate_through_poles(from, t_below, t_above, 1e-12, 1e-12);
    ASSERT_EQ(back.status, OdeStatus::Completed);
    ASSERT_EQ(back.poles.size(), 1u);
    EXPECT_NEAR(back.poles.front().a.real(), a, 1e-9);
    const ASState re = back.state(t_above), orig = s.at(t_above);
    EXPECT_LT(std::abs(re.u - orig.u), 1e-6 * std::abs(orig.u));
    EXPECT_LT(std::abs(re.up - orig.up), 1e-6 * std::abs(orig.up));
    EXPECT_LT(std::abs(std::exp(-re.F) - std::exp(-orig.F)), 1e-6);
}

TEST(Painleve, TraversalDisabledThrows) {
    SolveOptions opt;
    opt.traverse_poles = false;
    EXPECT_THROW(solve_as(1.5, -12, 1e-12, opt), PoleEncountered);
}

TEST(Painleve, VAsymptoteLeadingTerm) {
    const cplx beta(0, 0.3);
    for (double t : {-100.0, -400.0}) {
        const cplx m = v_asymptote_minus(t, beta);
        EXPECT_NEAR(m.real() / (0.6 * std::sqrt(-t)), 1.0, 0.6 / (-t));
        EXPECT_EQ(m.imag(), 0.0);
    }
    // general and imaginary-beta forms coincide on the imaginary axis
    for (double t : {-10.0, -33.3})
        EXPECT_LT(std::abs(v_asymptote_minus(t, beta, VForm::General) - v_asymptote_minus(t, beta, VForm::ImaginaryBeta)), 1e-12);
}

TEST(Painleve, VAsymptoteAgainstOde) {
    for (cplx beta : {cplx(0, 0.3), cplx(0.08, 0.1)}) {
        auto s = solve_as(kappa_from_beta(beta), -41);
        for (double t : {-30.0, -40.0}) {
            const double bound = std::pow(-t, -2.5 + 3 * std::abs(beta.real()));
            EXPECT_LT(std::abs(-s.v(t) - v_asymptote_minus(t, beta)), bound) << beta << " " << t;
        }
    }
}

TEST(Painleve, VAsymptoteOscillationEnvelope) {
    const cplx beta(0.1, 0.2);
    auto envelope = [&](double t0) {
        double m = 0;
        for (double t = t0; t <= t0 + 1; t += 0.005) {
            const cplx osc = v_asymptote_minus(t, beta) - (-2.0 * cplx(0, 1) * beta * std::sqrt(-t) - 1.5 * beta * beta / (-t));
            m = std::max(m, std::abs(osc));
        }
        return m;
    };
    const double p = -1 + 3 * std::abs(beta.real());
    const double r = (envelope(-41) / envelope(-21)) / std::pow(40.5 / 20.5, p);
    EXPECT_NEAR(r, 1.0, 0.05);
}

TEST(Painleve, HalfLineVAsymptote) {
    auto s = solve_as(std::sqrt(2.0), -13);
    for (double t : {-12.0, -11.0}) EXPECT_LT(std::abs(-s.v(t).real() - v_asymptote_minus(t, s.beta).real()), 0.05 * std::sqrt(-t)) << t;
}

// ---- invariants ----

TEST(PainleveInvariants, PiiResidualOnUniformGrid) {
    for (cplx k : {cplx(0.5, 0), cplx(0.3, 0.4), cplx(1.5, 0)}) {
        const double tol = 1e-12;
        auto s = solve_as(k, -20, tol);
        double worst = 0;
        for (int i = 0; i < 200; ++i) {
            const double t = -20 + 30.0 * i / 199;
            if (t < s.t_start) {
                bool near_pole = false;
                for (const auto& p : s.poles()) near_pole |= std::abs(t - p.a.real()) < 0.05;
                if (near_pole) continue;
            }
            const double u3 = std::pow(std::abs(s.u(t)), 3);
            worst = std::max(worst, s.pii_residual(t) / (tol * (1 + u3)));
        }
        EXPECT_LT(worst, 1e3) << k;  // dense derivative of a 7th-order interpolant
    }
}

TEST(PainleveInvariants, AntiderivativesAndHamiltonian) {
    auto s = solve_as(cplx(0.7, 0.2), -20);
    for (double t = -19.5; t < 6; t += 0.73) {
        const ASState st = s.at(t);
        if (t < s.t_start) {
            const ASState d = s.path.derivative(t);
            EXPECT_LT(std::abs(d.v + st.u * st.u), 1e-9) << t;
            EXPECT_LT(std::abs(d.F + st.v), 1e-9) << t;
        }
        const cplx ham = st.up * st.up - t * st.u * st.u - st.u * st.u * st.u * st.u;
        EXPECT_LT(std::abs(ham - st.v), 1e-9 * (1 + std::abs(st.v))) << t;
    }
}

TEST(PainleveInvariants, RealityOnRealAndImaginaryAxes) {
    for (cplx k : {cplx(0.8, 0), cplx(0, 0.8), cplx(0, 2.5)}) {
        auto s = solve_as(k, -25);
        for (double t = -25; t < 8; t += 0.5) EXPECT_EQ((s.u(t) / k).imag(), 0.0) << k << " " << t;
    }
}

TEST(PainleveInvariants, ExponentialDecayEnvelope) {
    for (double k : {0.2, 0.6, 0.95}) {
        auto s = solve_as(k, -1);
        for (double t = 2; t < 12; t += 0.25) EXPECT_LE(std::abs(s.u(t)), 2 * k * airy_ai(t)) << k << " " << t;
    }
}

TEST(PainleveInvariants, ParityInKappa) {
    for (cplx k : {cplx(0.6, 0), cplx(0.2, 0.7)}) {
        auto a = solve_as(k, -20), b = solve_as(-k, -20);
        for (double t = -20; t < 5; t += 0.37) EXPECT_LT(std::abs(a.u(t) + b.u(t)), 1e-10 * (1 + std::abs(a.u(t))));
    }
}

TEST(PainleveInvariants, PoleFreeScanOffTheCut) {
    int underflows = 0, poles = 0;
    for (double r : {0.3, 0.7, 0.95, 1.3})
        for (double th : {std::numbers::pi / 6, std::numbers::pi / 2, 5 * std::numbers::pi / 6}) {
            auto s = solve_as(std::polar(r, th), -25, 1e-12, {.t_max = 10});
            underflows += s.status() == OdeStatus::StepUnderflow;
            poles += static_cast<int>(s.poles().size());
            EXPECT_EQ(s.status(), OdeStatus::Completed);
        }
    EXPECT_EQ(underflows, 0);
    EXPECT_EQ(poles, 0);
    EXPECT_GE(solve_as(1.5, -25).poles().size(), 1u);
}
