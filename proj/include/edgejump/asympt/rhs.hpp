#pragma once

// Closed-form large-n right-hand sides for the Hankel determinant, recurrence
// coefficients, norms and p_n(lambda0) of the discontinuous Gaussian weight,
// and the large-gap expansion of the deformed Airy determinant.

#include "edgejump/numerics/quadrature.hpp"
#include "edgejump/painleve/ablowitz_segur.hpp"
#include "edgejump/specfun/airy.hpp"
#include "edgejump/specfun/gamma.hpp"
#include "edgejump/weightlab/opsystem.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace edgejump {

/// log z for a BigComplex whose modulus may be outside double range.
inline cplx log_big(const BigComplex& z) { return log(z).to_complex(); }

/// log H_n(lambda0, 0) = (n/2) log(2 pi) - (n^2/2) log 2 + sum_{k<n} log k!.
inline double log_gaussian_hankel(int n) {
    double s = 0.5 * n * std::log(2 * std::numbers::pi) - 0.5 * n * static_cast<double>(n) * std::numbers::ln2;
    for (int k = 1; k < n; ++k) s += std::lgamma(k + 1.0);
    return s;
}

inline void check_sol_matches(const ASolution& sol, cplx beta) {
    const cplx k2 = 1.0 - std::exp(cplx(0, -2 * std::numbers::pi) * beta);
    if (std::abs(sol.kappa * sol.kappa - k2) > 1e-10 * (1 + std::abs(k2)))
        throw std::invalid_argument("asymptotic rhs: solution kappa does not match beta");
}

/// log of e^{i pi beta n} H_n(lambda0, 0) exp(-F(t)).
inline cplx log_thm12_rhs(int n, double t, cplx beta, const ASolution& sol) {
    if (!(std::abs(beta.real()) < 0.5)) throw std::invalid_argument("thm12_rhs: |Re beta| must be < 1/2");
    check_sol_matches(sol, beta);
    return cplx(0, std::numbers::pi) * beta * static_cast<double>(n) + log_gaussian_hankel(n) - sol.F(t);
}

inline BigComplex thm12_rhs(int n, double t, cplx beta, const ASolution& sol, PrecisionCtx ctx) {
    const cplx l = log_thm12_rhs(n, t, beta, sol);
    return exp(BigComplex(l, ctx));
}

/// log of H_n(lambda0, 0) G(1+b)G(1-b) (1-l^2)^{-3b^2/2} (8n)^{-b^2} exp(2inb(arcsin l + l sqrt(1-l^2))).
inline cplx log_noncrit_rhs(int n, double lambda, cplx beta) {
    if (!(std::abs(beta.real()) < 0.25)) throw std::invalid_argument("noncrit_rhs: |Re beta| must be < 1/4");
    if (!(std::abs(lambda) < 1)) throw std::invalid_argument("noncrit_rhs: lambda must lie in (-1, 1)");
    const double nn = n;
    const cplx b2 = beta * beta;
    return log_gaussian_hankel(n) + log_barnes_g1p(beta) + log_barnes_g1p(-beta) - 1.5 * b2 * std::log1p(-lambda * lambda) -
           b2 * std::log(8 * nn) +
           cplx(0, 2) * nn * beta * (std::asin(lambda) + lambda * std::sqrt(1 - lambda * lambda));
}

/// The factor multiplying H_n(lambda0, 0) in the bulk expansion.
inline cplx noncrit_ratio(int n, double lambda, cplx beta) {
    return std::exp(log_noncrit_rhs(n, lambda, beta) - log_gaussian_hankel(n));
}

enum class HnForm { Literal, Alternative, Corrected };

struct Thm14Rhs {
    cplx R;
    cplx Q;
    // h_n / (pi sqrt(2n) n^n (2e)^{-n} e^{i pi beta}) through second order, three readings
    cplx h_literal;      // 1 + v n^{-1/3} + (v^2 - u^2)/2 n^{-2/3}
    cplx h_alternative;  // 1 + v n^{-1/3} + (v^2 + u^2)/2 n^{-2/3}
    cplx h_corrected;    // 1 - v n^{-1/3} + (v^2 - u^2)/2 n^{-2/3}

    cplx h(HnForm f) const {
        return f == HnForm::Literal ? h_literal : f == HnForm::Alternative ? h_alternative : h_corrected;
    }
};

inline Thm14Rhs thm14_rhs(int n, double t, const ASolution& sol) {
    const double nn = n, c = std::cbrt(nn);
    const ASState s = sol.at(t);
    const cplx u2 = s.u * s.u, v = s.v;
    Thm14Rhs r;
    r.R = nn / 2 - 0.5 * u2 * c;
    r.Q = -u2 * std::pow(nn, -1.0 / 6) / std::numbers::sqrt2;
    r.h_literal = 1.0 + v / c + 0.5 * (v * v - u2) / (c * c);
    r.h_alternative = 1.0 + v / c + 0.5 * (v * v + u2) / (c * c);
    r.h_corrected = 1.0 - v / c + 0.5 * (v * v - u2) / (c * c);
    return r;
}

/// log of pi sqrt(2n) n^n (2e)^{-n} e^{i pi beta}.
inline cplx log_hn_prefactor(int n, cplx beta) {
    const double nn = n;
    return std::log(std::numbers::pi * std::sqrt(2 * nn)) + nn * (std::log(nn) - std::numbers::ln2 - 1) +
           cplx(0, std::numbers::pi) * beta;
}

/// log of sqrt(2 pi) (ne/2)^{n/2} n^{1/6} e^{t n^{1/3}}.
inline double log_pn_prefactor(int n, double t) {
    const double nn = n;
    return 0.5 * std::log(2 * std::numbers::pi) + 0.5 * nn * (std::log(nn) + 1 - std::numbers::ln2) + std::log(nn) / 6 +
           t * std::cbrt(nn);
}

/// u(t; kappa)/kappa, the factor left after removing log_pn_prefactor; Ai(t) at kappa = 0.
inline cplx pn_shape(double t, const ASolution& sol) {
    if (sol.kappa == 0.0) return edgejump::airy(t).first;
    return sol.u(t) / sol.kappa;
}

/// log of (sqrt(2 pi)/kappa) (ne/2)^{n/2} n^{1/6} e^{t n^{1/3}} u(t; kappa).
inline cplx log_thm15_rhs(int n, double t, const ASolution& sol) { return log_pn_prefactor(n, t) + std::log(pn_shape(t, sol)); }

/// log G(1+b)G(1-b) - 3 b^2 log 2 - (4/3) i b (-t)^{3/2} - (3/2) b^2 log(-t).
inline cplx large_gap_log_det(double t, cplx beta) {
    if (!(t < 0)) throw std::invalid_argument("large_gap_log_det: t must be negative");
    const double mt = -t;
    return log_barnes_g1p(beta) + log_barnes_g1p(-beta) - 3.0 * beta * beta * std::numbers::ln2 -
           cplx(0, 4.0 / 3.0) * beta * std::pow(mt, 1.5) - 1.5 * beta * beta * std::log(mt);
}

/// |log det + (4/3) i b (-t)^{3/2} + (3/2) b^2 log(-t) - log G(1+b)G(1-b) + 3 b^2 log 2|.
/// The determinant fixes log det only modulo 2 pi i; the branch nearest the expansion is used.
inline double conj13_residual(double t, cplx beta, cplx det) {
    if (beta == 0.0) return std::abs(std::log(det));
    const cplx ref = large_gap_log_det(t, beta);
    cplx l = std::log(det);
    l += cplx(0, 2 * std::numbers::pi) * std::round((ref - l).imag() / (2 * std::numbers::pi));
    return std::abs(l - ref);
}

/// int_t^inf (s - t) Ai(s)^2 ds by composite Gauss-Legendre, and its closed form
/// (2t^2 Ai^2 - Ai Ai' - 2t Ai'^2)/3.
inline std::pair<double, double> moment_limit_check(double t) {
    const double hi = std::max(t, 0.0) + 20;
    const int panels = static_cast<int>(std::ceil((hi - t) / 0.5));
    const QuadratureRule<double> q = composite_gauss_legendre(20, panels, t, hi);
    const double quad = q.integrate([t](double s) {
        const double a = edgejump::airy(s).first;
        return (s - t) * a * a;
    });
    const auto [ai, aip] = edgejump::airy(t);
    return {quad, (2 * t * t * ai * ai - ai * aip - 2 * t * aip * aip) / 3.0};
}

}  // namespace edgejump
