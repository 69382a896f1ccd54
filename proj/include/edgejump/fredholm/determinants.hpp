#pragma once

// det(1 - kappa^2 K_Ai) on [t, inf) by Nystrom quadrature, and the finite-n
// determinant det(1 - kappa^2 K_n) on [lambda0, inf) through the Hermite Gram matrix.

#include "edgejump/numerics/linalg.hpp"
#include "edgejump/numerics/quadrature.hpp"
#include "edgejump/specfun/airy.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace edgejump {

struct TailBoundViolated : std::runtime_error {
    double bound;
    TailBoundViolated(double T, double b)
        : std::runtime_error("Airy kernel tail trace beyond T = " + std::to_string(T) + " is " + std::to_string(b)), bound(b) {}
};

struct NystromConfig {
    int m = 40;           // starting node count, doubled until converged
    double T = std::numeric_limits<double>::quiet_NaN();  // NaN: max(t, 0) + 14
    double tol = 1e-12;   // on |det(m) - det(m/2)| / max(1, |det(m)|)
    int max_m = 1280;
};

struct FredholmResult {
    std::complex<double> value;
    int m = 0;
    double T = 0;
    double increment = 0;  // |det(m) - det(m/2)| / max(1, |det(m)|)
    bool converged = false;
};

/// int_T^inf K_Ai(x, x) dx = (2T^2 Ai^2 - Ai Ai' - 2T Ai'^2) / 3 at T.
inline double airy_tail_trace(double T) {
    const auto [ai, aip] = airy(T);
    return (2 * T * T * ai * ai - ai * aip - 2 * T * aip * aip) / 3.0;
}

/// K_Ai(x, y) from Airy values; the diagonal limit is Ai'^2 - x Ai^2.
inline double airy_kernel(double x, double ax, double apx, double y, double ay, double apy) {
    if (std::abs(x - y) < 1e-6 * (1 + std::abs(x))) {
        const double m = 0.5 * (x + y);
        const auto [a, ap] = airy(m);
        return ap * ap - m * a * a;
    }
    return (ax * apy - ay * apx) / (x - y);
}

inline double airy_kernel(double x, double y) {
    const auto [ax, apx] = airy(x);
    const auto [ay, apy] = airy(y);
    return airy_kernel(x, ax, apx, y, ay, apy);
}

namespace detail {

inline std::complex<double> nystrom_det(std::complex<double> kappa2, double t, double T, int m) {
    const QuadratureRule<double> q = gauss_legendre(m, t, T);
    std::vector<double> ai(m), aip(m), sw(m);
    for (int i = 0; i < m; ++i) {
        std::tie(ai[i], aip[i]) = edgejump::airy(q.nodes[i]);
        sw[i] = std::sqrt(q.weights[i]);
    }
    Matrix<std::complex<double>> A(m, m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double k = i == j ? aip[i] * aip[i] - q.nodes[i] * ai[i] * ai[i]
                                    : airy_kernel(q.nodes[i], ai[i], aip[i], q.nodes[j], ai[j], aip[j]);
            A(i, j) = (i == j ? 1.0 : 0.0) - kappa2 * (sw[i] * k * sw[j]);
        }
    return lu_det(A);
}

}  // namespace detail

/// det(I - kappa^2 K_Ai |_[t, inf)) with node doubling until two successive values agree to cfg.tol
/// (relative once |det| > 1, which happens for kappa^2 < 0).
inline FredholmResult airy_fredholm_det_detailed(std::complex<double> kappa2, double t, const NystromConfig& cfg = {}) {
    if (cfg.m < 1) throw std::invalid_argument("airy_fredholm_det: m must be positive");
    FredholmResult r;
    r.T = std::isnan(cfg.T) ? std::max(t, 0.0) + 14.0 : cfg.T;
    if (kappa2 == 0.0) {
        r.value = 1.0;
        r.converged = true;
        return r;
    }
    if (!(r.T > t)) throw std::invalid_argument("airy_fredholm_det: truncation point must exceed t");
    const double tail = std::abs(kappa2) * airy_tail_trace(r.T);
    if (tail > cfg.tol / 10) throw TailBoundViolated(r.T, tail);
    // below t = -12 the kernel oscillates faster: start finer
    int m = std::max(cfg.m, 40);
    if (t < -12) m = std::max(m, static_cast<int>(std::ceil(40 * std::pow(-t / 12, 1.5))));
    std::complex<double> prev = detail::nystrom_det(kappa2, t, r.T, m);
    while (2 * m <= cfg.max_m) {
        m *= 2;
        const std::complex<double> cur = detail::nystrom_det(kappa2, t, r.T, m);
        r.increment = std::abs(cur - prev) / std::max(1.0, std::abs(cur));
        prev = cur;
        if (r.increment < cfg.tol) {
            r.converged = true;
            break;
        }
    }
    r.value = prev;
    r.m = m;
    return r;
}

inline std::complex<double> airy_fredholm_det(std::complex<double> kappa2, double t, const NystromConfig& cfg = {}) {
    return airy_fredholm_det_detailed(kappa2, t, cfg).value;
}

// ---- finite n ----

/// Orthonormal Hermite functions psi_j(x) = H_j(x) e^{-x^2/2}, j < n, with
/// int psi_j psi_k dx = delta_jk. The double version rescales to avoid under/overflow.
template <class Real>
std::vector<Real> hermite_functions_all(int n, const Real& x) {
    std::vector<Real> out;
    if (n <= 0) return out;
    out.reserve(n);
    if constexpr (std::is_same_v<Real, double>) {
        // carry p_j = psi_j * e^{x^2/2} * 2^{-scale}, scale grows when p_j gets large
        const double big = 0x1p+400, small = 0x1p-400;
        int scale = 0;
        std::vector<int> sc;
        sc.reserve(n);
        double pm = 0.0, p = std::pow(std::numbers::pi, -0.25);
        out.push_back(p);
        sc.push_back(0);
        for (int j = 0; j + 1 < n; ++j) {
            double pn = std::sqrt(2.0 / (j + 1)) * x * p - std::sqrt(static_cast<double>(j) / (j + 1)) * pm;
            pm = p;
            p = pn;
            if (std::abs(p) > big) {
                p *= small;
                pm *= small;
                scale += 400;
            }
            out.push_back(p);
            sc.push_back(scale);
        }
        // e^{-x^2/2} = 2^{-e} r with r in (1/2, 1]
        const int e = static_cast<int>(std::floor(0.5 * x * x / std::numbers::ln2));
        const double r = std::exp(-0.5 * x * x + e * std::numbers::ln2);
        for (int j = 0; j < n; ++j) out[j] = std::ldexp(out[j] * r, sc[j] - e);
    } else {
        const PrecisionCtx c = x.ctx();
        out.push_back(exp(-(x * x) / 2L) / sqrt(sqrt(BigFloat::pi(c))));
        if (n > 1) out.push_back(sqrt(BigFloat(2L, c)) * x * out[0]);
        for (int j = 1; j + 1 < n; ++j)
            out.push_back(sqrt(BigFloat(2L, c) / static_cast<long>(j + 1)) * x * out[j] -
                          sqrt(BigFloat(static_cast<long>(j), c) / static_cast<long>(j + 1)) * out[j - 1]);
    }
    return out;
}

struct GramConfig {
    int nodes_per_panel = 20;
    double panel_width = 0.25;
    double tail_pad = 8.0;  // beyond the turning point sqrt(2n+1)
};

template <class Real>
struct GramMatrix {
    int n = 0;
    Real lambda0;
    Matrix<Real> G;
    std::size_t nodes = 0;
};

/// G_jk = int_{lambda0}^inf psi_j psi_k dx by composite Gauss-Legendre on
/// [max(lambda0, -L), max(lambda0, 0) + L], L = sqrt(2n+1) + tail_pad.
template <class Real>
GramMatrix<Real> hermite_gram(int n, const Real& lambda0, const GramConfig& cfg = {}) {
    if (n < 1) throw std::invalid_argument("hermite_gram: n must be >= 1");
    const double L = std::sqrt(2.0 * n + 1) + cfg.tail_pad;
    const double l0 = scalar_traits<Real>::to_double(lambda0);
    const double lo_d = std::max(l0, -L);
    const Real lo = l0 >= -L ? lambda0 : make_like(-L, lambda0);
    const Real hi = make_like(std::max(l0, 0.0) + L, lambda0);
    const double len = scalar_traits<Real>::to_double(hi) - lo_d;
    const int panels = std::max(1, static_cast<int>(std::ceil(len / cfg.panel_width)));
    const QuadratureRule<Real> q = composite_gauss_legendre(cfg.nodes_per_panel, panels, lo, hi);

    GramMatrix<Real> g{n, lambda0, Matrix<Real>(n, n, make_like(0.0, lambda0)), q.size()};
    for (std::size_t i = 0; i < q.size(); ++i) {
        const std::vector<Real> psi = hermite_functions_all(n, q.nodes[i]);
        for (int j = 0; j < n; ++j) {
            const Real wj = q.weights[i] * psi[j];
            for (int k = j; k < n; ++k) g.G(j, k) += wj * psi[k];
        }
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < j; ++k) g.G(j, k) = g.G(k, j);
    return g;
}

/// det(I - kappa^2 G) in double.
inline std::complex<double> finite_n_det(const GramMatrix<double>& g, std::complex<double> kappa2) {
    Matrix<std::complex<double>> A(g.n, g.n, 0.0);
    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) A(j, k) = (j == k ? 1.0 : 0.0) - kappa2 * g.G(j, k);
    return lu_det(A);
}

inline std::complex<double> finite_n_det(int n, double lambda0, std::complex<double> kappa2, const GramConfig& cfg = {}) {
    return finite_n_det(hermite_gram(n, lambda0, cfg), kappa2);
}

/// det(I - kappa^2 G) at the precision of G.
inline BigComplex finite_n_det(const GramMatrix<BigFloat>& g, const BigComplex& kappa2) {
    const PrecisionCtx ctx = g.lambda0.ctx();
    Matrix<BigComplex> A(g.n, g.n, BigComplex(ctx));
    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
            A(j, k) = kappa2 * BigComplex(g.G(j, k));
            A(j, k) = BigComplex(j == k ? 1.0 : 0.0, ctx) - A(j, k);
        }
    return lu_det(A, ctx);
}

}  // namespace edgejump
