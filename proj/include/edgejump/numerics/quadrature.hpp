#pragma once

#include "edgejump/numerics/scalar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace edgejump {

template <class Real>
struct QuadratureRule {
    std::vector<Real> nodes;    // strictly increasing, inside (a, b)
    std::vector<Real> weights;  // positive, summing to b - a
    Real a;
    Real b;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const {
        auto acc = weights[0] * f(nodes[0]);
        for (std::size_t i = 1; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

namespace detail {

// Legendre P_m(x) and P_m'(x) by the three-term recurrence.
template <class Real>
std::pair<Real, Real> legendre_with_derivative(int m, const Real& x) {
    Real p0 = make_like(1.0, x);
    Real p1 = x;
    for (int k = 2; k <= m; ++k) {
        Real p2 = ((2 * k - 1) * (x * p1) - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    if (m == 0) return {make_like(1.0, x), make_like(0.0, x)};
    // (1 - x^2) P_m' = m (P_{m-1} - x P_m)
    Real dp = m * (p0 - x * p1) / (1.0 - x * x);
    return {p1, dp};
}

}  // namespace detail

/// m-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 2m-1.
/// Nodes are found by Newton iteration in double and refined at the precision of `a`.
template <class Real>
QuadratureRule<Real> gauss_legendre(int m, const Real& a, const Real& b) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: m must be >= 1");
    if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");

    std::vector<Real> x_std(m, make_like(0.0, a)), w_std(m, make_like(0.0, a));
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Root i of P_m counted from the right end, seeded from the classical asymptotic guess.
        double xd = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = detail::legendre_with_derivative<double>(m, xd);
            double dx = p / dp;
            xd -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        Real x = make_like(xd, a);
        if constexpr (!std::is_same_v<Real, double>) {
            // Newton doubles the number of correct bits per sweep.
            const double target = -static_cast<double>(a.bits()) + 4.0;
            for (int it = 0; it < 64; ++it) {
                auto [p, dp] = detail::legendre_with_derivative<Real>(m, x);
                Real dx = p / dp;
                x -= dx;
                if (dx.is_zero() || dx.log2_abs() < target) break;
            }
        }
        auto [p, dp] = detail::legendre_with_derivative<Real>(m, x);
        Real w = 2.0 / ((1.0 - x * x) * dp * dp);
        x_std[m - 1 - i] = x;
        w_std[m - 1 - i] = w;
        x_std[i] = -x;
        w_std[i] = w;
    }
    if (m % 2 == 1) x_std[m / 2] = make_like(0.0, a);

    Real half_len = (b - a) / 2.0;
    Real mid = (a + b) / 2.0;
    QuadratureRule<Real> rule{{}, {}, a, b};
    rule.nodes.reserve(m);
    rule.weights.reserve(m);
    for (int i = 0; i < m; ++i) {
        rule.nodes.push_back(mid + half_len * x_std[i]);
        rule.weights.push_back(half_len * w_std[i]);
    }
    return rule;
}

/// Composite rule: `panels` equal sub-intervals of [a, b], each with an m-point Gauss-Legendre rule.
template <class Real>
QuadratureRule<Real> composite_gauss_legendre(int m, int panels, const Real& a, const Real& b) {
    if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
    const QuadratureRule<Real> ref = gauss_legendre(m, make_like(-1.0, a), make_like(1.0, a));
    QuadratureRule<Real> rule{{}, {}, a, b};
    rule.nodes.reserve(static_cast<std::size_t>(m) * panels);
    rule.weights.reserve(static_cast<std::size_t>(m) * panels);
    const Real width = (b - a) / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
        Real lo = a + width * static_cast<double>(p);
        Real mid = lo + width / 2.0;
        Real hw = width / 2.0;
        for (int i = 0; i < m; ++i) {
            rule.nodes.push_back(mid + hw * ref.nodes[i]);
            rule.weights.push_back(hw * ref.weights[i]);
        }
    }
    return rule;
}

}  // namespace edgejump
