#pragma once

#include "edgejump/numerics/bigfloat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace edgejump {

/// J_k = int_{lambda0}^inf x^k e^{-x^2} dx for k = 0..K, together with the
/// complementary left integrals L_k = int_{-inf}^{lambda0} x^k e^{-x^2} dx.
/// For lambda0 >= 0 the J_k are built by upward recursion; for lambda0 < 0
/// the left part comes from the positive-cut table by parity.
struct HalfMomentTable {
    BigFloat lambda0;
    std::vector<BigFloat> right;  // J_k
    std::vector<BigFloat> left;   // L_k = M_k - J_k

    std::size_t size() const { return right.size(); }
    const BigFloat& J(std::size_t k) const { return right[k]; }
};

/// Full Gaussian moments M_k = int x^k e^{-x^2} dx = Gamma((k+1)/2) for even k, 0 for odd k.
inline std::vector<BigFloat> gaussian_moments(unsigned K, PrecisionCtx ctx) {
    std::vector<BigFloat> m;
    m.reserve(K + 1);
    BigFloat even = sqrt(BigFloat::pi(ctx));
    for (unsigned k = 0; k <= K; ++k) {
        if (k % 2 == 1) {
            m.emplace_back(ctx);
        } else {
            if (k >= 2) even *= (static_cast<double>(k) - 1.0) / 2.0;
            m.push_back(even);
        }
    }
    return m;
}

namespace detail {

// Upward recursion for a nonnegative cut point a: every term is nonnegative.
inline std::vector<BigFloat> upper_half_moments(const BigFloat& a, unsigned K) {
    const PrecisionCtx ctx = a.ctx();
    std::vector<BigFloat> j;
    j.reserve(K + 1);
    BigFloat e = exp(-(a * a));
    j.push_back(sqrt(BigFloat::pi(ctx)) / 2L * erfc(a));
    if (K >= 1) j.push_back(e / 2L);
    BigFloat apow = a;  // a^{k-1}
    for (unsigned k = 2; k <= K; ++k) {
        j.push_back((j[k - 2] * static_cast<long>(k - 1) + apow * e) / 2L);
        apow *= a;
    }
    return j;
}

}  // namespace detail

inline HalfMomentTable half_gauss_moments(const BigFloat& lambda0, unsigned K) {
    const PrecisionCtx ctx = lambda0.ctx();
    HalfMomentTable t{lambda0, {}, {}};
    const std::vector<BigFloat> full = gaussian_moments(K, ctx);
    if (lambda0.sign() >= 0) {
        t.right = detail::upper_half_moments(lambda0, K);
        for (unsigned k = 0; k <= K; ++k) t.left.push_back(full[k] - t.right[k]);
    } else {
        std::vector<BigFloat> mirror = detail::upper_half_moments(-lambda0, K);
        for (unsigned k = 0; k <= K; ++k) {
            t.left.push_back(k % 2 == 0 ? mirror[k] : -mirror[k]);
            t.right.push_back(full[k] - t.left.back());
        }
    }
    return t;
}

/// All orthonormal Hermite values H_0..H_{n-1} at x.
template <class Real>
std::vector<Real> hermite_orthonormal_all(int n, const Real& x) {
    std::vector<Real> out;
    if (n <= 0) return out;
    out.reserve(n);
    if constexpr (std::is_same_v<Real, double>) {
        out.push_back(std::pow(std::numbers::pi, -0.25));
        if (n > 1) out.push_back(std::sqrt(2.0) * x * out[0]);
        for (int j = 1; j + 1 < n; ++j)
            out.push_back(std::sqrt(2.0 / (j + 1)) * x * out[j] - std::sqrt(static_cast<double>(j) / (j + 1)) * out[j - 1]);
    } else {
        const PrecisionCtx c = x.ctx();
        out.push_back(1.0 / sqrt(sqrt(BigFloat::pi(c))));
        if (n > 1) out.push_back(sqrt(BigFloat(2L, c)) * x * out[0]);
        for (int j = 1; j + 1 < n; ++j)
            out.push_back(sqrt(BigFloat(2L, c) / static_cast<long>(j + 1)) * x * out[j] -
                          sqrt(BigFloat(static_cast<long>(j), c) / static_cast<long>(j + 1)) * out[j - 1]);
    }
    return out;
}

/// Orthonormal Hermite polynomial with respect to e^{-x^2}: int H_j H_k e^{-x^2} dx = delta_jk.
template <class Real>
Real hermite_orthonormal(int k, const Real& x) {
    if (k < 0) throw std::invalid_argument("hermite_orthonormal: k must be >= 0");
    return hermite_orthonormal_all(k + 1, x).back();
}

}  // namespace edgejump
