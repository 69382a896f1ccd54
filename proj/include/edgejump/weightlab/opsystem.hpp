#pragma once

// Finite-n side: moments of the jump-discontinuous Gaussian weight, Hankel
// determinants, norms, recurrence coefficients and the monic polynomials.

#include "edgejump/numerics/bigfloat.hpp"
#include "edgejump/numerics/linalg.hpp"
#include "edgejump/specfun/moments.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgejump {

struct SingularMinor : std::runtime_error {
    int k;
    explicit SingularMinor(int k_)
        : std::runtime_error("SingularMinor: H_" + std::to_string(k_) + " vanishes"), k(k_) {}
};

/// (beta, lambda0) or the edge form (beta, n, t) with lambda0 = sqrt(2n) (1 + t n^{-2/3} / 2).
struct WeightParams {
    std::complex<double> beta;
    double lambda0_direct = 0.0;
    std::optional<int> n;
    double t = 0.0;

    static WeightParams direct(std::complex<double> beta, double lambda0) {
        check_beta(beta);
        return {beta, lambda0, std::nullopt, 0.0};
    }
    static WeightParams edge(std::complex<double> beta, int n, double t) {
        check_beta(beta);
        if (n < 1) throw std::invalid_argument("WeightParams: n must be positive");
        return {beta, 0.0, n, t};
    }

    bool is_edge() const { return n.has_value(); }

    /// lambda0 at the given precision (exact transcription of the edge scaling for the edge form).
    BigFloat lambda0(PrecisionCtx ctx) const {
        if (!is_edge()) return BigFloat(lambda0_direct, ctx);
        BigFloat nn(static_cast<long>(*n), ctx);
        BigFloat c = cbrt(nn);
        BigFloat scale = 1.0 + BigFloat(t, ctx) / (c * c) / 2L;
        return sqrt(nn * 2L) * scale;
    }
    double lambda0() const { return lambda0(PrecisionCtx(128)).to_double(); }

    WeightParams with_beta(std::complex<double> b) const {
        WeightParams p = *this;
        p.beta = b;
        return p;
    }

private:
    static void check_beta(std::complex<double> b) {
        if (!(std::fabs(b.real()) <= 0.5 + 1e-15)) throw std::invalid_argument("WeightParams: |Re beta| must be <= 1/2");
    }
};

/// e^{i pi beta} at the given precision.
inline BigComplex exp_i_pi(std::complex<double> beta, PrecisionCtx ctx) {
    BigFloat pi = BigFloat::pi(ctx);
    BigComplex z(BigFloat(-beta.imag(), ctx) * pi, BigFloat(beta.real(), ctx) * pi);
    if (beta.real() == 0.0) return BigComplex(exp(z.real()));
    return exp(z);
}

/// mu_j = e^{i pi beta} L_j + e^{-i pi beta} J_j for j = 0..K, where L_j and J_j are
/// the Gaussian moments left and right of lambda0.
inline std::vector<BigComplex> moments(const BigFloat& lambda0, std::complex<double> beta, unsigned K) {
    const PrecisionCtx ctx = lambda0.ctx();
    const HalfMomentTable t = half_gauss_moments(lambda0, K);
    const BigComplex left_w = exp_i_pi(beta, ctx);
    const BigComplex right_w = exp_i_pi(-beta, ctx);
    std::vector<BigComplex> mu;
    mu.reserve(K + 1);
    for (unsigned j = 0; j <= K; ++j) mu.push_back(left_w * t.left[j] + right_w * t.right[j]);
    return mu;
}

inline std::vector<BigComplex> moments(const WeightParams& p, unsigned K, PrecisionCtx ctx) {
    return moments(p.lambda0(ctx), p.beta, K);
}

/// H_n(lambda0, 0) = (2 pi)^{n/2} 2^{-n^2/2} prod_{k=1}^{n-1} k!.
inline BigFloat gaussian_hankel(unsigned n, PrecisionCtx ctx) {
    const long nl = static_cast<long>(n);
    BigFloat r = sqrt(pow(BigFloat::pi(ctx) * 2L, nl) * BigFloat::pow2(-nl * nl, ctx));
    BigFloat fact(1L, ctx);
    for (unsigned k = 1; k < n; ++k) {
        fact *= static_cast<long>(k);
        r *= fact;
    }
    return r;
}

struct OPSystem {
    WeightParams params;
    PrecisionCtx ctx;
    int N = 0;
    BigFloat lambda0;
    std::vector<BigComplex> mu;                   // mu_0..mu_{2N+1}
    std::vector<BigComplex> H;                    // H_0..H_{N+1}
    std::vector<BigComplex> h;                    // h_0..h_N
    std::vector<BigComplex> R;                    // R_0 (unused, 0)..R_N
    std::vector<BigComplex> Q;                    // Q_0..Q_N
    std::vector<std::vector<BigComplex>> coeffs;  // coeffs[k][j]: coefficient of x^j in p_k, k <= N+1
    std::optional<double> agreed_bits;            // set by the precision-doubling builder

    /// Monic p_k(x) and p_k'(x) by the forward three-term recurrence.
    std::pair<BigComplex, BigComplex> eval_with_derivative(int k, const BigFloat& x) const {
        if (k < 0 || k > N + 1) throw std::out_of_range("eval_pn: degree outside the system");
        BigComplex xc{BigFloat(x, ctx)};
        BigComplex p0(1.0, ctx), d0(ctx);
        if (k == 0) return {p0, d0};
        BigComplex p1 = xc - Q[0], d1(1.0, ctx);
        for (int j = 1; j < k; ++j) {
            BigComplex shift = xc - Q[j];
            BigComplex p2 = shift * p1 - R[j] * p0;
            BigComplex d2 = p1 + shift * d1 - R[j] * d0;
            p0 = std::move(p1);
            p1 = std::move(p2);
            d0 = std::move(d1);
            d1 = std::move(d2);
        }
        return {p1, d1};
    }
};

/// Builds the orthogonal-polynomial system up to degree N (coefficient rows to N+1).
/// Recurrence coefficients come from the Chebyshev algorithm on the raw moments, an O(N^2)
/// elimination equivalent to the unpivoted LDL^T factorization of the Hankel matrix:
/// sigma_{k,l} = int p_k x^l w, h_k = sigma_{k,k}, Q_k and R_k from ratios of sigma.
inline OPSystem build_op_system(const WeightParams& params, const BigFloat& lambda0, int N) {
    if (N < 0) throw std::invalid_argument("build_op_system: N must be >= 0");
    const PrecisionCtx ctx = lambda0.ctx();
    OPSystem s{params, ctx, N, lambda0, {}, {}, {}, {}, {}, {}, std::nullopt};
    const int levels = N + 1;  // h_0..h_N, Q_0..Q_N
    s.mu = moments(lambda0, params.beta, static_cast<unsigned>(2 * levels));

    BigFloat scratch(ctx);
    std::vector<BigComplex> prev2, prev(s.mu.begin(), s.mu.end());  // sigma_{k-2,.}, sigma_{k-1,.}
    if (prev[0].is_zero()) throw SingularMinor(1);
    s.h.push_back(prev[0]);
    s.Q.push_back(prev[1] / prev[0]);
    s.R.emplace_back(ctx);
    for (int k = 1; k < levels; ++k) {
        std::vector<BigComplex> cur;
        cur.reserve(prev.size());
        for (int l = 0; l + 1 < static_cast<int>(prev.size()); ++l) {
            if (l < k) {
                cur.emplace_back(ctx);  // sigma_{k,l} = 0 below the diagonal
                continue;
            }
            BigComplex v = prev[l + 1];
            BigComplex::sub_mul(v, s.Q[k - 1], prev[l], scratch);
            if (k >= 2) BigComplex::sub_mul(v, s.R[k - 1], prev2[l], scratch);
            cur.push_back(std::move(v));
        }
        if (cur[k].is_zero()) throw SingularMinor(k + 1);
        s.h.push_back(cur[k]);
        s.Q.push_back(cur[k + 1] / cur[k] - prev[k] / prev[k - 1]);
        s.R.push_back(cur[k] / prev[k - 1]);
        prev2 = std::move(prev);
        prev = std::move(cur);
    }

    s.H.reserve(N + 2);
    s.H.emplace_back(1.0, ctx);
    for (int k = 0; k <= N; ++k) s.H.push_back(s.H.back() * s.h[k]);

    // Monic coefficient rows p_0..p_{N+1}.
    s.coeffs.resize(N + 2);
    s.coeffs[0] = {BigComplex(1.0, ctx)};
    for (int k = 0; k <= N; ++k) {
        std::vector<BigComplex> next(k + 2, BigComplex(ctx));
        for (int j = 0; j <= k; ++j) {
            next[j + 1] += s.coeffs[k][j];
            BigComplex::sub_mul(next[j], s.Q[k], s.coeffs[k][j], scratch);
            if (k >= 1 && j <= k - 1) BigComplex::sub_mul(next[j], s.R[k], s.coeffs[k - 1][j], scratch);
        }
        s.coeffs[k + 1] = std::move(next);
    }
    return s;
}

inline OPSystem build_op_system(const WeightParams& params, int N, PrecisionCtx ctx) {
    return build_op_system(params, params.lambda0(ctx), N);
}

namespace detail {

inline double relative_gap_bits(const BigComplex& a, const BigComplex& b) {
    BigComplex bb(b, a.ctx());
    double d = (a - bb).log2_abs();
    double m = a.log2_abs();
    if (std::isinf(d)) return static_cast<double>(a.bits());
    if (std::isinf(m)) return 0.0;
    return m - d;
}

}  // namespace detail

/// Precision-doubling policy: builds the system at ctx and 2*ctx and returns the
/// higher-precision result with the number of bits on which h_k and Q_k agree.
inline OPSystem build_op_system_checked(const WeightParams& params, int N, PrecisionCtx ctx) {
    OPSystem lo = build_op_system(params, N, ctx);
    OPSystem hi = build_op_system(params, N, ctx.doubled());
    double agreed = static_cast<double>(ctx.bits);
    for (int k = 0; k <= N; ++k) {
        agreed = std::min(agreed, detail::relative_gap_bits(hi.h[k], lo.h[k]));
        if (!hi.Q[k].is_zero() && hi.Q[k].log2_abs() > hi.h[k].log2_abs() - ctx.bits)
            agreed = std::min(agreed, detail::relative_gap_bits(hi.Q[k], lo.Q[k]));
    }
    hi.agreed_bits = agreed;
    return hi;
}

/// Monic p_k(x) from the recurrence.
inline BigComplex eval_pn(const OPSystem& s, int k, const BigFloat& x) { return s.eval_with_derivative(k, x).first; }

/// Monic p_k(x) from the coefficient table (Horner).
inline BigComplex eval_pn_coeffs(const OPSystem& s, int k, const BigFloat& x) {
    if (k < 0 || k > s.N + 1) throw std::out_of_range("eval_pn_coeffs: degree outside the system");
    BigComplex acc(s.ctx);
    BigFloat xx(x, s.ctx);
    for (int j = k; j >= 0; --j) {
        acc *= xx;
        acc += s.coeffs[k][j];
    }
    return acc;
}

/// |Q_n + h_n^{-1} p_n(lambda0)^2 e^{-lambda0^2} sinh(i pi beta)|.
inline BigFloat qn_jump_identity_residual(const OPSystem& s, int n) {
    if (n < 0 || n > s.N) throw std::out_of_range("qn_jump_identity_residual: n > N");
    const PrecisionCtx ctx = s.ctx;
    BigComplex p = eval_pn(s, n, s.lambda0);
    // sinh(i pi beta) = (e^{i pi beta} - e^{-i pi beta}) / 2
    BigComplex sh = (exp_i_pi(s.params.beta, ctx) - exp_i_pi(-s.params.beta, ctx)) / 2.0;
    BigComplex term = p * p / s.h[n] * exp(-(s.lambda0 * s.lambda0)) * sh;
    return abs(s.Q[n] + term);
}

struct DiffIdentityResult {
    BigComplex finite_difference;  // central difference of log H_n in lambda0
    BigComplex closed_form;        // (2i/h_{n-1})(p_n' p_{n-1} - p_n p_{n-1}') sin(pi beta) e^{-lambda0^2}
    BigFloat residual;             // |finite_difference - closed_form|
    BigFloat residual_literal;     // same with (p_n p_{n-1}' - p_n' p_{n-1}), the opposite sign
};

/// Differential identity for log H_n in lambda0. delta defaults to 2^{-bits/3}.
inline DiffIdentityResult diff_identity(const WeightParams& params, int n, PrecisionCtx ctx,
                                        std::optional<BigFloat> delta = std::nullopt) {
    if (n < 1) throw std::invalid_argument("diff_identity: n must be >= 1");
    const BigFloat lam = params.lambda0(ctx);
    const BigFloat d = delta ? BigFloat(*delta, ctx) : BigFloat::pow2(-static_cast<long>(ctx.bits / 3), ctx);
    OPSystem plus = build_op_system(params, lam + d, n - 1);
    OPSystem minus = build_op_system(params, lam - d, n - 1);
    OPSystem mid = build_op_system(params, lam, n);
    // log H_n(+) - log H_n(-) = sum_k log(h_k(+)/h_k(-)), avoiding a branch jump of log H_n.
    BigComplex dlog(ctx);
    for (int k = 0; k < n; ++k) dlog += log(plus.h[k] / minus.h[k]);
    dlog /= d * 2L;

    auto [pn, dpn] = mid.eval_with_derivative(n, lam);
    auto [pm, dpm] = mid.eval_with_derivative(n - 1, lam);
    // sin(pi beta) = (e^{i pi beta} - e^{-i pi beta}) / (2i)
    BigComplex two_i_sin = exp_i_pi(params.beta, ctx) - exp_i_pi(-params.beta, ctx);
    BigComplex pref = two_i_sin / mid.h[n - 1] * exp(-(lam * lam));
    BigComplex closed = pref * (dpn * pm - pn * dpm);
    BigComplex literal = -closed;
    return {dlog, closed, abs(dlog - closed), abs(dlog - literal)};
}

}  // namespace edgejump
