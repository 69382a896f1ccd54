#pragma once

#include "edgejump/numerics/bigfloat.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace edgejump {

struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AiryPair {
    BigFloat ai;
    BigFloat aip;
};

namespace detail::airy {

/// Largest guard-bit allowance before evaluation is refused.
inline constexpr unsigned max_guard_bits = 16384;

/// Threshold above which the asymptotic series reaches `bits` bits.
inline double switch_point(unsigned bits) {
    return std::pow(0.75 * (bits + 24.0) * std::log(2.0), 2.0 / 3.0);
}

// Ai(0) and -Ai'(0).
inline std::pair<BigFloat, BigFloat> origin_constants(PrecisionCtx ctx) {
    BigFloat one_third = BigFloat(1L, ctx) / 3L;
    BigFloat g23 = tgamma(one_third * 2L), g13 = tgamma(one_third);
    // 3^{-2/3} / Gamma(2/3), 3^{-1/3} / Gamma(1/3)
    BigFloat cb = cbrt(BigFloat(3L, ctx));
    BigFloat c1 = 1.0 / (cb * cb * g23);
    BigFloat c2 = 1.0 / (cb * g13);
    return {c1, c2};
}

inline AiryPair maclaurin(const BigFloat& x, PrecisionCtx work) {
    BigFloat xw(x, work);
    auto [c1, c2] = origin_constants(work);
    BigFloat x3 = xw * xw * xw;
    // f, g and their derivatives, summed until the terms drop below 2^-bits of the running sum.
    BigFloat f(1L, work), g(xw), fp(work), gp(1L, work);
    BigFloat tf(1L, work), tg(xw), tfp = xw * xw / 2L, tgp(1L, work);
    fp = tfp;
    const double stop = -static_cast<double>(work.bits) - 8.0;
    for (long k = 1; k < 100000; ++k) {
        tf *= x3;
        tf /= (3 * k - 1) * (3 * k);
        tg *= x3;
        tg /= (3 * k) * (3 * k + 1);
        tgp *= x3;
        tgp /= (3 * k - 2) * (3 * k);
        f += tf;
        g += tg;
        gp += tgp;
        if (k >= 2) {
            tfp *= x3;
            tfp /= (3 * k - 3) * (3 * k - 1);
            fp += tfp;
        }
        double scale = std::max({f.log2_abs(), g.log2_abs(), 0.0});
        double biggest = std::max({tf.log2_abs(), tg.log2_abs(), tfp.log2_abs(), tgp.log2_abs()});
        if (x.is_zero() || biggest < scale + stop) break;
    }
    return {c1 * f - c2 * g, c1 * fp - c2 * gp};
}

inline AiryPair asymptotic(const BigFloat& x, PrecisionCtx ctx) {
    BigFloat xw(x, ctx.with_guard(32));
    BigFloat zeta = pow(sqrt(xw), 3L) * 2L / 3L;
    BigFloat sum_u(1L, xw.ctx()), sum_v(1L, xw.ctx());
    BigFloat uk(1L, xw.ctx()), term(1L, xw.ctx());
    BigFloat zinv = 1.0 / zeta;
    BigFloat zpow(1L, xw.ctx());
    double last = 0.0;
    for (long k = 1; k < 10000; ++k) {
        uk *= (6 * k - 5) * (6 * k - 3);
        uk *= 6 * k - 1;
        uk /= (2 * k - 1) * 216 * k;
        zpow *= zinv;
        zpow = -zpow;
        term = uk * zpow;
        double mag = term.log2_abs();
        if (k > 1 && mag > last) break;  // smallest term reached
        last = mag;
        sum_u += term;
        sum_v -= term * (6 * k + 1) / (6 * k - 1);
        if (mag < -static_cast<double>(xw.bits())) break;
    }
    BigFloat pre = exp(-zeta) / (sqrt(BigFloat::pi(xw.ctx())) * 2L);
    BigFloat q = sqrt(sqrt(xw));
    return {BigFloat(pre / q * sum_u, ctx), BigFloat(-(pre * q * sum_v), ctx)};
}

}  // namespace detail::airy

/// Ai(x) and Ai'(x) at the precision of x.
inline AiryPair airy(const BigFloat& x) {
    const PrecisionCtx ctx = x.ctx();
    const double xd = x.to_double();
    if (std::fabs(xd) > 1e4) throw std::domain_error("airy: |x| > 1e4");
    if (xd > detail::airy::switch_point(ctx.bits)) return detail::airy::asymptotic(x, ctx);
    const double guard = 3.0 * std::pow(std::fabs(xd), 1.5) / std::log(2.0) + 16.0;
    if (guard > detail::airy::max_guard_bits)
        throw PrecisionExhausted("airy: x = " + std::to_string(xd) + " needs more guard bits than allowed");
    AiryPair r = detail::airy::maclaurin(x, ctx.with_guard(static_cast<unsigned>(guard)));
    return {BigFloat(r.ai, ctx), BigFloat(r.aip, ctx)};
}

inline BigFloat airy_ai(const BigFloat& x) { return airy(x).ai; }
inline BigFloat airy_ai_prime(const BigFloat& x) { return airy(x).aip; }

/// Double-precision Ai and Ai' (Boost.Math).
inline std::pair<double, double> airy(double x) { return {boost::math::airy_ai(x), boost::math::airy_ai_prime(x)}; }
inline double airy_ai(double x) { return airy(x).first; }
inline double airy_ai_prime(double x) { return airy(x).second; }

}  // namespace edgejump
