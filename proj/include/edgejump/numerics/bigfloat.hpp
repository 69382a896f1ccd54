#pragma once

// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every BigFloat carries its own mantissa width. Binary operations produce a
// result at the wider of the two operand precisions, so values built from one
// PrecisionCtx stay at exactly ctx.bits throughout a computation.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace edgejump {

/// Immutable precision configuration threaded through exact finite-n work.
struct PrecisionCtx {
    unsigned bits = 192;

    constexpr PrecisionCtx() = default;
    constexpr explicit PrecisionCtx(unsigned b) : bits(b) {
        if (b < 64) throw std::invalid_argument("PrecisionCtx: bits must be >= 64");
    }

    /// Working precision for Hankel matrices of the given size.
    static constexpr PrecisionCtx for_hankel(unsigned matrix_size) {
        return PrecisionCtx(std::max(192u, 64u + 12u * matrix_size));
    }

    constexpr PrecisionCtx doubled() const { return PrecisionCtx(2 * bits); }
    constexpr PrecisionCtx with_guard(unsigned extra) const { return PrecisionCtx(bits + extra); }

    friend constexpr bool operator==(PrecisionCtx, PrecisionCtx) = default;
};

class BigFloat {
public:
    explicit BigFloat(PrecisionCtx ctx = PrecisionCtx()) {
        mpfr_init2(v_, ctx.bits);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(double x, PrecisionCtx ctx) {
        mpfr_init2(v_, ctx.bits);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    BigFloat(long x, PrecisionCtx ctx) {
        mpfr_init2(v_, ctx.bits);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    BigFloat(int x, PrecisionCtx ctx) : BigFloat(static_cast<long>(x), ctx) {}
    BigFloat(const std::string& decimal, PrecisionCtx ctx) {
        mpfr_init2(v_, ctx.bits);
        if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("BigFloat: cannot parse '" + decimal + "'");
    }
    /// Value of `x` rounded to the precision of ctx.
    BigFloat(const BigFloat& x, PrecisionCtx ctx) {
        mpfr_init2(v_, ctx.bits);
        mpfr_set(v_, x.v_, MPFR_RNDN);
    }

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    unsigned bits() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
    PrecisionCtx ctx() const { return PrecisionCtx(std::max(64u, bits())); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    explicit operator double() const { return to_double(); }

    /// log2 of the magnitude; -inf for zero. Safe far outside double range.
    double log2_abs() const {
        if (mpfr_zero_p(v_)) return -INFINITY;
        long e = 0;
        double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
        return std::log2(std::fabs(m)) + static_cast<double>(e);
    }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    std::string to_string(int digits = 20) const {
        if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", digits, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    BigFloat operator-() const {
        BigFloat r(*this);
        mpfr_neg(r.v_, r.v_, MPFR_RNDN);
        return r;
    }

    BigFloat& operator+=(const BigFloat& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator+=(double o) { mpfr_add_d(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator-=(double o) { mpfr_sub_d(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator*=(double o) { mpfr_mul_d(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator/=(double o) { mpfr_div_d(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }
    BigFloat& operator*=(int o) { return *this *= static_cast<long>(o); }
    BigFloat& operator/=(int o) { return *this /= static_cast<long>(o); }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
    friend BigFloat operator+(BigFloat a, double b) { return a += b; }
    friend BigFloat operator-(BigFloat a, double b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, double b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, double b) { return a /= b; }
    friend BigFloat operator+(double a, BigFloat b) { return b += a; }
    friend BigFloat operator*(double a, BigFloat b) { return b *= a; }
    friend BigFloat operator-(double a, const BigFloat& b) {
        BigFloat r(b.ctx());
        mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(double a, const BigFloat& b) {
        BigFloat r(b.ctx());
        mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(BigFloat a, long b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, long b) { return a /= b; }
    friend BigFloat operator*(BigFloat a, int b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, int b) { return a /= b; }
    friend BigFloat operator*(int a, BigFloat b) { return b *= a; }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const BigFloat& x) { return os << x.to_string(); }

    static BigFloat pi(PrecisionCtx ctx) {
        BigFloat r(ctx);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    static BigFloat euler_gamma(PrecisionCtx ctx) {
        BigFloat r(ctx);
        mpfr_const_euler(r.v_, MPFR_RNDN);
        return r;
    }
    static BigFloat ln2(PrecisionCtx ctx) {
        BigFloat r(ctx);
        mpfr_const_log2(r.v_, MPFR_RNDN);
        return r;
    }
    /// 2^e at the given precision.
    static BigFloat pow2(long e, PrecisionCtx ctx) {
        BigFloat r(1L, ctx);
        mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
        return r;
    }

private:
    void widen(const BigFloat& o) {
        if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    }

    mpfr_t v_;
};

namespace detail {
template <int (*Fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>
inline BigFloat apply_unary(const BigFloat& x) {
    BigFloat r(x.ctx());
    Fn(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
}  // namespace detail

inline BigFloat abs(const BigFloat& x) { return detail::apply_unary<mpfr_abs>(x); }
inline BigFloat sqrt(const BigFloat& x) { return detail::apply_unary<mpfr_sqrt>(x); }
inline BigFloat cbrt(const BigFloat& x) { return detail::apply_unary<mpfr_cbrt>(x); }
inline BigFloat exp(const BigFloat& x) { return detail::apply_unary<mpfr_exp>(x); }
inline BigFloat log(const BigFloat& x) { return detail::apply_unary<mpfr_log>(x); }
inline BigFloat sin(const BigFloat& x) { return detail::apply_unary<mpfr_sin>(x); }
inline BigFloat cos(const BigFloat& x) { return detail::apply_unary<mpfr_cos>(x); }
inline BigFloat tan(const BigFloat& x) { return detail::apply_unary<mpfr_tan>(x); }
inline BigFloat sinh(const BigFloat& x) { return detail::apply_unary<mpfr_sinh>(x); }
inline BigFloat cosh(const BigFloat& x) { return detail::apply_unary<mpfr_cosh>(x); }
inline BigFloat erfc(const BigFloat& x) { return detail::apply_unary<mpfr_erfc>(x); }
inline BigFloat tgamma(const BigFloat& x) { return detail::apply_unary<mpfr_gamma>(x); }
inline BigFloat asin(const BigFloat& x) { return detail::apply_unary<mpfr_asin>(x); }
inline BigFloat atan(const BigFloat& x) { return detail::apply_unary<mpfr_atan>(x); }
inline BigFloat lgamma(const BigFloat& x) {
    BigFloat r(x.ctx());
    int sgn = 0;
    mpfr_lgamma(r.raw(), &sgn, x.raw(), MPFR_RNDN);
    return r;
}
inline BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r(y.bits() >= x.bits() ? y.ctx() : x.ctx());
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline BigFloat pow(const BigFloat& x, const BigFloat& y) {
    BigFloat r(x.bits() >= y.bits() ? x.ctx() : y.ctx());
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}
inline BigFloat pow(const BigFloat& x, long n) {
    BigFloat r(x.ctx());
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}
inline BigFloat hypot(const BigFloat& x, const BigFloat& y) {
    BigFloat r(x.bits() >= y.bits() ? x.ctx() : y.ctx());
    mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}
/// n! exactly rounded.
inline BigFloat factorial(unsigned long n, PrecisionCtx ctx) {
    BigFloat r(ctx);
    mpfr_fac_ui(r.raw(), n, MPFR_RNDN);
    return r;
}

/// Complex number with BigFloat parts. Both parts share one precision.
class BigComplex {
public:
    explicit BigComplex(PrecisionCtx ctx = PrecisionCtx()) : re_(ctx), im_(ctx) {}
    BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit BigComplex(BigFloat re) : re_(std::move(re)), im_(re_.ctx()) {}
    BigComplex(std::complex<double> z, PrecisionCtx ctx) : re_(z.real(), ctx), im_(z.imag(), ctx) {}
    BigComplex(double re, PrecisionCtx ctx) : re_(re, ctx), im_(ctx) {}
    BigComplex(const BigComplex& z, PrecisionCtx ctx) : re_(z.re_, ctx), im_(z.im_, ctx) {}

    const BigFloat& real() const { return re_; }
    const BigFloat& imag() const { return im_; }
    BigFloat& real() { return re_; }
    BigFloat& imag() { return im_; }

    unsigned bits() const { return re_.bits(); }
    PrecisionCtx ctx() const { return re_.ctx(); }

    bool is_real() const { return im_.is_zero(); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

    std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

    /// log2 |z|, safe outside the double range.
    double log2_abs() const {
        double a = re_.log2_abs(), b = im_.log2_abs();
        if (std::isinf(a) && std::isinf(b)) return -INFINITY;
        double hi = std::max(a, b), lo = std::min(a, b);
        return hi + 0.5 * std::log2(1.0 + std::exp2(2.0 * (lo - hi)));
    }

    BigComplex operator-() const { return {-re_, -im_}; }
    BigComplex conj() const { return {re_, -im_}; }

    BigComplex& operator+=(const BigComplex& o) { re_ += o.re_; im_ += o.im_; return *this; }
    BigComplex& operator-=(const BigComplex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    BigComplex& operator*=(const BigComplex& o) {
        if (o.is_real()) {
            re_ *= o.re_;
            im_ *= o.re_;
        } else if (is_real()) {
            im_ = re_ * o.im_;
            re_ *= o.re_;
        } else {
            BigFloat r = re_ * o.re_ - im_ * o.im_;
            im_ = re_ * o.im_ + im_ * o.re_;
            re_ = std::move(r);
        }
        return *this;
    }
    BigComplex& operator/=(const BigComplex& o) {
        if (o.is_real()) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        BigFloat d = o.re_ * o.re_ + o.im_ * o.im_;
        BigFloat r = (re_ * o.re_ + im_ * o.im_) / d;
        im_ = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(r);
        return *this;
    }
    BigComplex& operator*=(const BigFloat& o) { re_ *= o; im_ *= o; return *this; }
    BigComplex& operator/=(const BigFloat& o) { re_ /= o; im_ /= o; return *this; }
    BigComplex& operator*=(double o) { re_ *= o; im_ *= o; return *this; }
    BigComplex& operator/=(double o) { re_ /= o; im_ /= o; return *this; }
    BigComplex& operator+=(const BigFloat& o) { re_ += o; return *this; }
    BigComplex& operator-=(const BigFloat& o) { re_ -= o; return *this; }

    friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
    friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
    friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
    friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
    friend BigComplex operator*(BigComplex a, const BigFloat& b) { return a *= b; }
    friend BigComplex operator*(const BigFloat& b, BigComplex a) { return a *= b; }
    friend BigComplex operator/(BigComplex a, const BigFloat& b) { return a /= b; }
    friend BigComplex operator*(BigComplex a, double b) { return a *= b; }
    friend BigComplex operator*(double b, BigComplex a) { return a *= b; }
    friend BigComplex operator/(BigComplex a, double b) { return a /= b; }
    friend BigComplex operator+(BigComplex a, const BigFloat& b) { return a += b; }
    friend BigComplex operator-(BigComplex a, const BigFloat& b) { return a -= b; }

    friend std::ostream& operator<<(std::ostream& os, const BigComplex& z) {
        return os << "(" << z.re_ << ", " << z.im_ << ")";
    }

    /// acc -= a*b without allocating temporaries; `tmp` is caller-owned scratch.
    static void sub_mul(BigComplex& acc, const BigComplex& a, const BigComplex& b, BigFloat& tmp) {
        const bool ar = a.is_real(), br = b.is_real();
        if (ar && br) {
            mpfr_mul(tmp.raw(), a.re_.raw(), b.re_.raw(), MPFR_RNDN);
            mpfr_sub(acc.re_.raw(), acc.re_.raw(), tmp.raw(), MPFR_RNDN);
            return;
        }
        mpfr_mul(tmp.raw(), a.re_.raw(), b.re_.raw(), MPFR_RNDN);
        mpfr_sub(acc.re_.raw(), acc.re_.raw(), tmp.raw(), MPFR_RNDN);
        mpfr_mul(tmp.raw(), a.im_.raw(), b.im_.raw(), MPFR_RNDN);
        mpfr_add(acc.re_.raw(), acc.re_.raw(), tmp.raw(), MPFR_RNDN);
        mpfr_mul(tmp.raw(), a.re_.raw(), b.im_.raw(), MPFR_RNDN);
        mpfr_sub(acc.im_.raw(), acc.im_.raw(), tmp.raw(), MPFR_RNDN);
        mpfr_mul(tmp.raw(), a.im_.raw(), b.re_.raw(), MPFR_RNDN);
        mpfr_sub(acc.im_.raw(), acc.im_.raw(), tmp.raw(), MPFR_RNDN);
    }

private:
    BigFloat re_;
    BigFloat im_;
};

inline BigFloat norm(const BigComplex& z) { return z.real() * z.real() + z.imag() * z.imag(); }
inline BigFloat abs(const BigComplex& z) { return hypot(z.real(), z.imag()); }
inline BigFloat arg(const BigComplex& z) { return atan2(z.imag(), z.real()); }
inline BigComplex conj(const BigComplex& z) { return z.conj(); }

inline BigComplex exp(const BigComplex& z) {
    BigFloat m = exp(z.real());
    if (z.imag().is_zero()) return BigComplex(std::move(m), BigFloat(z.ctx()));
    return {m * cos(z.imag()), m * sin(z.imag())};
}
/// Principal branch.
inline BigComplex log(const BigComplex& z) { return {log(abs(z)), arg(z)}; }
/// Principal branch.
inline BigComplex sqrt(const BigComplex& z) {
    if (z.imag().is_zero() && z.real() >= 0.0) return BigComplex(sqrt(z.real()), BigFloat(z.ctx()));
    BigFloat r = abs(z);
    BigFloat a = sqrt((r + z.real()) / 2L);
    BigFloat b = sqrt((r - z.real()) / 2L);
    if (z.imag().sign() < 0) b = -b;
    return {std::move(a), std::move(b)};
}
inline BigComplex sinh(const BigComplex& z) {
    // sinh(x+iy) = sinh x cos y + i cosh x sin y
    return {sinh(z.real()) * cos(z.imag()), cosh(z.real()) * sin(z.imag())};
}
inline BigComplex sin(const BigComplex& z) {
    return {sin(z.real()) * cosh(z.imag()), cos(z.real()) * sinh(z.imag())};
}
inline BigComplex pow(const BigComplex& z, long n) {
    BigComplex result(BigFloat(1L, z.ctx()));
    BigComplex base = z;
    bool invert = n < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    while (e) {
        if (e & 1UL) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    if (invert) return BigComplex(BigFloat(1L, z.ctx())) / result;
    return result;
}

}  // namespace edgejump
