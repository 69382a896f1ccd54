#pragma once

// Small traits layer so the generic algorithms (LU, quadrature, ODE stepping)
// run unchanged on double, std::complex<double>, BigFloat and BigComplex.

#include "edgejump/numerics/bigfloat.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <type_traits>

namespace edgejump {

template <class T> struct scalar_traits;

template <> struct scalar_traits<double> {
    using real = double;
    static constexpr bool is_complex = false;
    static double from_double(double x, const double&) { return x; }
    static double from_decimal(const char* s, const double&) { return std::strtod(s, nullptr); }
    static double log2_abs(double x) { return x == 0.0 ? -INFINITY : std::log2(std::fabs(x)); }
    static double abs(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
};

template <> struct scalar_traits<std::complex<double>> {
    using real = double;
    static constexpr bool is_complex = true;
    static std::complex<double> from_double(double x, const std::complex<double>&) { return {x, 0.0}; }
    static double log2_abs(const std::complex<double>& z) {
        double a = std::abs(z);
        return a == 0.0 ? -INFINITY : std::log2(a);
    }
    static double abs(const std::complex<double>& z) { return std::abs(z); }
    static double to_double(const std::complex<double>& z) { return z.real(); }
};

template <> struct scalar_traits<BigFloat> {
    using real = BigFloat;
    static constexpr bool is_complex = false;
    static BigFloat from_double(double x, const BigFloat& like) { return BigFloat(x, like.ctx()); }
    static BigFloat from_decimal(const char* s, const BigFloat& like) { return BigFloat(std::string(s), like.ctx()); }
    static double log2_abs(const BigFloat& x) { return x.log2_abs(); }
    static BigFloat abs(const BigFloat& x) { return edgejump::abs(x); }
    static double to_double(const BigFloat& x) { return x.to_double(); }
};

template <> struct scalar_traits<BigComplex> {
    using real = BigFloat;
    static constexpr bool is_complex = true;
    static BigComplex from_double(double x, const BigComplex& like) { return BigComplex(x, like.ctx()); }
    static double log2_abs(const BigComplex& z) { return z.log2_abs(); }
    static BigFloat abs(const BigComplex& z) { return edgejump::abs(z); }
    static double to_double(const BigComplex& z) { return z.real().to_double(); }
};

template <class T> using real_t = typename scalar_traits<T>::real;

/// Constant `x` carrying the precision of `like` (a no-op for builtin types).
template <class T> T make_like(double x, const T& like) { return scalar_traits<T>::from_double(x, like); }

}  // namespace edgejump
