#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace edgejump {

using cplx = std::complex<double>;

struct PoleAtNonpositiveInteger : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail::gam {

// B_2, B_4, ..., B_24
inline constexpr std::array<double, 12> bernoulli_even = {
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730};

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

/// Stirling series for log Gamma(z), Re z large.
inline cplx stirling(cplx z) {
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    cplx s = (z - 0.5) * std::log(z) - z + half_log_2pi;
    cplx zinv = 1.0 / z, z2 = zinv * zinv, p = zinv;
    for (int k = 1; k <= 10; ++k) {
        s += bernoulli_even[k - 1] / (2.0 * k * (2.0 * k - 1)) * p;
        p *= z2;
    }
    return s;
}

}  // namespace detail::gam

/// log Gamma(z) continued along the path from z to z + shift; equals the principal
/// lgamma branch on the right half plane. Not defined at poles.
inline cplx log_gamma_complex(cplx z) {
    if (detail::gam::is_nonpositive_integer(z)) throw PoleAtNonpositiveInteger("log_gamma: pole at nonpositive integer");
    if (z.real() < 0.5) {
        // log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        const double pi = std::numbers::pi;
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma_complex(1.0 - z);
    }
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return detail::gam::stirling(z) - shift;
}

/// Gamma(z) for complex z (double precision).
inline cplx gamma_complex(cplx z) {
    if (detail::gam::is_nonpositive_integer(z)) throw PoleAtNonpositiveInteger("gamma: pole at nonpositive integer");
    if (z.real() < 0.5) {
        const double pi = std::numbers::pi;
        return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
    }
    cplx prod = 1.0;
    while (z.real() < 15.0) {
        prod *= z;
        z += 1.0;
    }
    return std::exp(detail::gam::stirling(z)) / prod;
}

/// log G(1+z) continued from the large-argument expansion by the recursion
/// G(1+z) = G(1+z+N) / prod_{j<N} Gamma(1+z+j).
inline cplx log_barnes_g1p(cplx z) {
    const double zeta_prime_m1 = -0.16542114370045092921;
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    cplx sub = 0.0;
    while (std::abs(z) < 20.0 || z.real() < 10.0) {
        sub += log_gamma_complex(1.0 + z);
        z += 1.0;
    }
    cplx lz = std::log(z);
    cplx s = z * z / 2.0 * (lz - 1.5) + z * half_log_2pi - lz / 12.0 + zeta_prime_m1;
    cplx z2inv = 1.0 / (z * z), p = z2inv;
    for (int k = 1; k <= 10; ++k) {
        s += detail::gam::bernoulli_even[k] / (4.0 * k * (k + 1)) * p;
        p *= z2inv;
    }
    return s - sub;
}

/// Barnes G(w).
inline cplx barnes_g(cplx w) {
    if (detail::gam::is_nonpositive_integer(w)) return 0.0;
    return std::exp(log_barnes_g1p(w - 1.0));
}

}  // namespace edgejump
