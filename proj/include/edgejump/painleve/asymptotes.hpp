#pragma once

// Closed-form t -> -inf behaviour of the Ablowitz-Segur family and its antiderivatives.

#include "edgejump/painleve/ablowitz_segur.hpp"
#include "edgejump/specfun/gamma.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace edgejump {

struct TooCloseToPole : std::domain_error {
    double cos_phi;
    explicit TooCloseToPole(double c)
        : std::domain_error("singular asymptote evaluated too close to a pole, |cos phi| = " + std::to_string(std::abs(c))),
          cos_phi(c) {}
};

enum class PhaseConvention { Corrected, Literal };

/// phi(t; beta) of the oscillatory u asymptote. The literal form carries
/// -i log(Gamma(-beta)/Gamma(beta)); the corrected form carries half of it,
/// written branch-free as pi/4 - (i/2) log(Gamma(1-beta)/Gamma(1+beta)).
inline cplx as_phase(double t, cplx beta, PhaseConvention pc = PhaseConvention::Corrected) {
    const double mt = -t;
    const cplx I(0, 1);
    const cplx base = 2.0 / 3.0 * std::pow(mt, 1.5) - 1.5 * I * beta * std::log(mt) - 3.0 * I * beta * std::numbers::ln2;
    if (pc == PhaseConvention::Literal)
        return -std::numbers::pi / 4 - I * (log_gamma_complex(-beta) - log_gamma_complex(beta)) + base;
    return std::numbers::pi / 4 - 0.5 * I * (log_gamma_complex(1.0 - beta) - log_gamma_complex(1.0 + beta)) + base;
}

/// Root of 2 i beta with the sign of kappa: for small kappa it tends to kappa / sqrt(pi).
inline cplx as_amplitude(cplx beta, cplx kappa) {
    cplx r = std::sqrt(cplx(0, 2) * beta);
    if ((r * std::conj(kappa)).real() < 0) r = -r;
    return r;
}

/// u(t) ~ (-t)^{-1/4} sqrt(2 i beta) sin phi(t; beta) for t -> -inf, |Re beta| < 1/2.
/// The formula fixes u up to sign; this is the branch of kappa = kappa_from_beta(beta).
inline cplx as_asymptote_minus(double t, cplx beta, PhaseConvention pc = PhaseConvention::Corrected) {
    if (!(t < 0)) throw std::invalid_argument("as_asymptote_minus: t must be negative");
    if (!(std::abs(beta.real()) < 0.5)) throw std::invalid_argument("as_asymptote_minus: |Re beta| must be < 1/2");
    if (std::abs(beta) < 1e-3) throw std::invalid_argument("as_asymptote_minus: phase degenerates for |beta| < 1e-3");
    return std::pow(-t, -0.25) * as_amplitude(beta, kappa_from_beta(beta)) * std::sin(as_phase(t, beta, pc));
}

/// Same asymptote for a given kappa (sign of u follows kappa).
inline cplx as_asymptote_minus_kappa(double t, cplx kappa, PhaseConvention pc = PhaseConvention::Corrected) {
    const cplx beta = beta_from_kappa(kappa);
    const cplx u = as_asymptote_minus(t, beta, pc);
    return (as_amplitude(beta, kappa_from_beta(beta)) * std::conj(as_amplitude(beta, kappa))).real() < 0 ? -u : u;
}

/// phi~(t; gamma) for beta = 1/2 + i gamma.
inline double singular_phase(double t, double gamma) {
    const double mt = -t;
    const double arg_g = log_gamma_complex(cplx(0.5, gamma)).imag();
    return 2.0 / 3.0 * std::pow(mt, 1.5) + 1.5 * gamma * std::log(mt) + 3.0 * gamma * std::numbers::ln2 - arg_g;
}

/// y = u^2 for beta = 1/2 + i gamma, leading and subleading terms.
inline double p34_singular_asymptote(double t, double gamma) {
    if (!(t < 0)) throw std::invalid_argument("p34_singular_asymptote: t must be negative");
    const double ph = singular_phase(t, gamma);
    const double c = std::cos(ph), s = std::sin(ph);
    if (std::abs(c) <= 0.15) throw TooCloseToPole(c);
    const double mt = -t;
    return mt / (c * c) + (-gamma + 0.5 * s / c + 2 * gamma / (c * c) + 3 * (12 * gamma * gamma - 1) * s / (16 * c * c * c)) /
                              std::sqrt(mt);
}

enum class VForm { Auto, General, ImaginaryBeta, HalfLine };

/// theta(t; beta) = (4/3)(-t)^{3/2} - 3 i beta log(-t) - 6 i beta log 2.
inline cplx v_phase(double t, cplx beta) {
    const double mt = -t;
    const cplx I(0, 1);
    return 4.0 / 3.0 * std::pow(mt, 1.5) - 3.0 * I * beta * std::log(mt) - 6.0 * I * beta * std::numbers::ln2;
}

/// -i m21(t; beta) for t -> -inf. This equals -v(t) with v = int_t^inf u^2.
inline cplx v_asymptote_minus(double t, cplx beta, VForm form = VForm::Auto) {
    if (!(t < 0)) throw std::invalid_argument("v_asymptote_minus: t must be negative");
    const double mt = -t;
    const cplx I(0, 1);
    if (form == VForm::Auto) {
        if (std::abs(std::abs(beta.real()) - 0.5) < 1e-14) form = VForm::HalfLine;
        else if (beta.real() == 0.0) form = VForm::ImaginaryBeta;
        else form = VForm::General;
    }
    switch (form) {
        case VForm::ImaginaryBeta: {
            const double k = beta.imag();
            const double arg_g = log_gamma_complex(cplx(0, k)).imag();
            const double th = 4.0 / 3.0 * std::pow(mt, 1.5) + 3 * k * std::log(mt) + 6 * k * std::numbers::ln2 - 2 * arg_g;
            return 2 * k * std::sqrt(mt) + k / (2 * mt) * std::cos(th) + 3 * k * k / (2 * mt);
        }
        case VForm::HalfLine: {
            const double g = beta.imag();
            return std::sqrt(mt) * (2 * g - std::tan(singular_phase(t, g)));
        }
        default: {
            const cplx th = v_phase(t, beta);
            const cplx r1 = std::exp(log_gamma_complex(1.0 - beta) - log_gamma_complex(beta) + I * th);
            const cplx r2 = std::exp(log_gamma_complex(1.0 + beta) - log_gamma_complex(-beta) - I * th);
            return -2.0 * I * beta * std::sqrt(mt) - (r1 - r2) / (4.0 * I * mt) - 3.0 * beta * beta / (2 * mt);
        }
    }
}

}  // namespace edgejump
