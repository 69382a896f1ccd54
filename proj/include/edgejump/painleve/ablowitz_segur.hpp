#pragma once

// Ablowitz-Segur family of u'' = t u + 2 u^3 with u ~ kappa Ai(t) as t -> +inf,
// integrated downward together with v = int_t^inf u^2 and F = int_t^inf (s-t) u^2 ds.

#include "edgejump/numerics/ode.hpp"
#include "edgejump/specfun/airy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgejump {

using cplx = std::complex<double>;

struct PoleEncountered : std::runtime_error {
    double t;
    explicit PoleEncountered(double where)
        : std::runtime_error("Painleve II solution blows up near t = " + std::to_string(where)), t(where) {}
};

struct FitFailure : std::runtime_error {
    double residual;
    FitFailure(double where, double res)
        : std::runtime_error("Laurent fit near t = " + std::to_string(where) +
                             " failed with relative residual " + std::to_string(res)),
          residual(res) {}
};

/// kappa^2 = 1 - e^{-2 pi i beta}, with Re beta in (-1/2, 1/2]. On the cut kappa^2 > 1 this gives beta = 1/2 + i gamma.
inline cplx beta_from_kappa(cplx kappa) {
    const cplx w = 1.0 - kappa * kappa;
    cplx beta = cplx(0, 1) * std::log(w) / (2 * std::numbers::pi);
    if (beta.real() <= -0.5 + 1e-15) beta += 1.0;
    return beta;
}

/// Principal root of 1 - e^{-2 pi i beta}.
inline cplx kappa_from_beta(cplx beta) {
    const cplx w = 1.0 - std::exp(cplx(0, -2 * std::numbers::pi) * beta);
    return std::sqrt(cplx(w.real() + 0.0, w.imag() + 0.0));  // drop signed zeros
}

struct ASState {
    cplx u, up, v, F;
};

namespace detail::pii {

inline constexpr std::size_t dim = 8;  // (u, u', v, F) as re/im pairs

inline VectorField<double> augmented_field() {
    return [](const double& t, const std::vector<double>& y, std::vector<double>& dy) {
        const cplx u(y[0], y[1]), p(y[2], y[3]), v(y[4], y[5]);
        const cplx u2 = u * u;
        const cplx pp = t * u + 2.0 * u2 * u;
        dy[0] = p.real();
        dy[1] = p.imag();
        dy[2] = pp.real();
        dy[3] = pp.imag();
        dy[4] = -u2.real();
        dy[5] = -u2.imag();
        dy[6] = -v.real();
        dy[7] = -v.imag();
    };
}

inline std::vector<double> pack(const ASState& s) {
    return {s.u.real(), s.u.imag(), s.up.real(), s.up.imag(), s.v.real(), s.v.imag(), s.F.real(), s.F.imag()};
}

inline ASState unpack(const std::vector<double>& y) {
    return {{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, {y[6], y[7]}};
}

/// Small-u data at t: u = kappa Ai, v and F from the exact Airy tail integrals.
inline ASState airy_tail(cplx kappa, double t) {
    const auto [ai, aip] = edgejump::airy(t);
    const cplx k2 = kappa * kappa;
    return {kappa * ai, kappa * aip, k2 * (aip * aip - t * ai * ai),
            k2 * (2 * t * t * ai * ai - ai * aip - 2 * t * aip * aip) / 3.0};
}

}  // namespace detail::pii

/// Laurent data at a movable pole: u = eps/s - eps a s/6 - eps s^2/4 + h s^3 + ..., s = t - a.
/// v and F carry their integration constants v0 and F0 (F includes -log s).
struct PoleRecord {
    cplx a;
    int eps = 1;
    cplx h;
    cplx v0;
    cplx F0_near;  // F constant on the approach side
    cplx F0_far;   // F constant on the far side (differs by i pi)
    int direction = -1;  // -1: traversed downward
    double fit_residual = 0;
    double s_restart = 0;  // |t - a| at the restart point

    static constexpr int terms = 24;

    std::vector<cplx> coefficients() const {
        std::vector<cplx> c(terms, 0.0);
        const double e = eps;
        c[0] = e;
        c[2] = -e * a / 6.0;
        c[3] = -e / 4.0;
        c[4] = h;
        for (int k = 5; k < terms; ++k) {
            cplx d = 0.0;  // [u^3] coefficient of s^{k-3}, c_k excluded (still zero)
            for (int i = 0; i <= k; ++i)
                for (int j = 0; i + j <= k; ++j) d += c[i] * c[j] * c[k - i - j];
            c[k] = (a * c[k - 2] + c[k - 3] + 2.0 * d) / double((k - 4) * (k + 1));
        }
        return c;
    }

    /// (u, u', v, F) from the series at t; near selects the approach-side F constant.
    ASState eval(double t, bool near) const { return eval(t, near, coefficients()); }

    ASState eval(double t, bool near, const std::vector<cplx>& c) const {
        const cplx s = t - a;
        cplx u = 0.0, up = 0.0;
        cplx sp = 1.0 / s;  // s^{k-1}
        for (int k = 0; k < terms; ++k) {
            u += c[k] * sp;
            up += c[k] * double(k - 1) * sp / s;
            sp *= s;
        }
        // u^2 = sum e_m s^{m-2}
        std::vector<cplx> e(terms, 0.0);
        for (int m = 0; m < terms; ++m)
            for (int i = 0; i <= m; ++i) e[m] += c[i] * c[m - i];
        cplx v = v0, F = near ? F0_near : F0_far;
        F -= std::log(std::abs(s)) + v0 * s;
        cplx pw = 1.0 / s;  // s^{m-1}
        for (int m = 0; m < terms; ++m) {
            if (m != 1) {
                v -= e[m] * pw / double(m - 1);
                if (m >= 2) F += e[m] * pw * s / double(m * (m - 1));
            }
            pw *= s;
        }
        return {u, up, v, F};
    }
};

struct SolveOptions {
    double t_max = 4.0;            // the start point is at least this large
    bool traverse_poles = true;
    double pole_threshold = 1e3;   // |u| that ends a smooth piece
    double fit_offset = 0.04;      // |t - a| of the outer Laurent sample point and of the restart point
    double fit_tolerance = 1e-4;   // relative residual that triggers FitFailure
    std::size_t max_poles = 400;
    double h_max = 0.5;
};

/// Piecewise dense solution between poles.
struct PiiPath {
    std::vector<Trajectory<double>> pieces;
    std::vector<PoleRecord> poles;  // poles[k] separates pieces[k] and pieces[k+1]
    OdeStatus status = OdeStatus::Completed;
    double t_reached = 0;

    int direction() const { return pieces.empty() || pieces.front().forward() ? 1 : -1; }

    // Locate t: piece index, or pole index as -(k+1) for the Laurent gap.
    long locate(double t) const {
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            if (pieces[k].covers(t)) return static_cast<long>(k);
            if (k < poles.size()) {
                const double lo = std::min(pieces[k].t_end(), pieces[k + 1].t.front());
                const double hi = std::max(pieces[k].t_end(), pieces[k + 1].t.front());
                if (lo <= t && t <= hi) return -static_cast<long>(k) - 1;
            }
        }
        throw std::out_of_range("PiiPath: t = " + std::to_string(t) + " outside the integrated range");
    }

    ASState state(double t) const {
        const long k = locate(t);
        if (k >= 0) return detail::pii::unpack(pieces[k].state(t));
        const PoleRecord& p = poles[-k - 1];
        const double s = t - p.a.real();
        const bool near = p.direction < 0 ? s > 0 : s < 0;
        return p.eval(t, near);
    }

    /// Time derivative of (u, u', v, F) taken from the dense interpolant (series in pole gaps).
    ASState derivative(double t) const {
        const long k = locate(t);
        if (k >= 0) {
            const auto& tr = pieces[k];
            std::vector<double> d(detail::pii::dim);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = tr.derivative(i, t);
            return detail::pii::unpack(d);
        }
        const PoleRecord& p = poles[-k - 1];
        const double hs = 1e-6 * std::max(1e-3, std::abs(t - p.a.real()));
        const double s = t - p.a.real();
        const bool near = p.direction < 0 ? s > 0 : s < 0;
        const ASState a = p.eval(t + hs, near), b = p.eval(t - hs, near);
        return {(a.u - b.u) / (2 * hs), (a.up - b.up) / (2 * hs), (a.v - b.v) / (2 * hs), (a.F - b.F) / (2 * hs)};
    }
};

namespace detail::pii {

inline OdeOptions ode_options(double tol, double atol, double h_max) {
    OdeOptions o;
    o.rtol = tol;
    o.atol = std::max(atol, 1e-300);
    o.h_max = h_max;
    return o;
}

/// Fit (a, h) from u at two approach points; Newton on the complex 2x2 system.
inline PoleRecord fit_pole(const Trajectory<double>& tr, int dir, const SolveOptions& opt) {
    const ASState end = unpack(tr.y_end());
    const double t1 = tr.t_end();
    const cplx s_est = -end.u / end.up;
    PoleRecord p;
    p.direction = dir;
    p.eps = (end.u * s_est).real() >= 0 ? 1 : -1;
    p.a = t1 - s_est;
    p.h = 0.0;

    // Approach side: s has sign -dir.
    const double side = -dir;
    const double room = std::abs(tr.t.front() - p.a.real());
    const double sA = std::min(opt.fit_offset, 0.5 * room);
    const double sB = sA / 2;
    const double sC = std::max(sA / 4, std::abs(s_est) * 2);
    const double tA = p.a.real() + side * sA, tB = p.a.real() + side * sB, tC = p.a.real() + side * sC;
    const cplx uA = unpack(tr.state(tA)).u, uB = unpack(tr.state(tB)).u;

    auto resid = [&](cplx a, cplx h, cplx& rA, cplx& rB) {
        PoleRecord q = p;
        q.a = a;
        q.h = h;
        const auto c = q.coefficients();
        rA = q.eval(tA, true, c).u - uA;
        rB = q.eval(tB, true, c).u - uB;
    };
    for (int it = 0; it < 40; ++it) {
        cplx rA, rB;
        resid(p.a, p.h, rA, rB);
        const double da = 1e-7, dh = 1e-4;
        cplx aA, aB, bA, bB, cA, cB, dA, dB;
        resid(p.a + da, p.h, aA, aB);
        resid(p.a - da, p.h, bA, bB);
        resid(p.a, p.h + dh, cA, cB);
        resid(p.a, p.h - dh, dA, dB);
        const cplx J11 = (aA - bA) / (2 * da), J21 = (aB - bB) / (2 * da);
        const cplx J12 = (cA - dA) / (2 * dh), J22 = (cB - dB) / (2 * dh);
        const cplx det = J11 * J22 - J12 * J21;
        const cplx step_a = (J22 * rA - J12 * rB) / det;
        const cplx step_h = (J11 * rB - J21 * rA) / det;
        p.a -= step_a;
        p.h -= step_h;
        if (std::abs(step_a) < 1e-15 * (1 + std::abs(p.a)) && std::abs(step_h) < 1e-10 * (1 + std::abs(p.h))) break;
    }
    const auto c = p.coefficients();

    // Integration constants of v and F from the approach-side data at tA.
    const ASState at = unpack(tr.state(tA));
    p.v0 = 0.0;
    p.F0_near = 0.0;
    const ASState raw = p.eval(tA, true, c);
    p.v0 = at.v - raw.v;
    const ASState with_v0 = p.eval(tA, true, c);
    p.F0_near = at.F - with_v0.F;
    p.F0_far = p.F0_near - cplx(0, std::numbers::pi) * double(dir);

    // Residuals at points not used in the fit.
    double res = 0;
    for (double tt : {tA, tB, tC}) {
        const ASState num = unpack(tr.state(tt));
        const ASState ser = p.eval(tt, true, c);
        res = std::max(res, std::abs(ser.up - num.up) / std::abs(num.up));
        res = std::max(res, std::abs(ser.u - num.u) / std::abs(num.u));
        res = std::max(res, std::abs(ser.v - num.v) / (1 + std::abs(num.v)));
    }
    p.fit_residual = res;
    p.s_restart = sA;
    if (!(res <= opt.fit_tolerance)) throw FitFailure(p.a.real(), res);
    return p;
}

}  // namespace detail::pii

/// Integrates the augmented system from a given state, traversing real poles by Laurent continuation.
inline PiiPath integrate_through_poles(const ASState& start, double t0, double t1, double tol, double atol,
                                       const SolveOptions& opt = {}) {
    PiiPath path;
    const int dir = t1 < t0 ? -1 : 1;
    const auto f = detail::pii::augmented_field();
    const OdeOptions ode = detail::pii::ode_options(tol, atol, opt.h_max);
    const double thr = opt.pole_threshold;
    StopPredicate<double> stop = [thr](const double&, const std::vector<double>& y) {
        return std::hypot(y[0], y[1]) > thr;
    };
    std::vector<double> y = detail::pii::pack(start);
    double t = t0;
    for (;;) {
        path.pieces.push_back(adaptive_rk(f, y, t, t1, ode, stop));
        const auto& tr = path.pieces.back();
        path.t_reached = tr.t_end();
        const bool blowup = tr.status == OdeStatus::Stopped ||
                            (tr.status == OdeStatus::StepUnderflow && std::hypot(tr.y_end()[0], tr.y_end()[1]) > 1e2);
        if (!blowup) {
            path.status = tr.status;
            return path;
        }
        if (!opt.traverse_poles) throw PoleEncountered(tr.t_end());
        if (path.poles.size() >= opt.max_poles) {
            path.status = OdeStatus::MaxSteps;
            return path;
        }
        PoleRecord p = detail::pii::fit_pole(tr, dir, opt);
        const double t_restart = p.a.real() + dir * p.s_restart;
        path.poles.push_back(p);
        if ((t1 - t_restart) * dir <= 0) {
            // The far side of the pole is beyond t1: finish on the series.
            path.pieces.push_back(Trajectory<double>{});
            const ASState s = p.eval(t1, false);
            path.pieces.back().t.push_back(t1);
            path.pieces.back().y.push_back(detail::pii::pack(s));
            path.t_reached = t1;
            path.status = OdeStatus::Completed;
            return path;
        }
        y = detail::pii::pack(p.eval(t_restart, false));
        t = t_restart;
    }
}

/// One member of the Ablowitz-Segur family on [t_min, inf).
struct ASolution {
    cplx kappa;
    cplx beta;
    double t_start = 0;
    double t_min = 0;
    double tol = 0;
    PiiPath path;

    const std::vector<PoleRecord>& poles() const { return path.poles; }
    OdeStatus status() const { return path.status; }

    /// (u, u', v, F) at t >= t_min; above t_start the Airy tail is used.
    ASState at(double t) const {
        if (t > t_start) return detail::pii::airy_tail(kappa, t);
        if (t < path.t_reached) throw std::out_of_range("ASolution: t below the integrated range");
        return path.state(t);
    }
    cplx u(double t) const { return at(t).u; }
    cplx up(double t) const { return at(t).up; }
    cplx v(double t) const { return at(t).v; }
    cplx F(double t) const { return at(t).F; }

    /// u'' from differentiating the dense u'.
    cplx upp_dense(double t) const {
        if (t > t_start) {
            const auto [ai, aip] = edgejump::airy(t);
            return kappa * t * ai;
        }
        return path.derivative(t).up;
    }

    /// |u'' - t u - 2u^3| with u'' from dense output.
    double pii_residual(double t) const {
        const cplx uu = u(t);
        return std::abs(upp_dense(t) - t * uu - 2.0 * uu * uu * uu);
    }
};

/// Integrates u'' = tu + 2u^3 from Airy data down to t_min.
inline ASolution solve_as(cplx kappa, double t_min, double tol = 1e-12, const SolveOptions& opt = {}) {
    if (std::abs(kappa * kappa - 1.0) < 1e-12) throw std::invalid_argument("solve_as: kappa = +-1 (Hastings-McLeod) is excluded");
    if (t_min < -60) throw std::invalid_argument("solve_as: t_min must be >= -60");
    if (!(tol > 0)) throw std::invalid_argument("solve_as: tol must be positive");
    ASolution sol;
    sol.kappa = kappa;
    sol.beta = beta_from_kappa(kappa);
    sol.tol = tol;
    sol.t_min = t_min;
    const double k2 = std::norm(kappa);
    double ts = std::max(opt.t_max, t_min);
    while (ts < 60) {
        const double ai = airy_ai(ts);
        if (k2 * ai * ai < tol * 1e-4) break;
        ts += 0.25;
    }
    sol.t_start = ts;
    const ASState s0 = detail::pii::airy_tail(kappa, ts);
    if (ts <= t_min) {
        sol.path.pieces.push_back(Trajectory<double>{});
        sol.path.pieces.back().t.push_back(ts);
        sol.path.pieces.back().y.push_back(detail::pii::pack(s0));
        sol.path.t_reached = ts;
        return sol;
    }
    const double atol = tol * std::abs(s0.u);
    sol.path = integrate_through_poles(s0, ts, t_min, tol, atol, opt);
    return sol;
}

/// y = u^2 residual of y'' = 4y^2 + 2ty + y'^2/(2y), derivatives from dense output.
inline double p34_residual(const ASolution& sol, double t) {
    const cplx u = sol.u(t);
    if (std::abs(u) == 0.0) throw std::domain_error("p34_residual: u(t) = 0");
    const cplx up = sol.up(t), upp = sol.upp_dense(t);
    const cplx y = u * u, yp = 2.0 * u * up, ypp = 2.0 * up * up + 2.0 * u * upp;
    return std::abs(ypp - 4.0 * y * y - 2.0 * t * y - yp * yp / (2.0 * y));
}

/// Real-kappa integration of (u, u', v, F) in an arbitrary real type, for limits that need
/// more than double precision (small kappa). No pole handling; kappa must lie in (-1, 1).
template <class Real>
Trajectory<Real> solve_as_real(const Real& kappa, const Real& t_start, const Real& t_end, double tol) {
    const auto [ai, aip] = [&] {
        if constexpr (std::is_same_v<Real, double>) return edgejump::airy(t_start);
        else {
            const AiryPair p = edgejump::airy(t_start);
            return std::pair<Real, Real>(p.ai, p.aip);
        }
    }();
    const Real k2 = kappa * kappa;
    std::vector<Real> y0{kappa * ai, kappa * aip, k2 * (aip * aip - t_start * ai * ai),
                         k2 * (2.0 * t_start * t_start * ai * ai - ai * aip - 2.0 * t_start * aip * aip) / 3.0};
    VectorField<Real> f = [](const Real& t, const std::vector<Real>& y, std::vector<Real>& dy) {
        const Real u2 = y[0] * y[0];
        dy[0] = y[1];
        dy[1] = t * y[0] + 2.0 * u2 * y[0];
        dy[2] = -u2;
        dy[3] = -y[2];
    };
    OdeOptions o;
    o.rtol = tol;
    o.atol = tol * std::abs(scalar_traits<Real>::to_double(y0[0]));
    return adaptive_rk(f, y0, t_start, t_end, o);
}

}  // namespace edgejump
