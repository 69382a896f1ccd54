#pragma once

// Drivers that put exact finite-n quantities next to their asymptotic forms and
// turn n-sweeps into residuals, order estimates and verdicts.

#include "edgejump/asympt/rhs.hpp"
#include "edgejump/fredholm/determinants.hpp"
#include "edgejump/numerics/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace edgejump {

struct ReportRow {
    std::string label;
    int n = 0;
    double t = std::numeric_limits<double>::quiet_NaN();
    double lambda0 = std::numeric_limits<double>::quiet_NaN();
    cplx beta;
    cplx kappa;
    cplx finite;
    cplx asym;
    double abs_res = 0;
    double rel_res = 0;
    std::optional<double> order_est;
    std::string verdict;
};

inline ReportRow make_row(std::string label, int n, double t, double lambda0, cplx beta, cplx finite, cplx asym) {
    ReportRow r{std::move(label), n, t, lambda0, beta, kappa_from_beta(beta), finite, asym};
    r.abs_res = std::abs(finite - asym);
    r.rel_res = asym == 0.0 ? r.abs_res : r.abs_res / std::abs(asym);
    return r;
}

/// Regime tag for Hankel rows: the bulk route is stated for |Re beta| < 1/4 only.
inline std::string beta_regime(cplx beta) { return std::abs(beta.real()) < 0.25 ? "re<1/4" : "1/4<=re<1/2"; }

/// Exact finite-n data at the edge point lambda0 = sqrt(2n)(1 + t n^{-2/3}/2).
struct EdgeData {
    int n;
    double t;
    cplx beta;
    OPSystem op;
};

inline EdgeData edge_data(int n, double t, cplx beta, bool checked = true) {
    const PrecisionCtx ctx = PrecisionCtx::for_hankel(n);
    const WeightParams p = WeightParams::edge(beta, n, t);
    return {n, t, beta, checked ? build_op_system_checked(p, n, ctx) : build_op_system(p, n, ctx)};
}

/// e^{-i pi beta n} H_n(beta)/H_n(0) against exp(-F(t)).
inline ReportRow compare_thm12(const EdgeData& d, const ASolution& sol) {
    const cplx lhs = log_big(d.op.H[d.n]) - log_gaussian_hankel(d.n) - cplx(0, std::numbers::pi) * d.beta * double(d.n);
    const cplx rhs = log_thm12_rhs(d.n, d.t, d.beta, sol) - log_gaussian_hankel(d.n) -
                     cplx(0, std::numbers::pi) * d.beta * double(d.n);
    return make_row("thm1.2/" + beta_regime(d.beta), d.n, d.t, d.op.lambda0.to_double(), d.beta, std::exp(lhs), std::exp(rhs));
}

/// H_n(beta)/H_n(0) in the bulk, lambda0 = lambda sqrt(2n).
inline ReportRow compare_noncrit(int n, double lambda, cplx beta) {
    const PrecisionCtx ctx = PrecisionCtx::for_hankel(n);
    const double l0 = lambda * std::sqrt(2.0 * n);
    const OPSystem op = build_op_system(WeightParams::direct(beta, l0), n, ctx);
    const cplx lhs = log_big(op.H[n]) - log_gaussian_hankel(n);
    return make_row("noncrit", n, std::numeric_limits<double>::quiet_NaN(), l0, beta, std::exp(lhs), noncrit_ratio(n, lambda, beta));
}

/// Rows for R_n, Q_n and the three readings of the h_n expansion (h_n normalized by its prefactor).
inline std::vector<ReportRow> compare_thm14(const EdgeData& d, const ASolution& sol) {
    const Thm14Rhs r = thm14_rhs(d.n, d.t, sol);
    const double l0 = d.op.lambda0.to_double();
    const cplx hn = std::exp(log_big(d.op.h[d.n]) - log_hn_prefactor(d.n, d.beta));
    std::vector<ReportRow> rows;
    rows.push_back(make_row("thm1.4/R", d.n, d.t, l0, d.beta, d.op.R[d.n].to_complex(), r.R));
    rows.push_back(make_row("thm1.4/Q", d.n, d.t, l0, d.beta, d.op.Q[d.n].to_complex(), r.Q));
    rows.push_back(make_row("thm1.4/h-literal", d.n, d.t, l0, d.beta, hn, r.h_literal));
    rows.push_back(make_row("thm1.4/h-alternative", d.n, d.t, l0, d.beta, hn, r.h_alternative));
    rows.push_back(make_row("thm1.4/h-corrected", d.n, d.t, l0, d.beta, hn, r.h_corrected));
    return rows;
}

/// p_n(lambda0) and the right side, both divided by sqrt(2 pi)(ne/2)^{n/2} n^{1/6} e^{t n^{1/3}}.
inline ReportRow compare_thm15(const EdgeData& d, const ASolution& sol) {
    const BigComplex p = eval_pn(d.op, d.n, d.op.lambda0);
    const cplx lhs = p.is_zero() ? cplx(0) : std::exp(log_big(p) - log_pn_prefactor(d.n, d.t));
    return make_row("thm1.5", d.n, d.t, d.op.lambda0.to_double(), d.beta, lhs, pn_shape(d.t, sol));
}

/// Deformed Airy determinant against the large-gap expansion; finite = log det on the matched branch.
inline ReportRow compare_conj13(double t, cplx beta, const NystromConfig& cfg = {}) {
    const cplx kappa = kappa_from_beta(beta);
    const cplx det = airy_fredholm_det(kappa * kappa, t, cfg);
    ReportRow r = make_row("conj1.3", 0, t, std::numeric_limits<double>::quiet_NaN(), beta, 0.0, large_gap_log_det(t, beta));
    cplx l = std::log(det);
    l += cplx(0, 2 * std::numbers::pi) * std::round((r.asym - l).imag() / (2 * std::numbers::pi));
    r.finite = l;
    r.abs_res = conj13_residual(t, beta, det);
    r.rel_res = r.abs_res / std::max(1.0, std::abs(r.asym));
    return r;
}

// ---- sweep statistics ----

/// log(err_{i-1}/err_i) / log(n_i/n_{i-1}) on rows i >= 1 of a sweep with at least three rows.
inline void annotate_orders(std::vector<ReportRow>& rows) {
    if (rows.size() < 3) return;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double a = rows[i - 1].rel_res, b = rows[i].rel_res;
        if (a > 0 && b > 0) rows[i].order_est = std::log(a / b) / std::log(double(rows[i].n) / rows[i - 1].n);
    }
}

/// Least-squares slope p in err ~ C n^{-p}.
inline double fitted_order(const std::vector<int>& ns, const std::vector<double>& errs) {
    const std::size_t m = ns.size();
    if (m < 2 || errs.size() != m) throw std::invalid_argument("fitted_order: need matching n and error lists of length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(double(ns[i])), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

struct BoundedCheck {
    std::vector<double> ratios;  // gap_{i+1} / gap_i
    double floor = 0;
    bool pass = false;
};

/// No growth along an n-doubling sweep: every gap_{i+1} <= max_ratio * max(gap_i, floor).
/// Gaps under the floor count as noise (a sign change of the next-order term passes through zero).
inline BoundedCheck bounded_check(const std::vector<double>& gaps, double floor, double max_ratio = 1.5) {
    BoundedCheck c;
    c.floor = floor;
    c.pass = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        c.ratios.push_back(gaps[i] / gaps[i - 1]);
        if (gaps[i] > max_ratio * std::max(gaps[i - 1], floor)) c.pass = false;
    }
    return c;
}

/// Strictly decreasing and ending at or below final_max.
inline bool monotone_decrease(const std::vector<double>& errs, double final_max) {
    for (std::size_t i = 1; i < errs.size(); ++i)
        if (!(errs[i] < errs[i - 1])) return false;
    return !errs.empty() && errs.back() <= final_max;
}

/// Shared solution for a sweep at fixed beta over t >= t_min.
inline ASolution sweep_solution(cplx beta, double t_min) { return solve_as(kappa_from_beta(beta), std::min(t_min, 0.0) - 0.5); }

}  // namespace edgejump
