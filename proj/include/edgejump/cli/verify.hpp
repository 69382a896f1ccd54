#pragma once

// Verification drivers: each runs one family of checks and returns report rows with
// named PASS/FAIL criteria. Default parameters are the ones the acceptance suite pins.

#include "edgejump/asympt/compare.hpp"
#include "edgejump/fredholm/determinants.hpp"
#include "edgejump/painleve/asymptotes.hpp"
#include "edgejump/rmt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace edgejump::verify {

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Result {
    std::vector<ReportRow> rows;
    std::vector<Criterion> criteria;

    bool pass() const {
        return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
    }
    void absorb(Result other) {
        rows.insert(rows.end(), other.rows.begin(), other.rows.end());
        criteria.insert(criteria.end(), other.criteria.begin(), other.criteria.end());
    }
};

inline std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

inline std::string join(const std::vector<double>& v, const char* f = "%.3g") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(f, v[i]);
    return s;
}

inline void label_verdict(ReportRow& r, bool ok) { r.verdict = ok ? "PASS" : "FAIL"; }

// ---- exact finite-n identities ----

/// H_n(lambda0, 0) from the moment route against the closed form, n = 1..n_max.
inline Result gaussian_closed_form(int n_max = 30, unsigned bits = 512, double lambda0 = 0.8, double rel_tol = 1e-30) {
    Result res;
    const PrecisionCtx ctx(bits);
    const OPSystem s = build_op_system(WeightParams::direct(0.0, lambda0), n_max, ctx);
    double worst = 0;
    for (int n = 1; n <= n_max; ++n) {
        const BigComplex ref(gaussian_hankel(n, ctx));
        const BigComplex ratio = s.H[n] / ref;
        ReportRow r = make_row("gaussian-closed-form", n, NAN, lambda0, 0.0, ratio.to_complex(), 1.0);
        r.abs_res = r.rel_res = abs(ratio - BigComplex(1.0, ctx)).to_double();
        worst = std::max(worst, r.rel_res);
        label_verdict(r, r.rel_res <= rel_tol);
        res.rows.push_back(r);
    }
    res.criteria.push_back({"gaussian closed form", worst <= rel_tol, "max rel err " + fmt("%.3g", worst) + " at " + std::to_string(bits) + " bits"});
    return res;
}

struct IdentityPoint {
    int n;
    cplx beta;
    double lambda0;
};

/// e^{-i pi n beta} H_n(beta)/H_n(0) against det(I - kappa^2 G), both at the precision for n.
inline Result finite_n_identity(const std::vector<IdentityPoint>& pts, double tol = 1e-18, unsigned bits = 0) {
    Result res;
    double worst = 0;
    for (const IdentityPoint& p : pts) {
        const PrecisionCtx ctx = bits ? PrecisionCtx(bits) : PrecisionCtx::for_hankel(p.n);
        const OPSystem op = build_op_system(WeightParams::direct(p.beta, p.lambda0), p.n, ctx);
        const BigComplex lhs = op.H[p.n] * pow(exp_i_pi(-p.beta, ctx), static_cast<long>(p.n)) / BigComplex(gaussian_hankel(p.n, ctx));
        const BigComplex kappa2 = BigComplex(1.0, ctx) - exp_i_pi(-2.0 * p.beta, ctx);
        const BigComplex rhs = finite_n_det(hermite_gram(p.n, BigFloat(p.lambda0, ctx)), kappa2);
        ReportRow r = make_row("finite-n-identity", p.n, NAN, p.lambda0, p.beta, lhs.to_complex(), rhs.to_complex());
        r.abs_res = abs(lhs - rhs).to_double();
        r.rel_res = r.abs_res / abs(rhs).to_double();
        worst = std::max(worst, r.abs_res);
        label_verdict(r, r.abs_res <= tol);
        res.rows.push_back(r);
    }
    res.criteria.push_back({"finite-n Fredholm/Hankel identity", worst <= tol, "max |lhs - rhs| " + fmt("%.3g", worst)});
    return res;
}

inline std::vector<IdentityPoint> identity_grid(const std::vector<int>& ns, const std::vector<cplx>& betas, const std::vector<double>& l0s,
                                                bool with_sqrt2n) {
    std::vector<IdentityPoint> pts;
    for (int n : ns)
        for (cplx b : betas) {
            for (double l : l0s) pts.push_back({n, b, l});
            if (with_sqrt2n) pts.push_back({n, b, std::sqrt(2.0 * n)});
        }
    return pts;
}

/// Q_n jump identity at one point; tolerance 2^{slack - bits} |Q_n|.
inline Result qn_identity(int n, const WeightParams& params, unsigned bits, double slack_bits) {
    Result res;
    const PrecisionCtx ctx(bits);
    const OPSystem s = build_op_system(params, n, ctx);
    const BigFloat r = qn_jump_identity_residual(s, n);
    const double lr = r.is_zero() ? -INFINITY : r.log2_abs();
    const double bound = slack_bits - static_cast<double>(bits) + s.Q[n].log2_abs();
    ReportRow row = make_row("qn-identity", n, params.is_edge() ? params.t : NAN, s.lambda0.to_double(), params.beta, s.Q[n].to_complex(),
                             s.Q[n].to_complex());
    row.abs_res = r.to_double();
    row.rel_res = std::exp2(lr - s.Q[n].log2_abs());
    label_verdict(row, lr <= bound);
    res.rows.push_back(row);
    res.criteria.push_back({"Q_n jump identity n=" + std::to_string(n), lr <= bound,
                            "log2 residual " + fmt("%.1f", lr) + " vs bound " + fmt("%.1f", bound)});
    return res;
}

inline Result diff_identity_check(int n, const WeightParams& params, unsigned bits, double delta, double tol) {
    Result res;
    const PrecisionCtx ctx(bits);
    const DiffIdentityResult d = diff_identity(params, n, ctx, BigFloat(delta, ctx));
    ReportRow row = make_row("diff-identity", n, NAN, params.lambda0(), params.beta, d.finite_difference.to_complex(), d.closed_form.to_complex());
    row.abs_res = d.residual.to_double();
    label_verdict(row, row.abs_res <= tol);
    res.rows.push_back(row);
    res.criteria.push_back({"differential identity n=" + std::to_string(n), row.abs_res <= tol, "residual " + fmt("%.3g", row.abs_res)});
    return res;
}

/// prod_{k<n} h_k = H_n for n <= N.
inline Result norm_product(int N, const WeightParams& params, unsigned bits) {
    Result res;
    const PrecisionCtx ctx(bits);
    const OPSystem s = build_op_system(params, N, ctx);
    BigComplex prod(1.0, ctx);
    double worst = -INFINITY;
    for (int k = 0; k < N; ++k) {
        prod *= s.h[k];
        worst = std::max(worst, (prod - s.H[k + 1]).log2_abs() - s.H[k + 1].log2_abs());
    }
    const double bound = 32.0 - bits;
    res.criteria.push_back({"prod h_k = H_n", worst <= bound, "max log2 rel err " + fmt("%.1f", worst)});
    return res;
}

// ---- Painleve / Fredholm ----

/// Nystrom determinant against exp(-F(t)) on a t grid.
inline Result tw_identity(const std::vector<double>& kappas, double t_min = -8, double t_max = 4, double step = 0.5, double gap_tol = 1e-8,
                          double ode_tol = 1e-12) {
    Result res;
    double worst = 0;
    for (double k : kappas) {
        const ASolution s = solve_as(k, t_min - 0.5, ode_tol);
        const int steps = static_cast<int>(std::floor((t_max - t_min) / step + 1e-9));
        for (int i = 0; i <= steps; ++i) {
            const double t = t_min + i * step;
            ReportRow r = make_row("tw-identity", 0, t, NAN, beta_from_kappa(k), airy_fredholm_det(k * k, t), std::exp(-s.F(t)));
            r.kappa = k;
            worst = std::max(worst, r.abs_res);
            label_verdict(r, r.abs_res <= gap_tol);
            res.rows.push_back(r);
        }
    }
    res.criteria.push_back({"Tracy-Widom identity", worst <= gap_tol, "max gap " + fmt("%.3g", worst)});
    return res;
}

/// PII residual invariant at tol and the small-kappa Airy linearization.
inline Result pii_checks(double tol = 1e-12) {
    Result res;
    double worst = 0;
    for (cplx k : {cplx(0.5, 0), cplx(0.3, 0.4), cplx(1.5, 0)}) {
        const ASolution s = solve_as(k, -20, tol);
        for (int i = 0; i < 200; ++i) {
            const double t = -20 + 30.0 * i / 199;
            bool near_pole = false;
            for (const auto& p : s.poles()) near_pole |= std::abs(t - p.a.real()) < 0.05;
            if (near_pole) continue;
            worst = std::max(worst, s.pii_residual(t) / (tol * (1 + std::pow(std::abs(s.u(t)), 3))));
        }
    }
    res.criteria.push_back({"PII residual / (tol (1 + |u|^3)) < 1e3", worst < 1e3, "worst ratio " + fmt("%.3g", worst)});

    const double k = 1e-6;
    const ASolution s = solve_as(k, -10, 1e-13, {.t_max = 5});
    double rel = 0;
    for (double t = -10; t <= 5 + 1e-9; t += 0.05) {
        const auto [ai, aip] = airy(t);
        const double env = std::sqrt(ai * ai + aip * aip / std::max(1.0, std::abs(t)));
        rel = std::max(rel, std::abs(s.u(t) / k - ai) / env);
    }
    res.criteria.push_back({"kappa = 1e-6 follows Ai on [-10, 5]", rel <= 1e-10, "max rel err " + fmt("%.3g", rel)});
    return res;
}

/// y = u^2 against the singular asymptote between consecutive poles near t_centre, and a pole round trip.
inline Result thm16(double gamma = 0.0, double t_centre = -12, double rel_tol = 0.05, double cos_min = 0.3, double trip_tol = 1e-6) {
    Result res;
    const double kappa = std::sqrt(1 + std::exp(2 * std::numbers::pi * gamma));
    const ASolution s = solve_as(kappa, t_centre - 3);
    std::vector<double> poles;
    for (const auto& p : s.poles()) poles.push_back(p.a.real());
    std::sort(poles.begin(), poles.end());
    if (poles.size() < 2) {
        res.criteria.push_back({"singular asymptote between poles", false, "fewer than two poles found"});
        return res;
    }
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < poles.size(); ++i)
        if (std::abs(0.5 * (poles[i] + poles[i + 1]) - t_centre) < std::abs(0.5 * (poles[best] + poles[best + 1]) - t_centre)) best = i;
    const double lo = poles[best], hi = poles[best + 1];
    double worst = 0;
    int checked = 0;
    for (int i = 1; i < 400; ++i) {
        const double t = lo + (hi - lo) * i / 400.0;
        if (std::abs(std::cos(singular_phase(t, gamma))) <= cos_min) continue;
        const double y = (s.u(t) * s.u(t)).real();
        const double asym = p34_singular_asymptote(t, gamma);
        ReportRow r = make_row("thm1.6/y", 0, t, NAN, s.beta, y, asym);
        r.kappa = kappa;
        worst = std::max(worst, r.rel_res);
        label_verdict(r, r.rel_res <= rel_tol);
        if (i % 20 == 0) res.rows.push_back(r);
        ++checked;
    }
    res.criteria.push_back({"singular asymptote between poles " + fmt("%.4f", lo) + ", " + fmt("%.4f", hi), checked > 0 && worst <= rel_tol,
                            "max rel err " + fmt("%.3g", worst) + " over " + std::to_string(checked) + " points"});

    const double a = hi;
    const double t_below = a - 0.3, t_above = a + 0.3;
    const PiiPath back = integrate_through_poles(s.at(t_below), t_below, t_above, 1e-12, 1e-12);
    double trip = INFINITY;
    if (back.status == OdeStatus::Completed) {
        const ASState re = back.state(t_above), orig = s.at(t_above);
        trip = std::max({std::abs(re.u - orig.u) / std::abs(orig.u), std::abs(re.up - orig.up) / std::abs(orig.up),
                         std::abs(std::exp(-re.F) - std::exp(-orig.F))});
    }
    res.criteria.push_back({"pole traversal round trip", trip <= trip_tol, "rel err " + fmt("%.3g", trip)});
    return res;
}

/// Off-cut kappa grid integrates without step underflow or poles; kappa = 1.5 records poles.
inline Result pole_free_scan(double t_min = -25) {
    Result res;
    int underflows = 0, poles = 0;
    for (double r : {0.3, 0.7, 0.95, 1.3})
        for (double th : {std::numbers::pi / 6, std::numbers::pi / 2, 5 * std::numbers::pi / 6}) {
            const ASolution s = solve_as(std::polar(r, th), t_min, 1e-12, {.t_max = 10});
            underflows += s.status() == OdeStatus::StepUnderflow;
            poles += static_cast<int>(s.poles().size());
        }
    const std::size_t control = solve_as(1.5, t_min).poles().size();
    res.criteria.push_back({"pole-free scan", underflows == 0 && poles == 0,
                            std::to_string(underflows) + " step underflows, " + std::to_string(poles) + " poles"});
    res.criteria.push_back({"kappa = 1.5 control has poles", control >= 1, std::to_string(control) + " poles"});
    return res;
}

// ---- large-n asymptotics ----

inline Result thm12(cplx beta, const std::vector<double>& ts, const std::vector<int>& ns, double final_max = 0.05) {
    Result res;
    const ASolution sol = sweep_solution(beta, *std::min_element(ts.begin(), ts.end()));
    for (double t : ts) {
        std::vector<ReportRow> rows;
        std::vector<double> errs;
        for (int n : ns) {
            rows.push_back(compare_thm12(edge_data(n, t, beta), sol));
            errs.push_back(rows.back().rel_res);
        }
        annotate_orders(rows);
        const bool ok = monotone_decrease(errs, final_max);
        for (auto& r : rows) label_verdict(r, ok);
        res.rows.insert(res.rows.end(), rows.begin(), rows.end());
        res.criteria.push_back({"edge Hankel ratio t=" + fmt("%g", t), ok, "|ratio - 1| = " + join(errs)});
    }
    return res;
}

inline Result noncrit(cplx beta, const std::vector<double>& lambdas, const std::vector<int>& ns) {
    Result res;
    for (double l : lambdas) {
        std::vector<ReportRow> rows;
        std::vector<double> errs;
        for (int n : ns) {
            rows.push_back(compare_noncrit(n, l, beta));
            errs.push_back(rows.back().rel_res);
        }
        annotate_orders(rows);
        const bool ok = monotone_decrease(errs, INFINITY);
        for (auto& r : rows) label_verdict(r, ok);
        res.rows.insert(res.rows.end(), rows.begin(), rows.end());
        res.criteria.push_back({"bulk Hankel ratio lambda=" + fmt("%g", l), ok, "rel err " + join(errs)});
    }
    return res;
}

/// R_n, Q_n bounded along the sweep, and the order of the corrected h_n reading (informational unless with_h).
inline Result thm14(cplx beta, const std::vector<double>& ts, const std::vector<int>& ns, bool with_h = true) {
    Result res;
    const ASolution sol = sweep_solution(beta, *std::min_element(ts.begin(), ts.end()));
    for (double t : ts) {
        std::vector<std::vector<ReportRow>> by_label(5);
        std::vector<double> gr, gq, gh;
        for (int n : ns) {
            const auto rows = compare_thm14(edge_data(n, t, beta), sol);
            for (std::size_t j = 0; j < rows.size(); ++j) by_label[j].push_back(rows[j]);
            gr.push_back(rows[0].abs_res);
            gq.push_back(rows[1].abs_res * std::sqrt(double(n)));
            gh.push_back(rows[4].abs_res);
        }
        const cplx u = sol.u(t);
        const double c0 = std::cbrt(double(ns.front())) * std::norm(u);
        const BoundedCheck br = bounded_check(gr, 0.02 * c0 / 2);
        const BoundedCheck bq = bounded_check(gq, 0.02 * c0 / std::numbers::sqrt2);
        for (auto& rows : by_label) {
            annotate_orders(rows);
            res.rows.insert(res.rows.end(), rows.begin(), rows.end());
        }
        res.criteria.push_back({"R_n gap bounded t=" + fmt("%g", t), br.pass,
                                "|R - R_rhs| = " + join(gr) + ", ratios " + join(br.ratios) + ", floor " + fmt("%.3g", br.floor)});
        res.criteria.push_back({"sqrt(n) Q_n gap bounded t=" + fmt("%g", t), bq.pass,
                                "sqrt(n)|Q - Q_rhs| = " + join(gq) + ", ratios " + join(bq.ratios) + ", floor " + fmt("%.3g", bq.floor)});
        if (with_h && ns.size() >= 2) {
            const double p = fitted_order(ns, gh);
            res.criteria.push_back({"h_n corrected expansion O(1/n) t=" + fmt("%g", t), std::abs(p - 1) <= 0.25,
                                    "fitted order " + fmt("%.3f", p)});
        }
    }
    return res;
}

inline Result thm15(cplx beta, double t, const std::vector<int>& ns, double target = 1.0 / 3, double band = 0.15) {
    Result res;
    const ASolution sol = sweep_solution(beta, t);
    std::vector<ReportRow> rows;
    std::vector<double> errs;
    for (int n : ns) {
        rows.push_back(compare_thm15(edge_data(n, t, beta), sol));
        errs.push_back(rows.back().rel_res);
    }
    annotate_orders(rows);
    const double p = fitted_order(ns, errs);
    const bool ok = std::abs(p - target) <= band;
    for (auto& r : rows) label_verdict(r, ok);
    res.rows = rows;
    res.criteria.push_back({"p_n(lambda0) error order t=" + fmt("%g", t), ok, "rel err " + join(errs) + ", fitted order " + fmt("%.3f", p)});
    return res;
}

/// Large-gap residual shrinks from the least to the most negative t and ends below res_max.
inline Result conj13(cplx beta, const std::vector<double>& ts, double res_max = 0.05) {
    Result res;
    std::vector<double> sorted = ts;
    std::sort(sorted.begin(), sorted.end());
    for (double t : sorted) res.rows.push_back(compare_conj13(t, beta));
    const double deep = res.rows.front().abs_res, shallow = res.rows.back().abs_res;
    const bool ok = deep < shallow && deep <= res_max;
    for (auto& r : res.rows) label_verdict(r, ok);
    res.criteria.push_back({"large-gap residual t=" + fmt("%g", sorted.front()) + " vs " + fmt("%g", sorted.back()), ok,
                            fmt("%.3g", deep) + " < " + fmt("%.3g", shallow)});
    // the remainder oscillates; its envelope over one period is the smoother quantity
    const cplx k2 = kappa_from_beta(beta) * kappa_from_beta(beta);
    auto envelope = [&](double t) {
        double m = 0;
        for (int i = -12; i <= 12; ++i) m = std::max(m, conj13_residual(t + 0.05 * i, beta, airy_fredholm_det(k2, t + 0.05 * i)));
        return m;
    };
    const double e_deep = envelope(sorted.front()), e_shallow = envelope(sorted.back());
    res.criteria.push_back({"large-gap residual envelope (window +-0.6)", e_deep < e_shallow && e_deep <= res_max,
                            fmt("%.3g", e_deep) + " < " + fmt("%.3g", e_shallow)});
    return res;
}

// ---- Monte Carlo ----

inline Result mc_gap(int n, double lambda0, long trials, std::uint64_t seed) {
    Result res;
    const CountHistogram h = count_histogram(n, lambda0, trials, seed);
    const McEstimate p = bernoulli_estimate(h.freq[0], h.trials);
    const double oracle = finite_n_det(n, lambda0, 1.0).real();
    ReportRow r = make_row("mc/gue-gap", n, NAN, lambda0, 0.0, p.mean, oracle);
    const bool ok = r.abs_res <= 3 * p.stderr_;
    label_verdict(r, ok);
    res.rows.push_back(r);
    res.criteria.push_back({"GUE gap probability n=" + std::to_string(n), ok,
                            fmt("%.5f", p.mean) + " +- " + fmt("%.5f", p.stderr_) + " vs " + fmt("%.5f", oracle)});
    return res;
}

inline Result mc_thinning(int n, double lambda0, double s, long trials, std::uint64_t seed) {
    Result res;
    const ThinningStats st = thinning_experiment(n, lambda0, s, trials, seed);
    const McEstimate p = st.probability();
    const double oracle = finite_n_det(n, lambda0, 1 - s).real();
    ReportRow r = make_row("mc/gue-thinned", n, NAN, lambda0, beta_from_kappa(std::sqrt(1 - s)), p.mean, oracle);
    r.kappa = std::sqrt(1 - s);
    const bool ok = r.abs_res <= 3 * p.stderr_;
    label_verdict(r, ok);
    res.rows.push_back(r);
    res.criteria.push_back({"thinned GUE n=" + std::to_string(n) + " s=" + fmt("%g", s), ok,
                            fmt("%.5f", p.mean) + " +- " + fmt("%.5f", p.stderr_) + " vs " + fmt("%.5f", oracle)});
    res.criteria.push_back({"thinning same-path identity", st.same_path_breaks == 0, std::to_string(st.same_path_breaks) + " breaks"});
    return res;
}

inline Result mc_plancherel(int N, double s, const std::vector<double>& ts, long trials, std::uint64_t seed, double band = 0.03) {
    Result res;
    const auto cdf = plancherel_thinned_cdf(N, s, ts, trials, seed);
    for (std::size_t j = 0; j < ts.size(); ++j) {
        const double det = airy_fredholm_det(1 - s, ts[j]).real();
        ReportRow r = make_row("mc/plancherel", N, ts[j], NAN, beta_from_kappa(std::sqrt(1 - s)), cdf[j].mean, det);
        r.kappa = std::sqrt(1 - s);
        const bool ok = r.abs_res <= band + 3 * cdf[j].stderr_;
        label_verdict(r, ok);
        res.rows.push_back(r);
        res.criteria.push_back({"Plancherel thinned max N=" + std::to_string(N) + " t=" + fmt("%g", ts[j]), ok,
                                fmt("%.4f", cdf[j].mean) + " +- " + fmt("%.4f", cdf[j].stderr_) + " vs " + fmt("%.4f", det) +
                                    " (band " + fmt("%g", band) + " + 3 sigma)"});
    }
    return res;
}

}  // namespace edgejump::verify
