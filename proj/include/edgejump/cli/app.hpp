#pragma once

// Command-line driver: hankel / painleve / fredholm dumps, verify <target>, mc gue|plancherel.

#include "edgejump/cli/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace edgejump::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;
    std::string target;
    std::optional<double> beta_re, beta_im, kappa_re, kappa_im;
    std::vector<int> ns;
    std::vector<double> ts;
    std::vector<double> lambda0s;
    double t_min = -8, t_max = 4, t_step = 0.5;
    unsigned bits = 0;
    double tol = 1e-12;
    int nodes = 0;
    long trials = 100000;
    std::uint64_t seed = 1;
    double s = 0.5;
    double delta = 1e-6;
    std::string output, format = "csv", series, summary;
    bool no_timestamp = false;

    bool has_beta() const { return beta_re || beta_im; }
    bool has_kappa() const { return kappa_re || kappa_im; }
    cplx beta() const {
        if (has_kappa()) return beta_from_kappa(kappa());
        return {beta_re.value_or(0), beta_im.value_or(0)};
    }
    cplx kappa() const {
        if (has_beta()) return kappa_from_beta(beta());
        return {kappa_re.value_or(0), kappa_im.value_or(0)};
    }
};

inline void from_json(const nlohmann::json& j, RunConfig& c) {
    auto opt = [&](const char* k, std::optional<double>& v) {
        if (j.contains(k)) v = j.at(k).get<double>();
    };
    auto get = [&](const char* k, auto& v) {
        if (j.contains(k)) j.at(k).get_to(v);
    };
    opt("beta", c.beta_re);
    opt("beta_im", c.beta_im);
    opt("kappa", c.kappa_re);
    opt("kappa_im", c.kappa_im);
    if (j.contains("n")) c.ns = j.at("n").is_array() ? j.at("n").get<std::vector<int>>() : std::vector<int>{j.at("n").get<int>()};
    if (j.contains("t")) c.ts = j.at("t").is_array() ? j.at("t").get<std::vector<double>>() : std::vector<double>{j.at("t").get<double>()};
    if (j.contains("lambda0"))
        c.lambda0s = j.at("lambda0").is_array() ? j.at("lambda0").get<std::vector<double>>() : std::vector<double>{j.at("lambda0").get<double>()};
    get("t_min", c.t_min);
    get("t_max", c.t_max);
    get("t_step", c.t_step);
    get("bits", c.bits);
    get("tol", c.tol);
    get("nodes", c.nodes);
    get("trials", c.trials);
    get("seed", c.seed);
    get("s", c.s);
    get("delta", c.delta);
    get("output", c.output);
    get("format", c.format);
    get("series", c.series);
    get("summary", c.summary);
    get("no_timestamp", c.no_timestamp);
}

inline void validate(const RunConfig& c, bool needs_param) {
    if (c.has_beta() && c.has_kappa()) throw ConfigError("give either beta or kappa, not both");
    if (needs_param && !c.has_beta() && !c.has_kappa()) throw ConfigError("one of --beta/--beta-im or --kappa/--kappa-im is required");
    if (c.has_beta() && std::abs(c.beta().real()) > 0.5) throw ConfigError("|Re beta| must be <= 1/2");
    for (std::size_t i = 1; i < c.ns.size(); ++i)
        if (c.ns[i] <= c.ns[i - 1]) throw ConfigError("n-list must be strictly increasing");
    for (int n : c.ns)
        if (n < 1) throw ConfigError("n must be positive");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
    if (!(c.s >= 0 && c.s <= 1)) throw ConfigError("s must lie in [0, 1]");
    if (c.trials < 1) throw ConfigError("trials must be positive");
    if (!(c.tol > 0)) throw ConfigError("tol must be positive");
    if (!(c.t_step > 0) || !(c.t_max >= c.t_min)) throw ConfigError("need t_step > 0 and t_max >= t_min");
}

// ---- serialization ----

inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream o;
    o << std::setprecision(17) << x;
    return o.str();
}

inline const char* csv_header =
    "label,n,t,lambda0,beta_re,beta_im,kappa_re,kappa_im,finite_re,finite_im,asym_re,asym_im,abs_res,rel_res,order_est,verdict";

inline void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    os << csv_header << '\n';
    for (const ReportRow& r : rows) {
        os << r.label << ',' << r.n << ',' << num(r.t) << ',' << num(r.lambda0) << ',' << num(r.beta.real()) << ',' << num(r.beta.imag())
           << ',' << num(r.kappa.real()) << ',' << num(r.kappa.imag()) << ',' << num(r.finite.real()) << ',' << num(r.finite.imag()) << ','
           << num(r.asym.real()) << ',' << num(r.asym.imag()) << ',' << num(r.abs_res) << ',' << num(r.rel_res) << ','
           << (r.order_est ? num(*r.order_est) : "") << ',' << r.verdict << '\n';
    }
}

inline nlohmann::json jnum(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const std::vector<ReportRow>& rows) {
    nlohmann::json a = nlohmann::json::array();
    for (const ReportRow& r : rows) {
        a.push_back({{"label", r.label},
                     {"n", r.n},
                     {"t", jnum(r.t)},
                     {"lambda0", jnum(r.lambda0)},
                     {"beta_re", jnum(r.beta.real())},
                     {"beta_im", jnum(r.beta.imag())},
                     {"kappa_re", jnum(r.kappa.real())},
                     {"kappa_im", jnum(r.kappa.imag())},
                     {"finite_re", jnum(r.finite.real())},
                     {"finite_im", jnum(r.finite.imag())},
                     {"asym_re", jnum(r.asym.real())},
                     {"asym_im", jnum(r.asym.imag())},
                     {"abs_res", jnum(r.abs_res)},
                     {"rel_res", jnum(r.rel_res)},
                     {"order_est", r.order_est ? jnum(*r.order_est) : nlohmann::json(nullptr)},
                     {"verdict", r.verdict}});
    }
    return a;
}

inline nlohmann::json summary_json(const std::string& command, const verify::Result& res) {
    nlohmann::json crit = nlohmann::json::array();
    for (const auto& c : res.criteria) crit.push_back({{"name", c.name}, {"verdict", c.pass ? "PASS" : "FAIL"}, {"detail", c.detail}});
    return {{"command", command}, {"verdict", res.pass() ? "PASS" : "FAIL"}, {"rows", res.rows.size()}, {"criteria", crit}};
}

inline std::string timestamp_line() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream o;
    o << "# generated " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    return o.str();
}

struct Series {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;
};

inline void write_series(const std::string& path, const Series& s) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open series file " + path);
    for (std::size_t i = 0; i < s.columns.size(); ++i) f << (i ? "," : "") << s.columns[i];
    f << '\n';
    for (const auto& row : s.data) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << num(row[i]);
        f << '\n';
    }
}

// ---- commands ----

inline std::vector<double> t_grid(const RunConfig& c) {
    if (!c.ts.empty()) return c.ts;
    std::vector<double> g;
    const int steps = static_cast<int>(std::floor((c.t_max - c.t_min) / c.t_step + 1e-9));
    for (int i = 0; i <= steps; ++i) g.push_back(c.t_min + i * c.t_step);
    return g;
}

template <class T>
std::vector<T> sorted(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline WeightParams weight_of(const RunConfig& c, int n) {
    if (!c.lambda0s.empty()) return WeightParams::direct(c.beta(), c.lambda0s.front());
    if (!c.ts.empty()) return WeightParams::edge(c.beta(), n, c.ts.front());
    return WeightParams::direct(c.beta(), 0.0);
}

inline verify::Result run_hankel(const RunConfig& c) {
    if (c.ns.size() != 1) throw ConfigError("hankel takes a single --n");
    const int N = c.ns.front();
    const PrecisionCtx ctx = c.bits ? PrecisionCtx(c.bits) : PrecisionCtx::for_hankel(N);
    const WeightParams w = weight_of(c, N);
    const OPSystem s = build_op_system(w, N, ctx);
    const double l0 = s.lambda0.to_double();
    const double t = w.is_edge() ? w.t : NAN;
    verify::Result res;
    // the pure Gaussian counterpart goes in the asym columns
    for (int k = 0; k <= N; ++k) {
        const double hk0 = std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(k + 1.0) - k * std::numbers::ln2);
        const double Hk0 = std::exp(log_gaussian_hankel(k));
        for (auto [label, val, ref] : {std::tuple{"hankel/H", s.H[k].to_complex(), Hk0}, std::tuple{"hankel/h", s.h[k].to_complex(), hk0},
                                       std::tuple{"hankel/R", s.R[k].to_complex(), k / 2.0}, std::tuple{"hankel/Q", s.Q[k].to_complex(), 0.0}}) {
            ReportRow r = make_row(label, k, t, l0, c.beta(), val, ref);
            r.verdict = "INFO";
            res.rows.push_back(r);
        }
    }
    return res;
}

inline verify::Result run_painleve(const RunConfig& c, Series& series) {
    const cplx k = c.kappa();
    const ASolution sol = solve_as(k, c.t_min, c.tol, {.t_max = std::max(c.t_max, 4.0)});
    verify::Result res;
    series.columns = {"t", "u_re", "u_im", "up_re", "up_im", "F_re", "F_im"};
    for (double t : sorted(t_grid(c))) {
        ASState st;
        try {
            st = sol.at(t);
        } catch (const TooCloseToPole&) {
            continue;
        }
        ReportRow r = make_row("painleve/u", 0, t, NAN, sol.beta, st.u, k * airy(t).first);
        r.kappa = k;
        r.verdict = "INFO";
        res.rows.push_back(r);
        series.data.push_back({t, st.u.real(), st.u.imag(), st.up.real(), st.up.imag(), st.F.real(), st.F.imag()});
    }
    for (const auto& p : sol.poles()) {
        ReportRow r = make_row("painleve/pole", 0, p.a.real(), NAN, sol.beta, p.eps, p.eps);
        r.kappa = k;
        r.abs_res = p.fit_residual;
        r.rel_res = p.fit_residual;
        r.verdict = "INFO";
        res.rows.push_back(r);
    }
    res.criteria.push_back({"integration completed", sol.status() == OdeStatus::Completed, std::to_string(sol.poles().size()) + " poles"});
    return res;
}

inline verify::Result run_fredholm(const RunConfig& c, Series& series) {
    const cplx k = c.kappa();
    NystromConfig cfg;
    if (c.nodes) cfg.m = c.nodes;
    const ASolution sol = solve_as(k, std::min(c.t_min, 0.0) - 0.5, c.tol);
    verify::Result res;
    series.columns = {"t", "logdet_re", "logdet_im"};
    for (double t : sorted(t_grid(c))) {
        const cplx d = airy_fredholm_det(k * k, t, cfg);
        ReportRow r = make_row("fredholm/det", 0, t, NAN, sol.beta, d, std::exp(-sol.F(t)));
        r.kappa = k;
        r.verdict = "INFO";
        res.rows.push_back(r);
        const cplx ld = std::log(d);
        series.data.push_back({t, ld.real(), ld.imag()});
    }
    return res;
}

inline std::vector<int> ns_or(const RunConfig& c, std::vector<int> def) { return c.ns.empty() ? def : c.ns; }
inline std::vector<double> ts_or(const RunConfig& c, std::vector<double> def) { return sorted(c.ts.empty() ? def : c.ts); }

inline verify::Result run_verify(const RunConfig& c, Series& series) {
    const std::string& g = c.target;
    if (g == "thm1.2") return verify::thm12(c.beta(), ts_or(c, {0, 2}), ns_or(c, {20, 40, 80}));
    if (g == "thm1.4") return verify::thm14(c.beta(), ts_or(c, {-2, 0, 2}), ns_or(c, {64, 128, 256}));
    if (g == "thm1.5") {
        verify::Result r;
        for (double t : ts_or(c, {0.5})) r.absorb(verify::thm15(c.beta(), t, ns_or(c, {64, 128, 256})));
        return r;
    }
    if (g == "noncrit") return verify::noncrit(c.beta(), sorted(c.lambda0s.empty() ? std::vector<double>{0.0, 0.5} : c.lambda0s), ns_or(c, {20, 40, 80}));
    if (g == "conj1.3") return verify::conj13(c.beta(), ts_or(c, {-10, -15, -25}));
    if (g == "tw-identity") {
        const cplx k = c.kappa();
        if (k.imag() != 0 || !(k.real() >= 0 && k.real() < 1)) throw ConfigError("tw-identity needs real kappa in [0, 1)");
        verify::Result r = verify::tw_identity({k.real()}, c.t_min, c.t_max, c.t_step, 1e-8, c.tol);
        series.columns = {"t", "det", "exp_minus_F"};
        for (const auto& row : r.rows) series.data.push_back({row.t, row.finite.real(), row.asym.real()});
        return r;
    }
    if (g == "finite-n-identity") {
        const auto ns = ns_or(c, {4, 10, 20});
        return verify::finite_n_identity(verify::identity_grid(ns, {c.beta()}, sorted(c.lambda0s), c.lambda0s.empty()), 1e-18, c.bits);
    }
    if (g == "diff-identity") {
        const int n = ns_or(c, {6}).front();
        return verify::diff_identity_check(n, weight_of(c, n), c.bits ? c.bits : 256, c.delta, 1e-9);
    }
    if (g == "qn-identity") {
        verify::Result r;
        for (int n : ns_or(c, {8})) {
            const WeightParams w = weight_of(c, n);
            const unsigned bits = c.bits ? c.bits : (w.is_edge() ? PrecisionCtx::for_hankel(n + 2).bits : 256u);
            r.absorb(verify::qn_identity(n, w, bits, w.is_edge() ? 48 : 32));
        }
        return r;
    }
    if (g == "thm1.6") {
        const cplx k = c.kappa();
        if (k.imag() != 0 || !(k.real() > 1)) throw ConfigError("thm1.6 needs real kappa > 1");
        const double gamma = std::log(k.real() * k.real() - 1) / (2 * std::numbers::pi);
        return verify::thm16(gamma, c.ts.empty() ? -12.0 : c.ts.front());
    }
    throw ConfigError("unknown verify target '" + g + "'");
}

inline verify::Result run_mc(const RunConfig& c) {
    if (c.target == "gue") {
        const int n = ns_or(c, {8}).front();
        const double l0 = c.lambda0s.empty() ? (c.ts.empty() ? std::sqrt(2.0 * n) : WeightParams::edge(0.0, n, c.ts.front()).lambda0())
                                             : c.lambda0s.front();
        return c.s == 1.0 ? verify::mc_gap(n, l0, c.trials, c.seed) : verify::mc_thinning(n, l0, c.s, c.trials, c.seed);
    }
    if (c.target == "plancherel") return verify::mc_plancherel(ns_or(c, {10000}).front(), c.s, ts_or(c, {-2, 0, 1}), c.trials, c.seed);
    throw ConfigError("unknown mc target '" + c.target + "'");
}

/// Pulls --config PATH out of argv so the file can seed the config before flags are parsed.
inline std::optional<std::string> find_config(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return std::nullopt;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig c;
    try {
        if (auto path = find_config(argc, argv)) {
            std::ifstream f(*path);
            if (!f) throw ConfigError("cannot read config " + *path);
            nlohmann::json::parse(f).get_to(c);
        }
    } catch (const std::exception& e) {
        err << "edgejump: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"edge-jump lab: discontinuous Gaussian Hankel determinants, Ablowitz-Segur PII, Airy Fredholm determinants"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override it");

    auto common = [&](CLI::App* s) {
        s->add_option("--config", config_path, "JSON config file; flags override it");
        s->add_option("--beta", c.beta_re, "Re beta");
        s->add_option("--beta-im", c.beta_im, "Im beta");
        s->add_option("--kappa", c.kappa_re, "Re kappa");
        s->add_option("--kappa-im", c.kappa_im, "Im kappa");
        s->add_option("--n", c.ns, "n, or a strictly increasing list")->delimiter(',');
        s->add_option("--t", c.ts, "edge parameter t (list for sweeps)")->delimiter(',');
        s->add_option("--lambda0", c.lambda0s, "jump location (list for sweeps)")->delimiter(',');
        s->add_option("--t-min", c.t_min);
        s->add_option("--t-max", c.t_max);
        s->add_option("--t-step", c.t_step);
        s->add_option("--bits", c.bits, "working precision; 0 picks one from n");
        s->add_option("--tol", c.tol, "ODE tolerance");
        s->add_option("--nodes", c.nodes, "starting Nystrom node count");
        s->add_option("--trials", c.trials);
        s->add_option("--seed", c.seed);
        s->add_option("--s", c.s, "thinning probability");
        s->add_option("--delta", c.delta, "finite-difference step");
        s->add_option("--output,-o", c.output, "report path (stdout if empty)");
        s->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--series", c.series, "plot-data CSV path");
        s->add_option("--summary", c.summary, "summary JSON path");
        s->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp header line");
    };
    for (auto [name, desc] : {std::pair{"hankel", "moments, Hankel determinants and recurrence coefficients"},
                              std::pair{"painleve", "Ablowitz-Segur solution on a t grid"},
                              std::pair{"fredholm", "deformed Airy determinant on a t grid"}})
        common(app.add_subcommand(name, desc));
    CLI::App* ver = app.add_subcommand("verify", "check one identity or asymptotic statement");
    ver->add_option("target", c.target)
        ->required()
        ->check(CLI::IsMember({"thm1.2", "thm1.4", "thm1.5", "noncrit", "conj1.3", "tw-identity", "finite-n-identity", "diff-identity",
                               "qn-identity", "thm1.6"}));
    common(ver);
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo cross-checks");
    mc->add_option("target", c.target)->required()->check(CLI::IsMember({"gue", "plancherel"}));
    common(mc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    const std::string command = c.subcommand + (c.target.empty() ? "" : " " + c.target);

    verify::Result res;
    Series series;
    try {
        const bool needs_param = c.subcommand != "mc";
        validate(c, needs_param);
        if (c.subcommand == "hankel") res = run_hankel(c);
        else if (c.subcommand == "painleve") res = run_painleve(c, series);
        else if (c.subcommand == "fredholm") res = run_fredholm(c, series);
        else if (c.subcommand == "verify") res = run_verify(c, series);
        else res = run_mc(c);
    } catch (const ConfigError& e) {
        err << "edgejump: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "edgejump: " << e.what() << '\n';
        return 2;
    }

    try {
        std::ofstream file;
        if (!c.output.empty()) {
            file.open(c.output);
            if (!file) throw ConfigError("cannot open output " + c.output);
        }
        std::ostream& os = c.output.empty() ? out : file;
        if (c.format == "json") {
            os << to_json(res.rows).dump(2) << '\n';
        } else {
            if (!c.no_timestamp) os << timestamp_line() << '\n';
            write_csv(os, res.rows);
        }
        if (!c.series.empty()) {
            if (series.columns.empty()) throw ConfigError("no series data for " + command);
            write_series(c.series, series);
        }
        const std::string summary_path = !c.summary.empty() ? c.summary : c.output.empty() ? "" : c.output + ".summary.json";
        if (!summary_path.empty()) {
            std::ofstream sf(summary_path);
            if (!sf) throw ConfigError("cannot open summary " + summary_path);
            sf << summary_json(command, res).dump(2) << '\n';
        }
    } catch (const ConfigError& e) {
        err << "edgejump: " << e.what() << '\n';
        return 2;
    }

    for (const auto& cr : res.criteria) err << (cr.pass ? "PASS " : "FAIL ") << cr.name << ": " << cr.detail << '\n';
    const bool any_fail = !res.pass() || std::any_of(res.rows.begin(), res.rows.end(), [](const ReportRow& r) { return r.verdict == "FAIL"; });
    return any_fail ? 1 : 0;
}

}  // namespace edgejump::cli
