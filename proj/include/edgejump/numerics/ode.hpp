#pragma once

// Dormand-Prince 8(5,3) with PI step control and 7th-order dense output.
// Templated on the real type so the same stepper runs in double and BigFloat.

#include "edgejump/numerics/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edgejump {

enum class OdeStatus { Completed, StepUnderflow, Stopped, MaxSteps };

inline std::string to_string(OdeStatus s) {
    switch (s) {
        case OdeStatus::Completed: return "completed";
        case OdeStatus::StepUnderflow: return "step-underflow";
        case OdeStatus::Stopped: return "stopped";
        case OdeStatus::MaxSteps: return "max-steps";
    }
    return "?";
}

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
    double h_init = 0.0;       // 0 selects automatically
    double h_max = 0.0;        // 0 means |t1 - t0|
    double h_min = 0.0;        // absolute floor; a relative floor of 16 ulp(t) always applies
    std::size_t max_steps = 2'000'000;
    double pi_beta = 0.04;     // PI controller memory exponent
};

namespace detail::dop853 {

// Tableau in decimal so BigFloat instantiations get the full ~30 digits.
struct Tableau {
    const char* c[17];
    const char* a[17][17];
    const char* b[13];
    const char* e3[4];  // err3 = (b - bhh)·k: indices 1, 9, 12 against b
    const char* e5[13];
    const char* d[4][17];
};

inline const Tableau& tableau() {
    static const Tableau t = [] {
        Tableau x{};
        for (auto& row : x.a)
            for (auto& v : row) v = "0";
        for (auto& v : x.c) v = "0";
        for (auto& v : x.b) v = "0";
        for (auto& v : x.e5) v = "0";
        for (auto& row : x.d)
            for (auto& v : row) v = "0";
        x.c[2] = "0.526001519587677318785587544488e-01";
        x.c[3] = "0.789002279381515978178381316732e-01";
        x.c[4] = "0.118350341907227396726757197510e+00";
        x.c[5] = "0.281649658092772603273242802490e+00";
        x.c[6] = "0.333333333333333333333333333333333333e+00";
        x.c[7] = "0.25";
        x.c[8] = "0.307692307692307692307692307692307692e+00";
        x.c[9] = "0.651282051282051282051282051282051282e+00";
        x.c[10] = "0.6";
        x.c[11] = "0.857142857142857142857142857142857143e+00";
        x.c[12] = "1";
        x.c[14] = "0.1";
        x.c[15] = "0.2";
        x.c[16] = "0.777777777777777777777777777777777778e+00";

        x.a[2][1] = "5.26001519587677318785587544488e-2";
        x.a[3][1] = "1.97250569845378994544595329183e-2";
        x.a[3][2] = "5.91751709536136983633785987549e-2";
        x.a[4][1] = "2.95875854768068491816892993775e-2";
        x.a[4][3] = "8.87627564304205475450678981324e-2";
        x.a[5][1] = "2.41365134159266685502369798665e-1";
        x.a[5][3] = "-8.84549479328286085344864962717e-1";
        x.a[5][4] = "9.24834003261792003115737966543e-1";
        x.a[6][1] = "3.70370370370370370370370370370370370e-2";
        x.a[6][4] = "1.70828608729473871279604482173e-1";
        x.a[6][5] = "1.25467687566822425016691814123e-1";
        x.a[7][1] = "3.7109375e-2";
        x.a[7][4] = "1.70252211019544039314978060272e-1";
        x.a[7][5] = "6.02165389804559606850219397283e-2";
        x.a[7][6] = "-1.7578125e-2";
        x.a[8][1] = "3.70920001185047927108779319836e-2";
        x.a[8][4] = "1.70383925712239993810214054705e-1";
        x.a[8][5] = "1.07262030446373284651809199168e-1";
        x.a[8][6] = "-1.53194377486244017527936158236e-2";
        x.a[8][7] = "8.27378916381402288758473766002e-3";
        x.a[9][1] = "6.24110958716075717114429577812e-1";
        x.a[9][4] = "-3.36089262944694129406857109825e0";
        x.a[9][5] = "-8.68219346841726006818189891453e-1";
        x.a[9][6] = "2.75920996994467083049415600797e1";
        x.a[9][7] = "2.01540675504778934086186788979e1";
        x.a[9][8] = "-4.34898841810699588477366255144e1";
        x.a[10][1] = "4.77662536438264365890433908527e-1";
        x.a[10][4] = "-2.48811461997166764192642586468e0";
        x.a[10][5] = "-5.90290826836842996371446475743e-1";
        x.a[10][6] = "2.12300514481811942347288949897e1";
        x.a[10][7] = "1.52792336328824235832596922938e1";
        x.a[10][8] = "-3.32882109689848629194453265587e1";
        x.a[10][9] = "-2.03312017085086261358222928593e-2";
        x.a[11][1] = "-9.3714243008598732571704021658e-1";
        x.a[11][4] = "5.18637242884406370830023853209e0";
        x.a[11][5] = "1.09143734899672957818500254654e0";
        x.a[11][6] = "-8.14978701074692612513997267357e0";
        x.a[11][7] = "-1.85200656599969598641566180701e1";
        x.a[11][8] = "2.27394870993505042818970056734e1";
        x.a[11][9] = "2.49360555267965238987089396762e0";
        x.a[11][10] = "-3.0467644718982195003823669022e0";
        x.a[12][1] = "2.27331014751653820792359768449e0";
        x.a[12][4] = "-1.05344954667372501984066689879e1";
        x.a[12][5] = "-2.00087205822486249909675718444e0";
        x.a[12][6] = "-1.79589318631187989172765950534e1";
        x.a[12][7] = "2.79488845294199600508499808837e1";
        x.a[12][8] = "-2.85899827713502369474065508674e0";
        x.a[12][9] = "-8.87285693353062954433549289258e0";
        x.a[12][10] = "1.23605671757943030647266201528e1";
        x.a[12][11] = "6.43392746015763530355970484046e-1";

        // Extra stages for dense output; stage 13 is f(t+h, y_new).
        x.a[14][1] = "5.61675022830479523392909219681e-2";
        x.a[14][7] = "2.53500210216624811088794765333e-1";
        x.a[14][8] = "-2.46239037470802489917441475441e-1";
        x.a[14][9] = "-1.24191423263816360469010140626e-1";
        x.a[14][10] = "1.5329179827876569731206322685e-1";
        x.a[14][11] = "8.20105229563468988491666602057e-3";
        x.a[14][12] = "7.56789766054569976138603589584e-3";
        x.a[14][13] = "-8.298e-3";
        x.a[15][1] = "3.18346481635021405060768473261e-2";
        x.a[15][6] = "2.83009096723667755288322961402e-2";
        x.a[15][7] = "5.35419883074385676223797384372e-2";
        x.a[15][8] = "-5.49237485713909884646569340306e-2";
        x.a[15][11] = "-1.08347328697249322858509316994e-4";
        x.a[15][12] = "3.82571090835658412954920192323e-4";
        x.a[15][13] = "-3.40465008687404560802977114492e-4";
        x.a[15][14] = "1.41312443674632500278074618366e-1";
        x.a[16][1] = "-4.28896301583791923408573538692e-1";
        x.a[16][6] = "-4.69762141536116384314449447206e0";
        x.a[16][7] = "7.68342119606259904184240953878e0";
        x.a[16][8] = "4.06898981839711007970213554331e0";
        x.a[16][9] = "3.56727187455281109270669543021e-1";
        x.a[16][13] = "-1.39902416515901462129418009734e-3";
        x.a[16][14] = "2.9475147891527723389556272149e0";
        x.a[16][15] = "-9.15095847217987001081870187138e0";

        x.b[1] = "5.42937341165687622380535766363e-2";
        x.b[6] = "4.45031289275240888144113950566e0";
        x.b[7] = "1.89151789931450038304281599044e0";
        x.b[8] = "-5.8012039600105847814672114227e0";
        x.b[9] = "3.1116436695781989440891606237e-1";
        x.b[10] = "-1.52160949662516078556178806805e-1";
        x.b[11] = "2.01365400804030348374776537501e-1";
        x.b[12] = "4.47106157277725905176885569043e-2";

        x.e3[1] = "0.244094488188976377952755905512e+00";
        x.e3[2] = "0.733846688281611857341361741547e+00";
        x.e3[3] = "0.220588235294117647058823529412e-01";

        x.e5[1] = "0.1312004499419488073250102996e-01";
        x.e5[6] = "-0.1225156446376204440720569753e+01";
        x.e5[7] = "-0.4957589496572501915214079952e+00";
        x.e5[8] = "0.1664377182454986536961530415e+01";
        x.e5[9] = "-0.3503288487499736816886487290e+00";
        x.e5[10] = "0.3341791187130174790297318841e+00";
        x.e5[11] = "0.8192320648511571246570742613e-01";
        x.e5[12] = "-0.2235530786388629525884427845e-01";

        const char* d4[17] = {"0", "-0.84289382761090128651353491142e+01", "0", "0", "0", "0",
                              "0.56671495351937776962531783590e+00", "-0.30689499459498916912797304727e+01",
                              "0.23846676565120698287728149680e+01", "0.21170345824450282767155149946e+01",
                              "-0.87139158377797299206789907490e+00", "0.22404374302607882758541771650e+01",
                              "0.63157877876946881815570249290e+00", "-0.88990336451333310820698117400e-01",
                              "0.18148505520854727256656404962e+02", "-0.91946323924783554000451984436e+01",
                              "-0.44360363875948939664310572000e+01"};
        const char* d5[17] = {"0", "0.10427508642579134603413151009e+02", "0", "0", "0", "0",
                              "0.24228349177525818288430175319e+03", "0.16520045171727028198505394887e+03",
                              "-0.37454675472269020279518312152e+03", "-0.22113666853125306036270938578e+02",
                              "0.77334326684722638389603898808e+01", "-0.30674084731089398182061213626e+02",
                              "-0.93321305264302278729567221706e+01", "0.15697238121770843886131091075e+02",
                              "-0.31139403219565177677282850411e+02", "-0.93529243588444783865713862664e+01",
                              "0.35816841486394083752465898540e+02"};
        const char* d6[17] = {"0", "0.19985053242002433820987653617e+02", "0", "0", "0", "0",
                              "-0.38703730874935176555105901742e+03", "-0.18917813819516756882830838328e+03",
                              "0.52780815920542364900561016686e+03", "-0.11573902539959630126141871134e+02",
                              "0.68812326946963000169666922661e+01", "-0.10006050966910838403183860980e+01",
                              "0.77771377980534432092869265740e+00", "-0.27782057523535084065932004339e+01",
                              "-0.60196695231264120758267380846e+02", "0.84320405506677161018159903784e+02",
                              "0.11992291136182789328035130030e+02"};
        const char* d7[17] = {"0", "-0.25693933462703749003312586129e+02", "0", "0", "0", "0",
                              "-0.15418974869023643374053993627e+03", "-0.23152937917604549567536039109e+03",
                              "0.35763911791061412378285349910e+03", "0.93405324183624310003907691704e+02",
                              "-0.37458323136451633156875139351e+02", "0.10409964950896230045147246184e+03",
                              "0.29840293426660503123344363579e+02", "-0.43533456590011143754432175058e+02",
                              "0.96324553959188282948394950600e+02", "-0.39177261675615439165231486172e+02",
                              "-0.14972683625798562581422125276e+03"};
        for (int i = 0; i < 17; ++i) {
            x.d[0][i] = d4[i];
            x.d[1][i] = d5[i];
            x.d[2][i] = d6[i];
            x.d[3][i] = d7[i];
        }
        return x;
    }();
    return t;
}

template <class Real>
Real num(const char* s, const Real& like) {
    if constexpr (std::is_same_v<Real, double>) {
        (void)like;
        return std::strtod(s, nullptr);
    } else {
        return scalar_traits<Real>::from_decimal(s, like);
    }
}

/// Tableau converted to the working type once per solve.
template <class Real>
struct Coeffs {
    std::array<Real, 17> c;
    std::array<std::array<Real, 17>, 17> a;
    std::array<Real, 13> b;
    std::array<Real, 4> e3;
    std::array<Real, 13> e5;
    std::array<std::array<Real, 17>, 4> d;
    std::vector<std::vector<int>> nz;  // nonzero a-entries per stage

    explicit Coeffs(const Real& like)
        : c(fill<17>(like)), a(fill2(like)), b(fill<13>(like)), e3(fill<4>(like)), e5(fill<13>(like)),
          d{fill<17>(like), fill<17>(like), fill<17>(like), fill<17>(like)}, nz(17) {
        const Tableau& t = tableau();
        for (int i = 0; i < 17; ++i) c[i] = num(t.c[i], like);
        for (int i = 0; i < 17; ++i)
            for (int j = 0; j < 17; ++j) {
                a[i][j] = num(t.a[i][j], like);
                if (std::string(t.a[i][j]) != "0") nz[i].push_back(j);
            }
        for (int i = 0; i < 13; ++i) b[i] = num(t.b[i], like);
        for (int i = 1; i < 4; ++i) e3[i] = num(t.e3[i], like);
        for (int i = 0; i < 13; ++i) e5[i] = num(t.e5[i], like);
        for (int r = 0; r < 4; ++r)
            for (int i = 0; i < 17; ++i) d[r][i] = num(t.d[r][i], like);
    }

private:
    template <std::size_t N>
    static std::array<Real, N> fill(const Real& like) {
        return [&]<std::size_t... I>(std::index_sequence<I...>) {
            return std::array<Real, N>{((void)I, make_like(0.0, like))...};
        }(std::make_index_sequence<N>{});
    }
    static std::array<std::array<Real, 17>, 17> fill2(const Real& like) {
        return [&]<std::size_t... I>(std::index_sequence<I...>) {
            return std::array<std::array<Real, 17>, 17>{((void)I, fill<17>(like))...};
        }(std::make_index_sequence<17>{});
    }
};

}  // namespace detail::dop853

/// One accepted step with its dense-output polynomial.
template <class Real>
struct DenseSegment {
    Real t_old;
    Real h;
    std::vector<std::array<Real, 8>> r;  // per component

    Real eval(std::size_t i, const Real& t) const {
        const Real s = (t - t_old) / h;
        const Real s1 = 1.0 - s;
        const auto& c = r[i];
        Real conpar = c[4] + s * (c[5] + s1 * (c[6] + s * c[7]));
        return c[0] + s * (c[1] + s1 * (c[2] + s * (c[3] + s1 * conpar)));
    }

    /// d/dt of the interpolant for component i.
    Real deriv(std::size_t i, const Real& t) const {
        const Real s = (t - t_old) / h;
        const Real s1 = 1.0 - s;
        const auto& c = r[i];
        Real A = c[6] + s * c[7], dA = c[7];
        Real B = c[5] + s1 * A, dB = s1 * dA - A;
        Real C = c[4] + s * B, dC = B + s * dB;
        Real D = c[3] + s1 * C, dD = s1 * dC - C;
        Real E = c[2] + s * D, dE = D + s * dD;
        Real G = c[1] + s1 * E, dG = s1 * dE - E;
        return (G + s * dG) / h;
    }
};

template <class Real>
struct Trajectory {
    std::vector<Real> t;                  // accepted mesh, t[0] = t0
    std::vector<std::vector<Real>> y;     // state at each mesh point
    std::vector<DenseSegment<Real>> seg;  // seg[k] covers [t[k], t[k+1]]
    OdeStatus status = OdeStatus::Completed;
    std::size_t rejected = 0;

    const Real& t_end() const { return t.back(); }
    const std::vector<Real>& y_end() const { return y.back(); }
    bool forward() const { return t.size() < 2 || t[1] > t[0]; }

    bool covers(const Real& x) const {
        const Real& lo = forward() ? t.front() : t.back();
        const Real& hi = forward() ? t.back() : t.front();
        return lo <= x && x <= hi;
    }

    /// Dense evaluation of component i at x inside the integrated range.
    Real operator()(std::size_t i, const Real& x) const {
        if (!covers(x)) throw std::out_of_range("Trajectory: evaluation point outside integrated range");
        if (seg.empty()) return y.front()[i];
        return seg[segment_index(x)].eval(i, x);
    }

    std::size_t segment_index(const Real& x) const {
        std::size_t lo = 0, hi = seg.size() - 1;
        const bool fw = forward();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            const Real& end = t[mid + 1];
            if (fw ? (x <= end) : (x >= end)) hi = mid;
            else lo = mid + 1;
        }
        return lo;
    }

    /// Time derivative of the dense interpolant for component i at x.
    Real derivative(std::size_t i, const Real& x) const {
        if (!covers(x)) throw std::out_of_range("Trajectory: evaluation point outside integrated range");
        if (seg.empty()) throw std::out_of_range("Trajectory: no steps taken");
        return seg[segment_index(x)].deriv(i, x);
    }

    std::vector<Real> state(const Real& x) const {
        std::vector<Real> out;
        out.reserve(y.front().size());
        for (std::size_t i = 0; i < y.front().size(); ++i) out.push_back((*this)(i, x));
        return out;
    }
};

template <class Real>
using VectorField = std::function<void(const Real&, const std::vector<Real>&, std::vector<Real>&)>;

template <class Real>
using StopPredicate = std::function<bool(const Real&, const std::vector<Real>&)>;

/// Integrates y' = f(t, y) from t0 to t1 (either direction). Local error per step is held
/// below atol + rtol*|y| componentwise in the RMS sense. When the step size falls below
/// the floor the partial trajectory is returned with status StepUnderflow and t_end() = t*.
/// A stop predicate, checked after every accepted step, ends integration with status Stopped.
template <class Real>
Trajectory<Real> adaptive_rk(const VectorField<Real>& f, std::vector<Real> y0, const Real& t0, const Real& t1,
                             const OdeOptions& opt = {}, const StopPredicate<Real>& stop = {}) {
    using std::abs;
    using std::sqrt;
    if (!(opt.rtol > 0.0 || opt.atol > 0.0)) throw std::invalid_argument("adaptive_rk: tolerance must be positive");
    const std::size_t n = y0.size();
    const Real zero = make_like(0.0, t0);
    const detail::dop853::Coeffs<Real> K(t0);

    Trajectory<Real> tr;
    tr.t.push_back(t0);
    tr.y.push_back(y0);
    if (n == 0 || t0 == t1) return tr;

    const double span = std::fabs(scalar_traits<Real>::to_double(t1 - t0));
    const double dir = scalar_traits<Real>::to_double(t1 - t0) > 0 ? 1.0 : -1.0;
    const double h_max = opt.h_max > 0 ? std::min(opt.h_max, span) : span;
    double unit_eps = std::numeric_limits<double>::epsilon();
    if constexpr (!std::is_same_v<Real, double>) unit_eps = std::ldexp(1.0, -static_cast<int>(t0.bits()));

    auto sc = [&](const Real& a, const Real& b) {
        double m = std::max(scalar_traits<Real>::to_double(abs(a)), scalar_traits<Real>::to_double(abs(b)));
        return opt.atol + opt.rtol * m;
    };

    std::vector<std::vector<Real>> k(17, std::vector<Real>(n, zero));
    std::vector<Real> y = std::move(y0), yt(n, zero), ynew(n, zero);
    Real t = t0;
    f(t, y, k[1]);

    double h;
    if (opt.h_init > 0) {
        h = opt.h_init;
    } else {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = sc(y[i], y[i]);
            d0 += std::pow(scalar_traits<Real>::to_double(y[i]) / s, 2);
            d1 += std::pow(scalar_traits<Real>::to_double(k[1][i]) / s, 2);
        }
        d0 = std::sqrt(d0 / n);
        d1 = std::sqrt(d1 / n);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h * 100.0, std::pow(0.01 / std::max(d1, 1e-15), 1.0 / 8.0));
    }
    h = std::min(h, h_max);

    const double safe = 0.9, fac1 = 1.0 / 3.0, fac2 = 6.0;
    const double expo1 = 1.0 / 8.0 - opt.pi_beta * 0.2;
    double facold = 1e-4;
    bool last_rejected = false;

    for (std::size_t step = 0;; ++step) {
        if (step >= opt.max_steps) {
            tr.status = OdeStatus::MaxSteps;
            return tr;
        }
        const double t_abs = std::fabs(scalar_traits<Real>::to_double(t));
        const double floor = std::max(opt.h_min, 16.0 * unit_eps * std::max(t_abs, 1.0));
        if (h < floor) {
            tr.status = OdeStatus::StepUnderflow;
            return tr;
        }
        const Real remaining = (t1 - t) * dir;
        bool final_step = false;
        Real hs = make_like(h * dir, t0);
        if (scalar_traits<Real>::to_double(remaining) <= h * (1.0 + 1e-12)) {
            hs = t1 - t;
            final_step = true;
        }

        for (int s = 2; s <= 12; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                Real acc = zero;
                for (int j : K.nz[s]) acc += K.a[s][j] * k[j][i];
                yt[i] = y[i] + hs * acc;
            }
            f(t + K.c[s] * hs, yt, k[s]);
        }
        double err3 = 0, err5 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Real incr = zero;
            for (int j : {1, 6, 7, 8, 9, 10, 11, 12}) incr += K.b[j] * k[j][i];
            ynew[i] = y[i] + hs * incr;
            const double s = sc(y[i], ynew[i]);
            Real e3 = incr - K.e3[1] * k[1][i] - K.e3[2] * k[9][i] - K.e3[3] * k[12][i];
            Real e5 = zero;
            for (int j : {1, 6, 7, 8, 9, 10, 11, 12}) e5 += K.e5[j] * k[j][i];
            err3 += std::pow(scalar_traits<Real>::to_double(e3) / s, 2);
            err5 += std::pow(scalar_traits<Real>::to_double(e5) / s, 2);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        const double habs = std::fabs(scalar_traits<Real>::to_double(hs));
        double err = habs * err5 * std::sqrt(1.0 / (static_cast<double>(n) * deno));
        if (!std::isfinite(err)) err = 1e10;

        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, opt.pi_beta);
        fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));
        double hnew = habs / fac;

        if (err > 1.0) {
            ++tr.rejected;
            h = habs / std::min(1.0 / fac1, fac11 / safe);
            last_rejected = true;
            continue;
        }

        // Accepted: build the dense-output polynomial.
        facold = std::max(err, 1e-4);
        std::vector<Real>& fnew = k[13];
        const Real tnew = final_step ? t1 : t + hs;
        f(tnew, ynew, fnew);

        DenseSegment<Real> sg{t, hs, std::vector<std::array<Real, 8>>(n, std::array<Real, 8>{zero, zero, zero, zero, zero, zero, zero, zero})};
        for (std::size_t i = 0; i < n; ++i) {
            auto& r = sg.r[i];
            r[0] = y[i];
            r[1] = ynew[i] - y[i];
            r[2] = hs * k[1][i] - r[1];
            r[3] = r[1] - hs * fnew[i] - r[2];
            for (int q = 0; q < 4; ++q) {
                Real acc = zero;
                for (int j : {1, 6, 7, 8, 9, 10, 11, 12}) acc += K.d[q][j] * k[j][i];
                r[4 + q] = acc;
            }
        }
        for (int s = 14; s <= 16; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                Real acc = zero;
                for (int j : K.nz[s]) acc += K.a[s][j] * k[j][i];
                yt[i] = y[i] + hs * acc;
            }
            f(t + K.c[s] * hs, yt, k[s]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (int q = 0; q < 4; ++q) {
                Real acc = sg.r[i][4 + q];
                for (int j : {13, 14, 15, 16}) acc += K.d[q][j] * k[j][i];
                sg.r[i][4 + q] = hs * acc;
            }
        }

        tr.seg.push_back(std::move(sg));
        t = tnew;
        std::swap(y, ynew);
        std::swap(k[1], k[13]);
        tr.t.push_back(t);
        tr.y.push_back(y);

        if (stop && stop(t, y)) {
            tr.status = OdeStatus::Stopped;
            return tr;
        }
        if (final_step) return tr;

        if (last_rejected) hnew = std::min(hnew, habs);
        last_rejected = false;
        h = std::min(hnew, h_max);
    }
}

}  // namespace edgejump
