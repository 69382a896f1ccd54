#pragma once

// Monte Carlo: GUE spectra in the e^{-x^2} normalization from the tridiagonal
// beta = 2 Hermite model, independent thinning, eigenvalue counting statistics,
// and Plancherel partitions by RSK.

#include "edgejump/numerics/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace edgejump {

/// splitmix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator for stream `stream` under master seed `master`.
inline std::mt19937_64 stream_rng(std::uint64_t master, std::uint64_t stream) {
    std::seed_seq seq{splitmix64(master), splitmix64(master ^ splitmix64(stream + 1))};
    return std::mt19937_64(seq);
}

struct SpectrumSample {
    int n = 0;
    std::vector<double> x;  // descending
};

struct ThinnedSample {
    std::vector<double> survivors;  // descending
    double s = 0;                   // removal probability
};

/// Eigenvalues of (1/2) tridiag(N(0, 2) diagonal, chi_{2(n-k)} off-diagonal), which have joint density
/// proportional to prod (x_i - x_j)^2 prod e^{-x_i^2}.
template <class Rng>
SpectrumSample sample_gue(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_gue: n must be >= 1");
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0));
    Eigen::VectorXd d(n), e(std::max(n - 1, 1));
    for (int i = 0; i < n; ++i) d[i] = 0.5 * normal(rng);
    for (int k = 1; k < n; ++k) {
        std::chi_squared_distribution<double> chi2(2.0 * (n - k));
        e[k - 1] = 0.5 * std::sqrt(chi2(rng));
    }
    SpectrumSample s{n, {}};
    if (n == 1) {
        s.x = {d[0]};
        return s;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e.head(n - 1), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    s.x.assign(ev.data(), ev.data() + n);
    std::sort(s.x.begin(), s.x.end(), std::greater<>());
    return s;
}

/// Removes each element independently with probability s.
template <class Rng>
ThinnedSample thin(const std::vector<double>& descending, double s, Rng& rng) {
    if (!(s >= 0 && s <= 1)) throw std::invalid_argument("thin: s must lie in [0, 1]");
    std::bernoulli_distribution removed(s);
    ThinnedSample t{{}, s};
    for (double v : descending)
        if (!removed(rng)) t.survivors.push_back(v);
    return t;
}

template <class Rng>
ThinnedSample thin(const SpectrumSample& sample, double s, Rng& rng) {
    return thin(sample.x, s, rng);
}

/// Number of eigenvalues above lambda0.
inline int count_above(const SpectrumSample& s, double lambda0) {
    return static_cast<int>(std::upper_bound(s.x.begin(), s.x.end(), lambda0, std::greater<>()) - s.x.begin());
}

struct McEstimate {
    double mean = 0;
    double stderr_ = 0;
    long trials = 0;
};

inline McEstimate bernoulli_estimate(long hits, long trials) {
    const double p = double(hits) / trials;
    return {p, std::sqrt(std::max(p * (1 - p), 0.25 / trials) / trials), trials};
}

/// Histogram of X = #{x_i > lambda0} over GUE(n) draws. Trials are split into fixed
/// chunks with one RNG stream each, so results do not depend on the thread count.
struct CountHistogram {
    int n = 0;
    double lambda0 = 0;
    long trials = 0;
    std::vector<long> freq;  // freq[k] = #draws with X = k

    /// sum_k freq_k s^k / trials with its standard error.
    McEstimate generating_function(double s) const {
        double m1 = 0, m2 = 0;
        for (int k = 0; k <= n; ++k) {
            const double v = std::pow(s, k);
            m1 += freq[k] * v;
            m2 += freq[k] * v * v;
        }
        m1 /= trials;
        m2 /= trials;
        return {m1, std::sqrt(std::max(m2 - m1 * m1, 0.0) / trials), trials};
    }

    McEstimate moment(int power) const {
        double m1 = 0, m2 = 0;
        for (int k = 0; k <= n; ++k) {
            const double v = std::pow(double(k), power);
            m1 += freq[k] * v;
            m2 += freq[k] * v * v;
        }
        m1 /= trials;
        m2 /= trials;
        return {m1, std::sqrt(std::max(m2 - m1 * m1, 0.0) / trials), trials};
    }
};

inline constexpr long mc_chunk = 4096;

/// Runs `trials` draws in chunks; body(rng, count) returns a partial result and merge folds it in.
template <class Part, class Body, class Merge>
Part chunked_mc(long trials, std::uint64_t seed, Body&& body, Merge&& merge, Part init) {
    const std::size_t chunks = static_cast<std::size_t>((trials + mc_chunk - 1) / mc_chunk);
    const std::vector<Part> parts = parallel_map<Part>(chunks, [&](std::size_t c) {
        std::mt19937_64 rng = stream_rng(seed, c);
        const long cnt = std::min<long>(mc_chunk, trials - static_cast<long>(c) * mc_chunk);
        return body(rng, cnt);
    });
    for (const Part& p : parts) merge(init, p);
    return init;
}

inline CountHistogram count_histogram(int n, double lambda0, long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("count_histogram: trials must be >= 1");
    CountHistogram h{n, lambda0, trials, std::vector<long>(n + 1, 0)};
    h.freq = chunked_mc<std::vector<long>>(
        trials, seed,
        [&](std::mt19937_64& rng, long cnt) {
            std::vector<long> f(n + 1, 0);
            for (long i = 0; i < cnt; ++i) ++f[count_above(sample_gue(n, rng), lambda0)];
            return f;
        },
        [](std::vector<long>& acc, const std::vector<long>& f) {
            for (std::size_t k = 0; k < f.size(); ++k) acc[k] += f[k];
        },
        std::vector<long>(n + 1, 0));
    return h;
}

/// Sample moments E[X^k], k = 1..kmax, of the count of eigenvalues above lambda0.
inline std::vector<McEstimate> counting_moments(int n, double lambda0, long trials, int kmax, std::uint64_t seed) {
    const CountHistogram h = count_histogram(n, lambda0, trials, seed);
    std::vector<McEstimate> out;
    for (int k = 1; k <= kmax; ++k) out.push_back(h.moment(k));
    return out;
}

struct ThinningStats {
    long trials = 0;
    long below = 0;              // draws with mu_1 <= lambda0 after thinning
    long same_path_breaks = 0;   // draws where that event differs from "all X top values removed"
    CountHistogram counts;       // X on the same parent draws

    McEstimate probability() const { return bernoulli_estimate(below, trials); }
};

/// Thinned GUE: P(mu_1 <= lambda0) empirically, with the parent counts on the same draws.
inline ThinningStats thinning_experiment(int n, double lambda0, double s, long trials, std::uint64_t seed) {
    ThinningStats init;
    init.counts = {n, lambda0, trials, std::vector<long>(n + 1, 0)};
    ThinningStats r = chunked_mc<ThinningStats>(
        trials, seed,
        [&](std::mt19937_64& rng, long cnt) {
            ThinningStats p;
            p.counts.freq.assign(n + 1, 0);
            std::bernoulli_distribution removed(s);
            for (long i = 0; i < cnt; ++i) {
                const SpectrumSample x = sample_gue(n, rng);
                const int X = count_above(x, lambda0);
                ++p.counts.freq[X];
                // thin in descending order and record whether all of the top X went
                bool top_all_removed = true, below = true;
                for (int j = 0; j < n; ++j) {
                    const bool gone = removed(rng);
                    if (j < X && !gone) top_all_removed = false;
                    if (!gone && x.x[j] > lambda0) below = false;
                }
                p.below += below;
                p.same_path_breaks += below != top_all_removed;
            }
            p.trials = cnt;
            return p;
        },
        [](ThinningStats& acc, const ThinningStats& p) {
            acc.trials += p.trials;
            acc.below += p.below;
            acc.same_path_breaks += p.same_path_breaks;
            for (std::size_t k = 0; k < p.counts.freq.size(); ++k) acc.counts.freq[k] += p.counts.freq[k];
        },
        init);
    return r;
}

// ---- Plancherel ----

/// Row lengths of the RSK shape of a sequence. With row_cap > 0 only the first row_cap rows
/// are kept (values bumped out of the last kept row are dropped); those rows are exact.
template <class T>
std::vector<int> rsk_shape(const std::vector<T>& seq, int row_cap = 0) {
    std::vector<std::vector<T>> rows;
    for (T v : seq) {
        for (std::size_t r = 0;; ++r) {
            if (r == rows.size()) {
                if (row_cap > 0 && static_cast<int>(r) >= row_cap) break;
                rows.push_back({v});
                break;
            }
            auto it = std::upper_bound(rows[r].begin(), rows[r].end(), v);
            if (it == rows[r].end()) {
                rows[r].push_back(v);
                break;
            }
            std::swap(*it, v);
        }
    }
    std::vector<int> shape;
    for (const auto& r : rows) shape.push_back(static_cast<int>(r.size()));
    return shape;
}

/// Longest strictly increasing subsequence by patience sorting.
template <class T>
int longest_increasing_subsequence(const std::vector<T>& seq) {
    std::vector<T> piles;
    for (T v : seq) {
        auto it = std::lower_bound(piles.begin(), piles.end(), v);
        if (it == piles.end()) piles.push_back(v);
        else *it = v;
    }
    return static_cast<int>(piles.size());
}

/// Partition of N from RSK of a uniform random permutation.
template <class Rng>
std::vector<int> plancherel_sample(int N, Rng& rng, int row_cap = 0) {
    if (N < 1) throw std::invalid_argument("plancherel_sample: N must be >= 1");
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    return rsk_shape(perm, row_cap);
}

/// Number of standard Young tableaux of the given shape (hook length formula), as a double.
inline double young_dimension(const std::vector<int>& shape) {
    int N = 0;
    for (int r : shape) N += r;
    double lg = std::lgamma(N + 1.0);
    for (std::size_t i = 0; i < shape.size(); ++i)
        for (int j = 0; j < shape[i]; ++j) {
            int leg = 0;
            for (std::size_t k = i + 1; k < shape.size() && shape[k] > j; ++k) ++leg;
            lg -= std::log(double(shape[i] - j + leg));
        }
    return std::exp(lg);
}

/// Largest surviving row of a Plancherel partition whose rows are removed independently with
/// probability s. Removals do not depend on the shape, so the index K of the first survivor is
/// drawn first and only K rows of RSK are built. Returns -1 when the shape has fewer than K rows.
template <class Rng>
int thinned_plancherel_max(int N, double s, Rng& rng) {
    if (!(s >= 0 && s < 1)) throw std::invalid_argument("thinned_plancherel_max: s must lie in [0, 1)");
    std::geometric_distribution<int> removed_before(1 - s);
    const int K = removed_before(rng) + 1;
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    if (K == 1) return longest_increasing_subsequence(perm);
    const std::vector<int> shape = rsk_shape(perm, K);
    return static_cast<int>(shape.size()) < K ? -1 : shape[K - 1];
}

/// Empirical P(N^{-1/6}(mu_1 - 2 sqrt N) <= t) for thinned Plancherel rows, one entry per t.
inline std::vector<McEstimate> plancherel_thinned_cdf(int N, double s, const std::vector<double>& ts, long trials,
                                                      std::uint64_t seed) {
    const std::size_t m = ts.size();
    const std::vector<long> hits = chunked_mc<std::vector<long>>(
        trials, seed,
        [&](std::mt19937_64& rng, long cnt) {
            std::vector<long> h(m, 0);
            for (long i = 0; i < cnt; ++i) {
                const int mu = thinned_plancherel_max(N, s, rng);
                const double scaled = mu < 0 ? -INFINITY : (mu - 2 * std::sqrt(double(N))) / std::pow(double(N), 1.0 / 6);
                for (std::size_t j = 0; j < m; ++j) h[j] += scaled <= ts[j];
            }
            return h;
        },
        [](std::vector<long>& acc, const std::vector<long>& h) {
            for (std::size_t j = 0; j < h.size(); ++j) acc[j] += h[j];
        },
        std::vector<long>(m, 0));
    std::vector<McEstimate> out;
    for (long h : hits) out.push_back(bernoulli_estimate(h, trials));
    return out;
}

}  // namespace edgejump
