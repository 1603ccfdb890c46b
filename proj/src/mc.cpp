#include "kacroots/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "kacroots/double_root.hpp"
#include "kacroots/neardouble.hpp"

namespace kac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(t) for t in [0, trials) across workers; results must be written to
// per-trial slots so the aggregation order is independent of scheduling.
template <class F>
void parallel_trials(int trials, int threads, F&& fn) {
    threads = std::min(resolve_threads(threads), std::max(trials, 1));
    if (threads <= 1) {
        for (int t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&fn, w, threads, trials] {
            for (int t = w; t < trials; t += threads) fn(t);
        });
    for (auto& th : pool) th.join();
}

// distinct sample stream per (degree, trial)
RngSpec stream_for(std::uint64_t seed, int n, int trial) {
    return {seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
                      static_cast<std::uint32_t>(trial),
            0};
}

struct TrialOut {
    int count = -1; // -1: excluded
    float min_gap = -1.0f;
    std::uint8_t near_double = 0;
};

double quantile(std::vector<double>& v, double q) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    std::size_t idx = static_cast<std::size_t>(q * (v.size() - 1));
    return v[idx];
}

} // namespace

std::vector<SimSummary> run_expectation(const SimConfig& cfg) {
    if (cfg.trials < 1 || cfg.degrees.empty())
        throw std::invalid_argument("run_expectation: trials >= 1 and degrees nonempty");
    if (cfg.B <= 0) throw std::invalid_argument("run_expectation: B > 0");
    if (cfg.collect_near_double && !cfg.atom.discrete())
        throw std::invalid_argument("near-double statistics require a discrete atom");

    std::vector<SimSummary> out;
    for (int n : cfg.degrees) {
        std::vector<TrialOut> results(cfg.trials);
        const double i0_lo = 1.0 / (cfg.atom.N + 1);
        const double i0_hi = 1.0 - std::pow(static_cast<double>(std::max(n, 2)), cfg.epsilon - 2.0);
        parallel_trials(cfg.trials, cfg.threads, [&](int t) {
            SampledPoly sp = sample_poly(cfg.atom, n, stream_for(cfg.seed, n, t));
            CountOptions opts;
            opts.restrict_to = cfg.restrict_to;
            opts.collect_roots = cfg.collect_gaps;
            CountOutcome co = count_distinct(sp, opts);
            TrialOut& to = results[t];
            if (!co.certified) return; // stays excluded
            to.count = co.count;
            if (cfg.collect_gaps && co.roots.size() >= 2) to.min_gap = static_cast<float>(co.min_gap);
            if (cfg.collect_near_double) {
                auto events = near_double_scan(std::get<IntPoly>(sp), cfg.B, DInterval{i0_lo, i0_hi});
                to.near_double = events.empty() ? 0 : 1;
            }
        });

        SimSummary s;
        s.n = n;
        s.seed = cfg.seed;
        s.trials = cfg.trials;
        s.near_double_freq = kNaN;
        s.min_gap_p01 = kNaN;
        s.min_gap_p50 = kNaN;
        long long sum = 0, sum2 = 0, nd = 0;
        int included = 0;
        std::vector<double> gaps;
        for (const TrialOut& to : results) {
            if (to.count < 0) {
                ++s.excluded;
                continue;
            }
            ++included;
            sum += to.count;
            sum2 += static_cast<long long>(to.count) * to.count;
            nd += to.near_double;
            if (to.min_gap >= 0.0f) gaps.push_back(static_cast<double>(to.min_gap));
        }
        if (included > 0) {
            s.mean = static_cast<double>(sum) / included;
            if (included > 1)
                s.variance = (static_cast<double>(sum2) - included * s.mean * s.mean) /
                             (included - 1);
            s.residual = s.mean - (2.0 / std::numbers::pi) * std::log(static_cast<double>(n));
            s.ci_half = 1.96 * std::sqrt(s.variance / included);
        }
        if (cfg.collect_near_double && included > 0)
            s.near_double_freq = static_cast<double>(nd) / included;
        if (cfg.collect_gaps) {
            s.min_gap_p01 = quantile(gaps, 0.01);
            s.min_gap_p50 = quantile(gaps, 0.50);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<SimSummary> residual_curve(const SimConfig& cfg) {
    return run_expectation(cfg);
}

std::vector<VarianceRow> variance_ratio(const SimConfig& cfg) {
    if (cfg.trials < 1000)
        throw std::invalid_argument("variance_ratio: need trials >= 1e3 for a usable estimate");
    SimConfig c2 = cfg;
    c2.collect_gaps = false;
    c2.collect_near_double = false;
    std::vector<VarianceRow> rows;
    for (int n : cfg.degrees) {
        std::vector<TrialOut> results(cfg.trials);
        parallel_trials(cfg.trials, cfg.threads, [&](int t) {
            SampledPoly sp = sample_poly(cfg.atom, n, stream_for(cfg.seed, n, t));
            CountOptions opts;
            opts.restrict_to = cfg.restrict_to;
            CountOutcome co = count_distinct(sp, opts);
            if (co.certified) results[t].count = co.count;
        });
        double s1 = 0, M = 0;
        for (const auto& to : results)
            if (to.count >= 0) {
                s1 += to.count;
                M += 1;
            }
        double mean = s1 / M;
        double m2 = 0, m4 = 0;
        for (const auto& to : results)
            if (to.count >= 0) {
                double d = to.count - mean;
                m2 += d * d;
                m4 += d * d * d * d;
            }
        double var = m2 / (M - 1);
        m2 /= M;
        m4 /= M;
        // delete-one jackknife closed form for the variance of s^2
        double var_of_var = (m4 - m2 * m2 * (M - 3) / (M - 1)) / M;
        VarianceRow row;
        row.n = n;
        row.variance = var;
        row.ratio = var / std::log(static_cast<double>(n));
        row.se = std::sqrt(std::max(var_of_var, 0.0)) / std::log(static_cast<double>(n));
        rows.push_back(row);
    }
    return rows;
}

TruncationRecord truncation_compare(const Atom& atom, int n, int m, double r, DInterval J,
                                    int trials, std::uint64_t seed, double B, int threads) {
    if (!(r > 1.0 / n && r < 1.0))
        throw std::invalid_argument("truncation_compare: need 1/n < r < 1");
    if (!(m <= n && m >= 1)) throw std::invalid_argument("truncation_compare: need 1 <= m <= n");
    TruncationRecord rec;
    rec.n = n;
    rec.m = m;
    rec.r = r;
    rec.trials = trials;
    rec.precondition_ok = m >= 4.0 * B * std::log(static_cast<double>(n)) / r;

    std::vector<int> diffs(trials, std::numeric_limits<int>::min());
    parallel_trials(trials, threads, [&](int t) {
        SampledPoly sp = sample_poly(atom, n, stream_for(seed, n, t));
        CountOptions opts;
        opts.restrict_to = J;
        CountOutcome cn = count_distinct(sp, opts);
        if (!cn.certified) return;
        // literal truncation couples the pair through shared coefficients
        CountOutcome cm;
        if (const auto* ip = std::get_if<IntPoly>(&sp)) {
            IntPoly tr;
            tr.coeffs.assign(ip->coeffs.begin(), ip->coeffs.begin() + m + 1);
            cm = count_distinct(SampledPoly{std::move(tr)}, opts);
        } else {
            const auto& rp = std::get<RealPoly>(sp);
            RealPoly tr;
            tr.coeffs.assign(rp.coeffs.begin(), rp.coeffs.begin() + m + 1);
            cm = count_distinct(SampledPoly{std::move(tr)}, opts);
        }
        if (!cm.certified) return;
        diffs[t] = std::abs(cn.count - cm.count);
    });
    long sum = 0, mism = 0, included = 0;
    for (int d : diffs) {
        if (d == std::numeric_limits<int>::min()) {
            ++rec.excluded;
            continue;
        }
        ++included;
        sum += d;
        mism += d != 0;
    }
    if (included > 0) {
        rec.mean_abs_diff = static_cast<double>(sum) / included;
        rec.mismatch_fraction = static_cast<double>(mism) / included;
    }
    return rec;
}

UniversalityRecord near_one_universality(const Atom& atom_a, const Atom& atom_b, int n, double r,
                                         int trials, std::uint64_t seed, int threads) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("near_one_universality: r in (0,1)");
    UniversalityRecord rec;
    rec.n = n;
    rec.r = r;
    rec.trials = trials;
    DInterval window{1.0 - r, 1.0};
    const Atom* atoms[2] = {&atom_a, &atom_b};
    double means[2], vars[2];
    for (int side = 0; side < 2; ++side) {
        std::vector<int> counts(trials, -1);
        parallel_trials(trials, threads, [&](int t) {
            // decorrelate the two sides
            std::uint64_t s = seed + (side ? 0x9E3779B97F4A7C15ull : 0);
            SampledPoly sp = sample_poly(*atoms[side], n, stream_for(s, n, t));
            CountOptions opts;
            opts.restrict_to = window;
            CountOutcome co = count_distinct(sp, opts);
            if (co.certified) counts[t] = co.count;
        });
        double s1 = 0, M = 0;
        for (int c : counts)
            if (c >= 0) {
                s1 += c;
                M += 1;
            } else {
                ++rec.excluded;
            }
        means[side] = s1 / M;
        double m2 = 0;
        for (int c : counts)
            if (c >= 0) m2 += (c - means[side]) * (c - means[side]);
        vars[side] = m2 / (M - 1);
        if (side == 0) {
            rec.mean_a = means[0];
            rec.half_a = 1.96 * std::sqrt(vars[0] / M);
        } else {
            rec.mean_b = means[1];
            rec.half_b = 1.96 * std::sqrt(vars[1] / M);
        }
    }
    rec.difference = rec.mean_a - rec.mean_b;
    rec.combined_se = std::sqrt(vars[0] / trials + vars[1] / trials);
    return rec;
}

EdgeMomentResult edge_moment_growth(const std::vector<int>& degrees, int k, int trials,
                                    std::uint64_t seed, const Atom& atom, int threads) {
    if (k < 0) throw std::invalid_argument("edge_moment_growth: k >= 0");
    if (!atom.discrete())
        throw std::invalid_argument("edge_moment_growth: exact path needs a discrete atom");
    EdgeMomentResult out;
    out.k = k;
    for (int n : degrees) {
        if (k > n) throw std::invalid_argument("edge_moment_growth: k <= n required");
        // binomials C(i,k), i = 0..n
        std::vector<mpz_class> binom(n + 1);
        for (int i = 0; i <= n; ++i)
            mpz_bin_uiui(binom[i].get_mpz_t(), static_cast<unsigned long>(i),
                         static_cast<unsigned long>(k));
        mpz_class exact_m2 = 0;
        for (const auto& b : binom) exact_m2 += b * b;

        std::vector<double> mags(trials);
        parallel_trials(trials, threads, [&](int t) {
            CounterRng rng(seed, stream_for(seed, n, t).trial);
            mpz_class s = 0;
            for (int i = 0; i <= n; ++i)
                s += binom[i] * sample_discrete(atom, rng, static_cast<std::uint64_t>(i));
            mags[t] = std::fabs(s.get_d());
        });
        EdgeMomentRow row;
        row.n = n;
        {
            std::vector<double> sorted = mags;
            row.median_abs = quantile(sorted, 0.5);
        }
        row.exact_second_moment = exact_m2.get_d() * atom.variance();
        double s2 = 0;
        for (double v : mags) s2 += v * v;
        row.sample_second_moment = s2 / trials;
        out.rows.push_back(row);
    }
    // least-squares slope of log median against log n
    if (out.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& r : out.rows) {
            double x = std::log(static_cast<double>(r.n));
            double y = std::log(r.median_abs);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double m = static_cast<double>(out.rows.size());
        out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return out;
}

DoubleRootMcRecord double_root_mc(int n, int N, int trials, std::uint64_t seed, double B,
                                  double epsilon, bool scan_near_double, int threads) {
    DoubleRootMcRecord rec;
    rec.n = n;
    rec.N = N;
    rec.trials = trials;
    Atom atom = Atom::type_i(N);
    const double i0_lo = 1.0 / (N + 1);
    const double i0_hi = 1.0 - std::pow(static_cast<double>(std::max(n, 2)), epsilon - 2.0);

    std::vector<std::uint8_t> hit(trials, 0), near(trials, 0), bad(trials, 0);
    parallel_trials(trials, threads, [&](int t) {
        SampledPoly sp = sample_poly(atom, n, stream_for(seed, n, t));
        const IntPoly& p = std::get<IntPoly>(sp);
        mpz_class v1 = 0, vm1 = 0, d1 = 0, dm1 = 0;
        for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
            const mpz_class& c = p.coeffs[i];
            long ii = static_cast<long>(i);
            v1 += c;
            d1 += ii * c;
            if (i % 2 == 0) {
                vm1 += c;
                dm1 -= ii * c;
            } else {
                vm1 -= c;
                dm1 += ii * c;
            }
        }
        bool at1 = v1 == 0 && d1 == 0;
        bool atm1 = vm1 == 0 && dm1 == 0;
        hit[t] = at1 || atm1;
        if (scan_near_double) {
            auto events = near_double_scan(p, B, DInterval{i0_lo, i0_hi});
            near[t] = events.empty() ? 0 : 1;
        }
        (void)bad;
    });
    for (int t = 0; t < trials; ++t) {
        rec.hits_pm1 += hit[t];
        rec.near_double_events += near[t];
    }
    rec.freq_pm1 = static_cast<double>(rec.hits_pm1) / trials;
    if (n <= 256) rec.exact_p_union = double_root_prob_exact(n, N).p_union;
    return rec;
}

} // namespace kac
