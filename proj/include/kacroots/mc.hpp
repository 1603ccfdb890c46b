#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "kacroots/atom.hpp"
#include "kacroots/certified.hpp"

namespace kac {

struct SimConfig {
    Atom atom;
    std::vector<int> degrees;
    int trials = 1000;
    std::uint64_t seed = 0;
    std::optional<DInterval> restrict_to;
    double B = 16.0;        // near-double threshold exponent
    double epsilon = 0.125; // edge-interval exponent in I0 = (1/(N+1), 1-n^(eps-2)]
    bool collect_gaps = false;
    bool collect_near_double = false;
    int threads = 0; // 0: hardware concurrency
};

struct SimSummary {
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double variance = 0.0;   // unbiased sample variance
    double residual = 0.0;   // mean - (2/pi) ln n
    double ci_half = 0.0;    // 1.96 sqrt(variance / trials)
    int excluded = 0;        // certification failures (structurally 0 for Type I)
    double near_double_freq; // NaN unless collected
    double min_gap_p01;      // NaN unless collected
    double min_gap_p50;
};

// Samples `trials` polynomials per degree with trial-indexed streams, counts
// distinct real roots, and aggregates in a fixed order, so the output is
// bit-identical for a fixed (config, seed) under any worker count.
std::vector<SimSummary> run_expectation(const SimConfig& cfg);

struct VarianceRow {
    int n = 0;
    double variance = 0.0;
    double ratio = 0.0; // Var(N_n) / ln n
    double se = 0.0;    // delete-one jackknife standard error of the ratio
};
std::vector<VarianceRow> variance_ratio(const SimConfig& cfg);

// run_expectation rows formatted per degree; CSV-ready
std::vector<SimSummary> residual_curve(const SimConfig& cfg);

struct TruncationRecord {
    int n = 0, m = 0;
    double r = 0.0;
    int trials = 0;
    double mean_abs_diff = 0.0;
    double mismatch_fraction = 0.0;
    bool precondition_ok = false; // m >= 4 B r^-1 log n
    int excluded = 0;
};

// Couples P_m to P_n by literal truncation of the shared coefficient vector
// and compares root counts on J.
TruncationRecord truncation_compare(const Atom& atom, int n, int m, double r, DInterval J,
                                    int trials, std::uint64_t seed, double B = 16.0,
                                    int threads = 0);

struct UniversalityRecord {
    int n = 0;
    double r = 0.0;
    int trials = 0;
    double mean_a = 0.0, half_a = 0.0;
    double mean_b = 0.0, half_b = 0.0;
    double difference = 0.0;
    double combined_se = 0.0;
    int excluded = 0;
};

// E N on (1-r, 1) for two atoms with confidence intervals.
UniversalityRecord near_one_universality(const Atom& atom_a, const Atom& atom_b, int n, double r,
                                         int trials, std::uint64_t seed, int threads = 0);

struct EdgeMomentRow {
    int n = 0;
    double median_abs = 0.0;
    double exact_second_moment = 0.0;  // sum_i C(i,k)^2 for unit-variance atoms
    double sample_second_moment = 0.0;
};
struct EdgeMomentResult {
    int k = 0;
    std::vector<EdgeMomentRow> rows;
    double slope = 0.0; // least-squares slope of log median vs log n
};

// Magnitude statistics of sum_i C(i,k) xi_i in exact big-integer arithmetic.
EdgeMomentResult edge_moment_growth(const std::vector<int>& degrees, int k, int trials,
                                    std::uint64_t seed, const Atom& atom = Atom::bernoulli(),
                                    int threads = 0);

struct DoubleRootMcRecord {
    int n = 0, N = 1;
    int trials = 0;
    long hits_pm1 = 0;          // exact double root at +1 or -1
    double freq_pm1 = 0.0;
    mpq_class exact_p_union;    // oracle from the exact module
    long near_double_events = 0;
    int excluded = 0;
};

DoubleRootMcRecord double_root_mc(int n, int N, int trials, std::uint64_t seed, double B = 16.0,
                                  double epsilon = 0.125, bool scan_near_double = true,
                                  int threads = 0);

} // namespace kac
