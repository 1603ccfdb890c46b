#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "kacroots/poly.hpp"
#include "kacroots/rootfind.hpp"

namespace kac {

// Open interval on the real line (double endpoints).
struct DInterval {
    double lo;
    double hi;
};

struct ScanOptions {
    double refine_width = 1e-12;   // bracket width target for reported roots
    bool collect_roots = true;
    int exact_degree_cap = 4096;   // Sturm fallback allowed up to this degree
    int max_segments = 2'000'000;  // defensive bound on subdivision work
};

struct ScanOutcome {
    int count = 0;                 // distinct roots in the scanned open interval
    bool certified = true;         // false => count may be wrong, caller must exclude
    bool escalated = false;        // exact arithmetic was needed somewhere
    bool multiple_root = false;    // an exact multiple root was resolved
    std::vector<double> roots;
};

// Sign-change scan with derivative-bounded refinement on [a, b] subset of
// [0, 1].  Counting is certified: every reported count is backed either by a
// floating-point enclosure argument or, for integer polynomials, by exact
// arithmetic (sign evaluation, centered-form certificates, and a Sturm
// fallback on the offending segment).
class CertifiedScanner {
public:
    // exact may be null (continuous atoms); coefficients are then trusted as
    // exact binary doubles only for enclosure purposes.
    void set_poly(const std::vector<double>& coeffs, const IntPoly* exact);

    ScanOutcome scan_open(double a, double b, const ScanOptions& opts);

    // Certified sign of P at x: -1, 0 (exact root, integer path only) or +1;
    // returns 2 when the sign cannot be certified (float path).
    int cert_sign(double x) const;

private:
    struct Seg {
        double x1, x2;
        int s1, s2;
    };

    int exact_sign(const mpq_class& x) const;
    // exact centered-form decision on (x1,x2); fills count when certified
    bool escalate(const mpq_class& x1, const mpq_class& x2, int s1, int s2,
                  ScanOutcome& out, const ScanOptions& opts);
    void refine_bracket(double x1, double x2, int s1, ScanOutcome& out, const ScanOptions& opts);

    std::vector<double> c_;      // zero-padded to multiples of four
    std::vector<double> dc_;
    std::vector<double> d2c_;
    std::vector<double> mag2_;   // |P''| coefficient magnitudes
    std::vector<double> mag3_;   // |P'''| coefficient magnitudes
    std::size_t pc_ = 0, pdc_ = 0, pd2c_ = 0, pm2_ = 0, pm3_ = 0;
    double gamma_ = 0.0;         // plain-Horner rounding constant
    const IntPoly* exact_ = nullptr;
    IntPoly dexact_;
};

// Whole-line (or restricted) distinct-root count of a sampled polynomial by
// quadrant folding: (0,1) directly, (1,inf) via the reciprocal transform,
// negative axes via sign alternation, and exact handling of roots at +-1.
struct CountOutcome {
    int count = 0;
    bool certified = true;
    bool escalated = false;
    bool multiple_root = false;
    std::vector<double> roots;   // when collected: positions on the real line
    double min_gap = std::numeric_limits<double>::quiet_NaN();
};

struct CountOptions {
    std::optional<DInterval> restrict_to; // open interval; else whole line
    bool collect_roots = false;
    double refine_width = 1e-12;
    int exact_degree_cap = 4096;
};

CountOutcome count_distinct(const SampledPoly& p, const CountOptions& opts);

} // namespace kac
