#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "kacroots/poly.hpp"

namespace kac {

// Query interval with rational endpoints; a missing endpoint means +-infinity.
struct RatInterval {
    std::optional<mpq_class> lo, hi;
    bool lo_open = true;
    bool hi_open = false; // default is the half-open (lo, hi] used throughout

    static RatInterval whole_line() { return {}; }
    static RatInterval half_open(mpq_class a, mpq_class b) { return {std::move(a), std::move(b), true, false}; }
    static RatInterval open(mpq_class a, mpq_class b) { return {std::move(a), std::move(b), true, true}; }
    static RatInterval closed(mpq_class a, mpq_class b) { return {std::move(a), std::move(b), false, false}; }
};

struct RootInterval {
    mpq_class lo, hi;
    bool exact = false; // lo == hi is a certified rational root
    mpq_class mid() const { return exact ? lo : mpq_class((lo + hi) / 2); }
    mpq_class width() const { return hi - lo; }
};

struct RootReport {
    int distinct_count = 0;
    std::vector<RootInterval> intervals; // disjoint, ascending
    std::vector<mpq_class> refined;      // interval midpoints
    std::optional<mpq_class> min_gap;    // smallest consecutive midpoint distance
    mpq_class min_gap_err = 0;           // certified bound on |reported - true|
    bool multiple_root_flag = false;     // gcd(P, P') nonconstant
    bool certified = true;
    int excluded = 0;
};

// Exact number of distinct real roots via Sturm sequences on the squarefree
// part.  Throws std::invalid_argument on the zero polynomial.
int count_real_roots(const IntPoly& p, const RatInterval& iv = RatInterval::whole_line());

RootReport isolate_and_refine(const IntPoly& p, const RatInterval& iv, const mpq_class& width);

// Accessor per the operation contract; absent when fewer than two roots.
std::optional<mpq_class> min_gap(const RootReport& report);

bool has_multiple_root(const IntPoly& p);

// Smallest dyadic power-of-two bound strictly exceeding all real root
// magnitudes (Cauchy bound).
mpq_class cauchy_root_bound(const IntPoly& p);

// Exact division (x - 1)^m or (x + 1)^m out of p; returns multiplicity m and
// replaces p by the quotient.
int deflate_root(IntPoly& p, int root_sign);

namespace sturm_detail {

IntPoly normalized(const IntPoly& p);
mpz_class content(const IntPoly& p);
IntPoly primitive_part(const IntPoly& p);
IntPoly poly_gcd(const IntPoly& a, const IntPoly& b);
IntPoly squarefree_part(const IntPoly& p);
std::vector<IntPoly> sturm_chain(const IntPoly& squarefree);

// Sign variations at x with the right-limit convention (a vanishing leading
// element is skipped), so W(a) - W(b) counts roots in (a, b] even at root
// endpoints.
int variations_at(const std::vector<IntPoly>& chain, const mpq_class& x);
int variations_at_neg_inf(const std::vector<IntPoly>& chain);
int variations_at_pos_inf(const std::vector<IntPoly>& chain);

} // namespace sturm_detail

} // namespace kac
