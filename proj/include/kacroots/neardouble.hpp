#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kacroots/certified.hpp"
#include "kacroots/poly.hpp"

namespace kac {

// A location where |P| <= n^-B and |P'| <= n^-B simultaneously.
struct NearDoubleEvent {
    double lo = 0.0, hi = 0.0;  // x-interval containing the event
    double p_bound = 0.0;       // certified upper bound of |P| there
    double dp_bound = 0.0;      // certified upper bound of |P'| there
    double threshold = 0.0;
    bool exact_double = false;  // P and P' vanish exactly (integer coefficients)
    bool undecided = false;     // conservative inclusion; never seen in practice
};

// Scans critical points of P and P' over the window (whole line by default,
// folded through the reciprocal/negation symmetries).  Exact integer
// arithmetic settles every comparison the floating bounds cannot.
std::vector<NearDoubleEvent> near_double_scan(const IntPoly& p, double B,
                                              std::optional<DInterval> window = std::nullopt);

// Root-pairing utility: for every root x0 of F with |F'(x0)| >= eps1,
// |F''| <= M near x0 and sup |F-G| <= eps1^2/(4M) on
// I = [x0 - eps1/M, x0 + eps1/M], certifies a root of G in I by sign change.
struct RootMatch {
    double root = 0.0;
    double ilo = 0.0, ihi = 0.0;
    bool matched = false;
    std::string reason; // empty when matched
};

struct RootMatchReport {
    std::vector<RootMatch> matches;
    int matched_count = 0;
    int unmatched_count = 0;
    bool roots_certified = true;
};

RootMatchReport root_match(const SampledPoly& F, const SampledPoly& G,
                           double eps1, double M,
                           std::optional<DInterval> window = std::nullopt);

} // namespace kac
