#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "kacroots/errors.hpp"

namespace kac {

// Exact P(|sum xi_i x^i| <= delta) over all (2N)^(n+1) coefficient vectors,
// by meet-in-the-middle over sorted half-sums in scaled-integer arithmetic.
// Guards: N = 1 up to n = 50, otherwise full enumeration up to (2N)^(n+1)
// <= 2^24.
mpq_class smallball_prob(int n, int N, const mpq_class& x, const mpq_class& delta);

struct LacunaryParams {
    long ell = 0; // x^ell < threshold <= x^(ell-1), threshold 1/2 (N=1) or 1/(2N+1)
    long k = 0;   // largest k with x^(ell k) >= n^(-2A)
};

LacunaryParams choose_lacunary_params(const mpq_class& x, int N, int A, long n);

enum class SeparationVariant { Claim1, Claim2, Uniform };

struct SeparationResult {
    SeparationVariant variant = SeparationVariant::Claim1;
    mpq_class x;
    int N = 1;
    long k = 0;
    long ell = 0;
    std::size_t set_size = 0;
    mpq_class min_gap;
    mpq_class bound;
    bool pass = false;
    std::string reason; // nonempty when preconditions fail
};

// Exhaustively enumerates the lacunary value set and compares the minimal
// pairwise gap with the claimed separation radius:
//   Claim1  (N=1): values sum_{j=1..k} e_j x^(j ell),           radius 2 x^(k ell)
//   Claim2  (N=1): sum e_{2j} x^(2j) + sum e_{8j+1} x^(8j+1),   radius x^(2k)/8,
//                  valid for 1/2 < x < 1/2 + c0
//   Uniform (any N): e_j in {+-1..+-N},                         radius x^(k ell)
SeparationResult separation_check(SeparationVariant variant, const mpq_class& x, int N, long k,
                                  const mpq_class& c0 = mpq_class(1, 50));

} // namespace kac
