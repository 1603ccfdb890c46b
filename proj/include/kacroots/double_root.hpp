#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "kacroots/joint_table.hpp"

namespace kac {

// Arithmetic feasibility of P(1) = P'(1) = 0 over {+-1..+-N} coefficients.
enum class ParityCertificate {
    EvenParityObstruction,    // N = 1, n even: P(+-1) is odd
    FourKPlusOneObstruction,  // N = 1, n = 4k+1: parity clash between the sums
    Feasible,                 // backed by an explicit witness or table count
    NoWitness,                // N >= 2, n too small for any witness (n <= 1)
};

const char* to_string(ParityCertificate c);

ParityCertificate parity_certificate(int n, int N);

struct DoubleRootResult {
    int n = 0;
    int N = 1;
    mpq_class p1;      // double root at +1
    mpq_class pm1;     // double root at -1
    mpq_class p_union; // double root at either (inclusion-exclusion)
    ParityCertificate certificate = ParityCertificate::Feasible;
};

// Exact probabilities from the joint-sum tables: p1 from the U-table at
// (0,0), pm1 from the V-table, and the union via the even/odd index split
// (both events factor into independent even- and odd-index constraints).
DoubleRootResult double_root_prob_exact(int n, int N, const JointGuard& guard = {});

// One prefix sweep to n_max produces every degree at once.
std::vector<DoubleRootResult> double_root_prob_exact_sweep(int n_max, int N,
                                                           const JointGuard& guard = {});

// Two-dimensional local-limit approximation of p1 (per lattice point):
//   h / (2 pi sigma^2 sqrt(D)),  D = n (n+1)^2 (n+2) / 12
// with lattice covolume h = 4 for N = 1 and h = 1 otherwise.  Throws
// InfeasibleError naming the parity obstruction when the target point is not
// on the reachable lattice.
double double_root_prob_clt(int n, int N);

} // namespace kac
