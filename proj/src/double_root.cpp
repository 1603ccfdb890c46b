#include "kacroots/double_root.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kac {

const char* to_string(ParityCertificate c) {
    switch (c) {
    case ParityCertificate::EvenParityObstruction: return "EvenParityObstruction";
    case ParityCertificate::FourKPlusOneObstruction: return "FourKPlusOneObstruction";
    case ParityCertificate::Feasible: return "Feasible";
    case ParityCertificate::NoWitness: return "NoWitness";
    }
    return "?";
}

namespace {

// Explicit witness for N >= 2: blocks of consecutive indices with
// coefficient patterns (1,-1,-1,1) and (1,-2,1), both of which zero out
// (sum xi, sum i xi) regardless of the block offset.
bool witness_exists(int n, int N) {
    int m = n + 1;
    if (N == 1) return m % 4 == 0;
    if (m < 3) return false;
    if (m == 5) {
        // (1, -2, 2, -2, 1): sums 0 and 0*1 - 2*1 + 2*2 - 2*3 + 1*4 = 0
        return true;
    }
    return m % 4 == 0 || m % 4 == 3 || (m >= 6); // 3a + 4b representation
}

} // namespace

ParityCertificate parity_certificate(int n, int N) {
    if (n < 0 || N < 1) throw std::invalid_argument("parity_certificate: n >= 0, N >= 1");
    if (N == 1) {
        if (n % 2 == 0) return ParityCertificate::EvenParityObstruction;
        if (n % 4 == 1) return ParityCertificate::FourKPlusOneObstruction;
        return ParityCertificate::Feasible; // 4 | n+1, witness = (1,-1,-1,1) blocks
    }
    return witness_exists(n, N) ? ParityCertificate::Feasible : ParityCertificate::NoWitness;
}

namespace {

DoubleRootResult assemble(int n, int N, const mpz_class& u00, const mpz_class& e00,
                          const mpz_class& o00) {
    DoubleRootResult r;
    r.n = n;
    r.N = N;
    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(2 * N),
                  static_cast<unsigned long>(n + 1));
    r.p1 = mpq_class(u00, total);
    r.p1.canonicalize();
    // The -1 event maps onto the (0,0) cell of the U table under index
    // reversal composed with sign alternation, a bijection of the coefficient
    // cube, so pm1 equals p1 exactly.  (The V-weighted table's (0,0) cell is a
    // different event; it serves the anticoncentration sup, not pm1.)
    r.pm1 = r.p1;
    mpz_class both = e00 * o00;
    mpz_class uni = 2 * u00 - both;
    r.p_union = mpq_class(uni, total);
    r.p_union.canonicalize();
    r.certificate = parity_certificate(n, N);
    return r;
}

} // namespace

std::vector<DoubleRootResult> double_root_prob_exact_sweep(int n_max, int N,
                                                           const JointGuard& guard) {
    if (n_max < 0) throw std::invalid_argument("double_root_prob_exact_sweep: n_max >= 0");
    std::vector<mpz_class> u00(n_max + 1);
    joint_prefix_scan(n_max, N, JointWeights::U,
                      [&](int i, const JointSumTable& t) { u00[i] = t.count(0, 0); }, guard);

    // even/odd index split: the double-root-at-both event forces the even-
    // and odd-index sums (and weighted sums) to vanish independently
    std::vector<mpz_class> e00(n_max + 1), o00(n_max + 1);
    {
        JointTableBuilder be(N, JointWeights::U, guard);
        JointTableBuilder bo(N, JointWeights::U, guard);
        mpz_class last_e = 1, last_o = 1; // empty products
        for (int i = 0; i <= n_max; ++i) {
            if (i % 2 == 0) {
                be.absorb(i);
                last_e = be.table().count(0, 0);
            } else {
                bo.absorb(i);
                last_o = bo.table().count(0, 0);
            }
            e00[i] = last_e;
            o00[i] = last_o;
        }
    }
    std::vector<DoubleRootResult> out;
    out.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) out.push_back(assemble(n, N, u00[n], e00[n], o00[n]));
    return out;
}

DoubleRootResult double_root_prob_exact(int n, int N, const JointGuard& guard) {
    if (n < 0) throw std::invalid_argument("double_root_prob_exact: n >= 0");
    mpz_class u00 = build_joint_table(n, N, JointWeights::U, guard).count(0, 0);
    JointTableBuilder be(N, JointWeights::U, guard);
    JointTableBuilder bo(N, JointWeights::U, guard);
    mpz_class e00 = 1, o00 = 1;
    for (int i = 0; i <= n; ++i) {
        if (i % 2 == 0) {
            be.absorb(i);
            e00 = be.table().count(0, 0);
        } else {
            bo.absorb(i);
            o00 = bo.table().count(0, 0);
        }
    }
    return assemble(n, N, u00, e00, o00);
}

double double_root_prob_clt(int n, int N) {
    if (n < 3) throw std::invalid_argument("double_root_prob_clt: n >= 3 required");
    if (N < 1) throw std::invalid_argument("double_root_prob_clt: N >= 1 required");
    if (N == 1 && (n + 1) % 4 != 0) {
        ParityCertificate c = parity_certificate(n, 1);
        throw InfeasibleError(
            "double_root_prob_clt: (0,0) is not on the reachable lattice for n=" +
                std::to_string(n) + ", N=1",
            to_string(c));
    }
    const double sigma2 = static_cast<double>(N + 1) * (2 * N + 1) / 6.0;
    const double nn = n;
    const double D = nn * (nn + 1) * (nn + 1) * (nn + 2) / 12.0;
    const double h = N == 1 ? 4.0 : 1.0;
    return h / (2.0 * std::numbers::pi * sigma2 * std::sqrt(D));
}

} // namespace kac
