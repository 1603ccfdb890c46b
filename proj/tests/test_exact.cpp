#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

#include "kacroots/double_root.hpp"
#include "kacroots/joint_table.hpp"
#include "kacroots/smallball.hpp"

using namespace kac;

namespace {

// exhaustive joint counts over all (2N)^(n+1) vectors
std::map<std::pair<long, long>, long> brute_joint(int n, int N, JointWeights w) {
    std::map<std::pair<long, long>, long> counts;
    std::vector<int> digit(n + 1, 0);
    auto value_of = [N](int d) { return d < N ? d - N : d - N + 1; };
    for (;;) {
        long s = 0, t = 0;
        for (int i = 0; i <= n; ++i) {
            long v = value_of(digit[i]);
            s += v;
            t += joint_weight(w, i) * v;
        }
        counts[{s, t}]++;
        int j = 0;
        while (j <= n && digit[j] == 2 * N - 1) digit[j++] = 0;
        if (j > n) break;
        digit[j]++;
    }
    return counts;
}

} // namespace

TEST_CASE("joint table n=1 has the four unit states") {
    JointSumTable t = build_joint_table(1, 1, JointWeights::U);
    CHECK(t.count(2, 1) == 1);
    CHECK(t.count(0, 1) == 1);
    CHECK(t.count(0, -1) == 1);
    CHECK(t.count(-2, -1) == 1);
    CHECK(t.count(0, 0) == 0);
    CHECK(t.sum_all() == 4);
}

TEST_CASE("joint table conservation and symmetry") {
    for (int N : {1, 2}) {
        for (int n : {4, 7}) {
            for (JointWeights w : {JointWeights::U, JointWeights::V}) {
                JointSumTable t = build_joint_table(n, N, w);
                CHECK(t.sum_all() == t.total());
                for (long s = t.s_min; s <= t.s_max; ++s)
                    for (long tt = t.t_min; tt <= t.t_max; ++tt)
                        CHECK(t.count(s, tt) == t.count(-s, -tt));
            }
        }
    }
}

TEST_CASE("joint table equals exhaustive enumeration (small n)") {
    for (int N : {1, 2}) {
        for (int n : {1, 3, 6}) {
            for (JointWeights w : {JointWeights::U, JointWeights::V}) {
                auto brute = brute_joint(n, N, w);
                JointSumTable t = build_joint_table(n, N, w);
                mpz_class seen = 0;
                for (const auto& [st, c] : brute) {
                    CHECK(t.count(st.first, st.second) == c);
                    seen += c;
                }
                CHECK(seen == t.total());
            }
        }
    }
}

TEST_CASE("count(0,0) at n=3 is 2") {
    CHECK(build_joint_table(3, 1, JointWeights::U).count(0, 0) == 2);
}

TEST_CASE("serialization round trip") {
    JointSumTable t = build_joint_table(9, 2, JointWeights::V);
    std::stringstream ss;
    t.serialize(ss);
    JointSumTable u = JointSumTable::deserialize(ss);
    CHECK(u.n == t.n);
    CHECK(u.N == t.N);
    CHECK(u.sum_all() == t.sum_all());
    for (long s = t.s_min; s <= t.s_max; ++s)
        for (long tt = t.t_min; tt <= t.t_max; ++tt) CHECK(u.count(s, tt) == t.count(s, tt));
}

TEST_CASE("double root probabilities at n=3") {
    DoubleRootResult r = double_root_prob_exact(3, 1);
    CHECK(r.p1 == mpq_class(1, 8));
    CHECK(r.pm1 == mpq_class(1, 8));
    CHECK(r.p_union == mpq_class(1, 4));
}

TEST_CASE("double root probability vanishes under the parity obstructions") {
    for (int n : {2, 4, 5, 6, 9, 10, 13}) {
        DoubleRootResult r = double_root_prob_exact(n, 1);
        bool obstructed = (n % 2 == 0) || (n % 4 == 1);
        CHECK((r.p_union == 0) == obstructed);
    }
}

TEST_CASE("union bounds and exhaustive cross-check at n=7") {
    // brute force double roots at +-1 over all 256 vectors
    int hits1 = 0, hitsm1 = 0, hitsu = 0;
    for (int mask = 0; mask < 256; ++mask) {
        long v1 = 0, d1 = 0, vm1 = 0, dm1 = 0;
        for (int i = 0; i < 8; ++i) {
            long c = (mask >> i) & 1 ? 1 : -1;
            v1 += c;
            d1 += i * c;
            vm1 += i % 2 == 0 ? c : -c;
            dm1 += i % 2 == 0 ? -i * c : i * c;
        }
        bool a = v1 == 0 && d1 == 0, b = vm1 == 0 && dm1 == 0;
        hits1 += a;
        hitsm1 += b;
        hitsu += a || b;
    }
    DoubleRootResult r = double_root_prob_exact(7, 1);
    auto frac = [](long a, long b) {
        mpq_class q(a, b);
        q.canonicalize();
        return q;
    };
    CHECK(r.p1 == frac(hits1, 256));
    CHECK(r.pm1 == frac(hitsm1, 256));
    CHECK(r.p_union == frac(hitsu, 256));
    CHECK(r.p1 > 0);
    // invariants: max(p1, pm1) <= p_union <= p1 + pm1
    CHECK(r.p_union >= r.p1);
    CHECK(r.p_union >= r.pm1);
    CHECK(r.p_union <= r.p1 + r.pm1);
}

TEST_CASE("sweep agrees with single builds") {
    auto sweep = double_root_prob_exact_sweep(12, 1);
    for (int n : {3, 7, 11, 12}) {
        DoubleRootResult one = double_root_prob_exact(n, 1);
        CHECK(sweep[n].p1 == one.p1);
        CHECK(sweep[n].pm1 == one.pm1);
        CHECK(sweep[n].p_union == one.p_union);
    }
}

TEST_CASE("parity certificates") {
    CHECK(parity_certificate(10, 1) == ParityCertificate::EvenParityObstruction);
    CHECK(parity_certificate(9, 1) == ParityCertificate::FourKPlusOneObstruction);
    CHECK(parity_certificate(7, 1) == ParityCertificate::Feasible);
    CHECK(double_root_prob_exact(7, 1).p1 > 0);
    // N >= 2: witness-backed; cross-check against the exact table
    for (int n : {2, 3, 4, 6, 10}) {
        CHECK(parity_certificate(n, 2) == ParityCertificate::Feasible);
        CHECK(double_root_prob_exact(n, 2).p1 > 0);
    }
    CHECK(parity_certificate(0, 2) == ParityCertificate::NoWitness);
    CHECK(parity_certificate(1, 2) == ParityCertificate::NoWitness);
    CHECK(double_root_prob_exact(1, 2).p1 == 0);
}

TEST_CASE("local-CLT approximation") {
    // covariance determinant example: n=3 -> D = 20, value 4/(2 pi sqrt(20))
    double v = double_root_prob_clt(3, 1);
    CHECK(v == doctest::Approx(4.0 / (2.0 * std::numbers::pi * std::sqrt(20.0))).epsilon(1e-12));
    CHECK(v == doctest::Approx(0.1424).epsilon(1e-3));
    CHECK(double_root_prob_exact(3, 1).p1.get_d() / v == doctest::Approx(0.878).epsilon(0.01));
    CHECK_THROWS_AS(double_root_prob_clt(10, 1), InfeasibleError);
    try {
        double_root_prob_clt(9, 1);
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.certificate()) == "FourKPlusOneObstruction");
    }
}

TEST_CASE("CLT tracks the exact probability in the admissible family") {
    for (int n : {39, 59, 79, 99}) {
        REQUIRE((n + 1) % 4 == 0);
        double exact = double_root_prob_exact(n, 1).p1.get_d();
        double approx = double_root_prob_clt(n, 1);
        CHECK(exact / approx > 0.9);
        CHECK(exact / approx < 1.1);
    }
}

TEST_CASE("anticoncentration sup") {
    JointSumTable t1 = build_joint_table(1, 1, JointWeights::U);
    auto sup1 = t1.sup();
    CHECK(sup1.count == 1); // all four outcomes distinct
    for (int n : {10, 20, 40}) {
        JointSumTable t = build_joint_table(n, 1, JointWeights::U);
        auto sup = t.sup();
        // symmetry of the attaining cell
        CHECK(t.count(-sup.s, -sup.t) == sup.count);
        // n^2 * sup bounded (consistent with the quadratic decay)
        mpq_class p(sup.count, t.total());
        p.canonicalize();
        CHECK(p.get_d() * n * n <= 30.0);
    }
}

TEST_CASE("smallball basics") {
    CHECK(smallball_prob(3, 1, mpq_class(1), mpq_class(0)) == mpq_class(3, 8));
    // delta >= sum |x|^i covers everything
    CHECK(smallball_prob(5, 1, mpq_class(1, 2), mpq_class(2)) == 1);
    // monotone in delta
    mpq_class x(4, 5);
    mpq_class prev = -1;
    for (int k = 10; k >= 1; --k) {
        mpq_class d(1, 1 << k);
        mpq_class p = smallball_prob(12, 1, x, d);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("smallball equals brute enumeration") {
    mpq_class x(3, 7), d(1, 9);
    int n = 8;
    // brute force over 512 vectors in exact rational arithmetic
    long hits = 0;
    for (int mask = 0; mask < (1 << (n + 1)); ++mask) {
        mpq_class s = 0, xp = 1;
        for (int i = 0; i <= n; ++i) {
            s += ((mask >> i) & 1 ? 1 : -1) * xp;
            xp *= x;
        }
        if (abs(s) <= d) ++hits;
    }
    mpq_class brute_p(hits, 1 << (n + 1));
    brute_p.canonicalize();
    CHECK(smallball_prob(n, 1, x, d) == brute_p);
    // N = 2 full-enumeration path
    mpq_class p2 = smallball_prob(4, 2, x, d);
    long hits2 = 0, total2 = 0;
    std::vector<int> dig(5, 0);
    for (;;) {
        mpq_class s = 0, xp = 1;
        for (int i = 0; i <= 4; ++i) {
            int dv = dig[i] < 2 ? dig[i] - 2 : dig[i] - 1;
            s += dv * xp;
            xp *= x;
        }
        ++total2;
        if (abs(s) <= d) ++hits2;
        int j = 0;
        while (j <= 4 && dig[j] == 3) dig[j++] = 0;
        if (j > 4) break;
        dig[j]++;
    }
    mpq_class brute_p2(hits2, total2);
    brute_p2.canonicalize();
    CHECK(p2 == brute_p2);
}

TEST_CASE("smallball decay exponent at the desk scale") {
    // log P / log delta >= 1.05 across the dyadic sweep (n=20, x=4/5)
    mpq_class x(4, 5);
    for (int k = 5; k <= 15; ++k) {
        mpq_class d(1, 1L << k);
        mpq_class p = smallball_prob(20, 1, x, d);
        REQUIRE(p > 0);
        double ratio = std::log(p.get_d()) / std::log(d.get_d());
        CHECK(ratio >= 1.05);
    }
}

TEST_CASE("smallball resource guard") {
    CHECK_THROWS_AS(smallball_prob(60, 1, mpq_class(1, 2), mpq_class(0)), ResourceError);
    CHECK_THROWS_AS(smallball_prob(30, 2, mpq_class(1, 2), mpq_class(0)), ResourceError);
}

TEST_CASE("lacunary parameter choice") {
    auto lp1 = choose_lacunary_params(mpq_class(4, 5), 1, 3, 100);
    CHECK(lp1.ell == 4); // 0.8^3 = 0.512 >= 1/2 > 0.8^4
    auto lp2 = choose_lacunary_params(mpq_class(9, 10), 2, 3, 100);
    CHECK(lp2.ell == 16); // 0.9^15 ~ 0.2059 >= 1/5 > 0.9^16
    // k maximality: x^(ell k) >= n^(-2A) > x^(ell (k+1))
    for (int A : {1, 2, 4}) {
        auto lp = choose_lacunary_params(mpq_class(4, 5), 1, A, 50);
        double le = lp.ell * std::log(0.8);
        double target = -2.0 * A * std::log(50.0);
        CHECK(lp.k * le >= target - 1e-9);
        CHECK((lp.k + 1) * le < target + 1e-9);
    }
}

TEST_CASE("separation claim1") {
    SeparationResult r1 = separation_check(SeparationVariant::Claim1, mpq_class(4, 5), 1, 1);
    CHECK(r1.pass);
    CHECK(r1.set_size == 2);
    mpq_class x45(4, 5);
    mpq_class x4 = x45 * x45 * x45 * x45;
    CHECK(r1.min_gap == 2 * x4); // exactly the radius at k=1
    CHECK(r1.min_gap == r1.bound);

    SeparationResult r3 = separation_check(SeparationVariant::Claim1, mpq_class(4, 5), 1, 3);
    CHECK(r3.ell == 4);
    CHECK(r3.pass);
    CHECK(r3.min_gap == r3.bound); // pass with equality: 2 x^12
    CHECK(std::fabs(r3.min_gap.get_d() - 0.13744) <= 1e-4);
}

TEST_CASE("separation claim2") {
    SeparationResult r = separation_check(SeparationVariant::Claim2, mpq_class(33, 64), 1, 6);
    CHECK(r.pass);
    CHECK(r.set_size == (1u << 8)); // k+1 even slots + floor(k/8)+1 odd slots
    // out-of-range x reports a reason instead of asserting
    SeparationResult bad = separation_check(SeparationVariant::Claim2, mpq_class(3, 5), 1, 4);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.reason.empty());
}

TEST_CASE("separation uniform") {
    SeparationResult r = separation_check(SeparationVariant::Uniform, mpq_class(9, 10), 2, 4);
    CHECK(r.ell == 16);
    CHECK(r.set_size == 256);
    CHECK(r.pass); // min gap >= x^64
    // brute-force the min gap over all 256 vectors
    mpq_class x(9, 10);
    std::vector<mpq_class> vals;
    for (int mask = 0; mask < 256; ++mask) {
        mpq_class s = 0;
        int mm = mask;
        for (int j = 1; j <= 4; ++j) {
            int d = mm % 4;
            mm /= 4;
            int v = d < 2 ? d - 2 : d - 1;
            mpq_class xp = 1;
            for (int e = 0; e < 16 * j; ++e) xp *= x;
            s += v * xp;
        }
        vals.push_back(s);
    }
    std::sort(vals.begin(), vals.end());
    mpq_class mg = vals[1] - vals[0];
    for (std::size_t i = 2; i < vals.size(); ++i) mg = std::min(mg, mpq_class(vals[i] - vals[i - 1]));
    CHECK(r.min_gap == mg);
}

TEST_CASE("resource guards surface as ResourceError") {
    CHECK_THROWS_AS(separation_check(SeparationVariant::Claim1, mpq_class(4, 5), 1, 23), ResourceError);
    JointGuard tiny;
    tiny.max_cells = 10;
    CHECK_THROWS_AS(build_joint_table(50, 1, JointWeights::U, tiny), ResourceError);
}

TEST_CASE("anticonc_sup operation and the quadratic-decay sweep") {
    CHECK(anticonc_sup(1, 1, JointWeights::U) == mpq_class(1, 4));
    // n^2 sup stays bounded along the sweep (sampled every 10 degrees)
    JointTableBuilder b(1, JointWeights::U);
    for (int i = 0; i <= 200; ++i) {
        b.absorb(i);
        if (i >= 10 && i % 10 == 0) {
            const JointSumTable& t = b.table();
            mpq_class p(t.sup().count, t.total());
            p.canonicalize();
            CHECK(p.get_d() * i * i <= 30.0);
        }
    }
}

TEST_CASE("pm1 equals the brute-force -1 event count (reversal/negation bijection)") {
    // n = 11 is the witness that the V-table cell (0,0) is NOT pm1
    for (int n : {3, 7, 11, 13}) {
        long brute_pm1 = 0;
        for (long mask = 0; mask < (1L << (n + 1)); ++mask) {
            long vm1 = 0, dm1 = 0;
            for (int i = 0; i <= n; ++i) {
                long c = (mask >> i) & 1 ? 1 : -1;
                vm1 += (i % 2 == 0) ? c : -c;
                dm1 += (i % 2 == 0) ? -(long)i * c : (long)i * c;
            }
            brute_pm1 += vm1 == 0 && dm1 == 0;
        }
        mpq_class expect(brute_pm1, 1L << (n + 1));
        expect.canonicalize();
        DoubleRootResult r = double_root_prob_exact(n, 1);
        CHECK(r.pm1 == expect);
        CHECK(r.p1 == r.pm1);
    }
    auto sweep2 = double_root_prob_exact_sweep(20, 2);
    for (int n = 0; n <= 20; ++n) CHECK(sweep2[n].p1 == sweep2[n].pm1);
}

TEST_CASE("joint table file cache round trip") {
    JointSumTable t = build_joint_table(15, 1, JointWeights::U);
    std::string dir = "exact_scratch";
    std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
    save_joint_table(t, dir);
    JointSumTable u = load_joint_table(dir, 15, 1, JointWeights::U);
    CHECK(u.count(0, 0) == t.count(0, 0));
    CHECK(u.sum_all() == t.total());
    CHECK_THROWS(load_joint_table(dir, 16, 1, JointWeights::U));
}
