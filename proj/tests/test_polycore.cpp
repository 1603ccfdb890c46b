#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "kacroots/atom.hpp"
#include "kacroots/poly.hpp"
#include "kacroots/rng.hpp"

using namespace kac;

namespace {

IntPoly ipoly(std::initializer_list<long> cs) {
    IntPoly p;
    for (long c : cs) p.coeffs.emplace_back(c);
    return p;
}

} // namespace

TEST_CASE("TypeI(1) samples stay in support") {
    auto sp = sample_poly(Atom::bernoulli(), 3, {42, 0, 0});
    const auto& p = std::get<IntPoly>(sp);
    REQUIRE(p.coeffs.size() == 4);
    for (const auto& c : p.coeffs) CHECK((c == 1 || c == -1));
}

TEST_CASE("TypeI(2) empirical frequencies match 1/4") {
    const int M = 1'000'000;
    Atom atom = Atom::type_i(2);
    CounterRng rng(1234, 0);
    std::map<long, int> freq;
    for (int i = 0; i < M; ++i) freq[sample_discrete(atom, rng, i)]++;
    REQUIRE(freq.size() == 4);
    const double tol = 4.0 * std::sqrt(3.0 / 16.0 * 1e-6);
    for (long v : {-2L, -1L, 1L, 2L}) {
        double f = freq[v] / static_cast<double>(M);
        CHECK(std::fabs(f - 0.25) <= tol);
    }
}

TEST_CASE("sampling is a pure function of (seed, trial)") {
    auto a = sample_poly(Atom::bernoulli(), 50, {7, 5, 0});
    auto b = sample_poly(Atom::bernoulli(), 50, {7, 5, 0});
    auto c = sample_poly(Atom::bernoulli(), 50, {7, 6, 0});
    CHECK(std::get<IntPoly>(a).coeffs == std::get<IntPoly>(b).coeffs);
    CHECK(std::get<IntPoly>(a).coeffs != std::get<IntPoly>(c).coeffs);

    auto g1 = sample_poly(Atom::gaussian(), 50, {7, 5, 0});
    auto g2 = sample_poly(Atom::gaussian(), 50, {7, 5, 0});
    CHECK(std::get<RealPoly>(g1).coeffs == std::get<RealPoly>(g2).coeffs);
}

TEST_CASE("evaluate basics") {
    IntPoly p = ipoly({1, 1, 1});
    CHECK(evaluate(p, 1.0, EvalMode::Standard) == 3.0);
    CHECK(evaluate(ipoly({1, -1}), 1.0, EvalMode::Standard) == 0.0);
    RealPoly rp{{1.0, 2.0}};
    CHECK_THROWS_AS(evaluate(rp, 0.5, EvalMode::ExactRational), std::invalid_argument);
}

TEST_CASE("compensated Horner matches the exact-rational oracle near 1") {
    for (int trial = 0; trial < 50; ++trial) {
        auto sp = sample_poly(Atom::bernoulli(), 20, {99, static_cast<std::uint64_t>(trial), 0});
        const auto& p = std::get<IntPoly>(sp);
        double x = 0.999;
        auto cert = horner_compensated(to_real(p).coeffs, x);
        mpq_class exact = evaluate_exact(p, mpq_class(x));
        double ex = exact.get_d();
        if (std::fabs(ex) > 1e-300) {
            CHECK(std::fabs(cert.value - ex) <= 1e-12 * std::fabs(ex) + 1e-300);
            // the certified bound is against the true value, so compare exactly
            mpq_class diff = abs(mpq_class(cert.value) - exact);
            CHECK(diff <= mpq_class(cert.err));
        }
    }
}

TEST_CASE("transforms") {
    CHECK(transform(ipoly({1, 2, 3}), PolyTransform::Derivative).coeffs == ipoly({2, 6}).coeffs);
    CHECK(transform(ipoly({1, 2, 3}), PolyTransform::Reciprocal).coeffs == ipoly({3, 2, 1}).coeffs);
    CHECK(transform(ipoly({1, 2, 3}), PolyTransform::NegateArg).coeffs == ipoly({1, -2, 3}).coeffs);
    // derivative of a constant is the zero polynomial of degree 0
    CHECK(transform(ipoly({5}), PolyTransform::Derivative).coeffs == ipoly({0}).coeffs);
}

TEST_CASE("transform involutions and evaluation identities") {
    for (int trial = 0; trial < 20; ++trial) {
        auto sp = sample_poly(Atom::type_i(3), 9, {5, static_cast<std::uint64_t>(trial), 0});
        const auto& p = std::get<IntPoly>(sp);
        auto rr = transform(transform(p, PolyTransform::Reciprocal), PolyTransform::Reciprocal);
        CHECK(rr.coeffs == p.coeffs); // a0, an != 0 for TypeI samples
        auto nn = transform(transform(p, PolyTransform::NegateArg), PolyTransform::NegateArg);
        CHECK(nn.coeffs == p.coeffs);

        mpq_class x(3, 7);
        mpq_class lhs = evaluate_exact(transform(p, PolyTransform::Reciprocal), x);
        mpq_class xn = 1;
        for (int i = 0; i < p.degree(); ++i) xn *= x;
        mpq_class rhs = xn * evaluate_exact(p, mpq_class(1) / x);
        CHECK(lhs == rhs);

        mpq_class lhs2 = evaluate_exact(transform(p, PolyTransform::NegateArg), x);
        mpq_class rhs2 = evaluate_exact(p, mpq_class(-x));
        CHECK(lhs2 == rhs2);
    }
}

TEST_CASE("atom moments") {
    CHECK(Atom::bernoulli().variance_exact() == 1);
    CHECK(Atom::type_i(2).variance_exact() == mpq_class(5, 2));
    CHECK(Atom::gaussian().variance_exact() == 1);
    CHECK(Atom::bernoulli().mean_exact() == 0);
    // direct summation over the support for N = 2
    mpq_class s2 = 0;
    for (long v : {-2L, -1L, 1L, 2L}) s2 += mpq_class(v * v, 4);
    CHECK(s2 == Atom::type_i(2).variance_exact());
}

TEST_CASE("empirical atom moments within 5 standard errors") {
    const int M = 1'000'000;
    struct Case { Atom atom; };
    for (const Atom& atom : {Atom::type_i(2), Atom::gaussian(), Atom::uniform_continuous()}) {
        CounterRng rng(2024, 9);
        double sum = 0, sum2 = 0;
        for (int i = 0; i < M; ++i) {
            double v = atom.discrete() ? static_cast<double>(sample_discrete(atom, rng, i))
                                       : sample_continuous(atom, rng, i);
            sum += v;
            sum2 += v * v;
        }
        double mean = sum / M;
        double var = sum2 / M - mean * mean;
        double v0 = atom.variance();
        double se_mean = std::sqrt(v0 / M);
        CHECK(std::fabs(mean - 0.0) <= 5 * se_mean);
        // se of the sample variance ~ sqrt((m4 - var^2)/M); a crude gaussian-scale
        // proxy 2*var/sqrt(M) covers all three atoms comfortably at 5 sigma
        CHECK(std::fabs(var - v0) <= 5 * 2.0 * v0 / std::sqrt(static_cast<double>(M)));
    }
}

TEST_CASE("parse_atom") {
    CHECK(parse_atom("bernoulli").N == 1);
    CHECK(parse_atom("typeI:3").N == 3);
    CHECK(parse_atom("gaussian").kind == AtomKind::Gaussian);
    CHECK(parse_atom("uniform").kind == AtomKind::UniformContinuous);
    CHECK_THROWS(parse_atom("cauchy"));
}
