#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kacroots/dd.hpp"
#include "kacroots/ek.hpp"

using namespace kac;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("density at t=0 is 1/pi") {
    for (int n : {1, 2, 10, 1000}) CHECK(ek_density(n, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("n=1 density is the Cauchy density") {
    // algebraic simplification: rho_1(t) = 1 / (pi (1 + t^2))
    for (double t : {0.0, 0.3, 0.9, 0.999, 1.0, 1.001, 2.0, 5.0}) {
        double expect = 1.0 / (kPi * (1.0 + t * t));
        CHECK(ek_density(1, t) == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(ek_density(1, 2.0) == doctest::Approx(1.0 / (5.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("value at t=1 equals the two-sided numeric limit") {
    for (int n : {2, 10, 100}) {
        double at1 = ek_density(n, 1.0);
        // two-sided limit oracle at shrinking h
        double h = 1e-6 / n;
        double lim = 0.5 * (ek_density(n, 1.0 - 4 * h) + ek_density(n, 1.0 + 4 * h));
        double lim2 = 0.5 * (ek_density(n, 1.0 - 2 * h) + ek_density(n, 1.0 + 2 * h));
        double extrap = lim2 + (lim2 - lim) / 3.0; // Richardson on the even error
        CHECK(at1 == doctest::Approx(extrap).epsilon(1e-8));
    }
}

TEST_CASE("density is even and 1/t-symmetric") {
    // change-of-variables symmetry: rho(1/t) = t^2 rho(t); this is what makes
    // the (1,inf) integral equal the (0,1) one (checked on the Cauchy n=1 form)
    for (int n : {3, 17}) {
        for (double t : {0.1, 0.5, 0.77, 0.93}) {
            CHECK(std::fabs(ek_density(n, t) - ek_density(n, -t)) <= 1e-12);
            CHECK(ek_density(n, 1.0 / t) == doctest::Approx(t * t * ek_density(n, t)).epsilon(1e-10));
        }
    }
}

TEST_CASE("pointwise limit 1/(pi(1-t^2)) in the bulk") {
    double target = 1.0 / (kPi * 0.75);
    for (int n : {100, 400, 2000}) {
        CHECK(std::fabs(ek_density(n, 0.5) - target) <= 1e-6);
    }
}

TEST_CASE("whole-line expectation for n=1 is exactly 1") {
    QuadResult qr = ek_expected(1);
    CHECK(qr.error_estimate <= 1e-10);
    CHECK(std::fabs(qr.value - 1.0) <= 1e-10);
}

TEST_CASE("whole line computed directly equals folded computation") {
    for (int n : {5, 60}) {
        QuadResult folded = ek_expected(n);
        // direct: [-T, T] plus an analytic tail bound 2/(pi T) * (1+o(1))
        double T = 1e6;
        QuadResult direct = ek_expected(n, std::make_pair(-T, T), 1e-9);
        double tail = 2.0 / (kPi * T);
        CHECK(std::fabs(folded.value - (direct.value + tail)) <=
              folded.error_estimate + direct.error_estimate + 3e-6);
    }
}

TEST_CASE("residual converges to the Gaussian constant") {
    double r4 = ek_residual(10000);
    CHECK(std::fabs(r4 - kGaussianResidual) <= 1e-2);
    // successive differences decreasing
    double d1 = std::fabs(ek_residual(100) - ek_residual(1000));
    double d2 = std::fabs(ek_residual(1000) - ek_residual(10000));
    CHECK(d2 < d1);
}

TEST_CASE("residual diagnostic: residual(n) - residual(2n) shrinks") {
    double a = std::fabs(ek_residual(1000) - ek_residual(2000));
    double b = std::fabs(ek_residual(2000) - ek_residual(4000));
    double c = std::fabs(ek_residual(4000) - ek_residual(8000));
    CHECK(b < a);
    CHECK(c < b);
}

TEST_CASE("degenerate anchor n=1") {
    CHECK(ek_residual(1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tail integral closed form") {
    TailResult t2 = ek_limit_tail(2.0);
    CHECK(t2.integral == doctest::Approx(std::atanh(0.5) / kPi).epsilon(1e-14));
    CHECK(t2.integral == doctest::Approx(0.17490).epsilon(1e-4));
    // C0 -> 1+ limit
    CHECK(std::fabs(ek_limit_tail(1.0 + 1e-9).integral) <= 1e-9);
    // quadrature cross-check of the closed form
    auto f = [](double t) { return 1.0 / (kPi * (1.0 - t * t)); };
    double sum = 0.0;
    int N = 200000;
    double b = 1.0 - 1.0 / 2.0;
    for (int i = 0; i < N; ++i) {
        double x = (i + 0.5) * b / N;
        sum += f(x) * b / N;
    }
    CHECK(t2.integral == doctest::Approx(sum).epsilon(1e-6));
}

TEST_CASE("restricted expectation approaches the tail integral") {
    // lim_n E N_n[0, 1-1/C0) equals the closed-form integral
    double C0 = 4.0;
    QuadResult qr = ek_expected(100000, std::make_pair(0.0, 1.0 - 1.0 / C0));
    CHECK(std::fabs(qr.value - ek_limit_tail(C0).integral) <= 1e-3);
}

TEST_CASE("bounded by (1/2pi) log C0 + N2 across C0") {
    // fixed N2 = 0.5 works across the whole sweep
    const double N2 = 0.5;
    for (double C0 : {2.0, 4.0, 8.0, 16.0}) {
        QuadResult qr = ek_expected(10000, std::make_pair(0.0, 1.0 - 1.0 / C0));
        CHECK(qr.value <= (1.0 / (2.0 * kPi)) * std::log(C0) + N2);
    }
}

TEST_CASE("double-double arithmetic sanity") {
    dd a(1.0, 0.0);
    dd b = dd_div(a, dd(3.0));
    dd c = dd_mul(b, dd(3.0));
    CHECK(std::fabs(static_cast<double>(dd_sub(c, a))) <= 1e-30);
    dd r = dd_sqrt(dd(2.0));
    CHECK(std::fabs(static_cast<double>(dd_sub(dd_mul(r, r), dd(2.0)))) <= 1e-30);
    CHECK(static_cast<double>(dd_powi(dd(0.5), 10)) == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-15));
}
