#include "kacroots/poly.hpp"

#include <cmath>
#include <limits>

namespace kac {

double horner(std::span<const double> coeffs, double x) {
    double s = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) s = s * x + coeffs[i];
    return s;
}

namespace {

inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    double v = s - a;
    e = (a - (s - v)) + (b - v);
}

inline void two_prod(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

} // namespace

EvalCert horner_compensated(std::span<const double> coeffs, double x) {
    // Graillat-Langlois-Louvet compensated scheme.  The correction term is
    // accumulated exactly enough that the result behaves like Horner run in
    // twice the working precision.
    const std::size_t n = coeffs.size();
    if (n == 0) return {0.0, 0.0};
    double s = coeffs[n - 1];
    double comp = 0.0;
    double amag = std::fabs(coeffs[n - 1]); // Horner on |a_i|, |x|
    const double ax = std::fabs(x);
    for (std::size_t i = n - 1; i-- > 0;) {
        double p, pi, sig;
        two_prod(s, x, p, pi);
        two_sum(p, coeffs[i], s, sig);
        comp = comp * x + (pi + sig);
        amag = amag * ax + std::fabs(coeffs[i]);
    }
    double val = s + comp;
    // Bound from the compensated-Horner analysis: u|p(x)| + gamma_{2n}^2 p~(|x|),
    // with |p(x)| replaced by the computed value plus slack.
    const double u = 0x1p-53;
    double g = 2.0 * static_cast<double>(n) * u;
    double gamma2 = (g / (1.0 - g)) * (g / (1.0 - g));
    double err = u * std::fabs(val) + 1.25 * gamma2 * amag + std::numeric_limits<double>::min();
    return {val, err};
}

mpq_class eval_exact(const IntPoly& p, const mpq_class& x) {
    mpq_class s = 0;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        s = s * x + mpq_class(p.coeffs[i]);
    }
    return s;
}

mpz_class eval_scaled(const IntPoly& p, const mpz_class& a, const mpz_class& b) {
    // s = sum a_i * x^i * b^n = Horner with a step-wise power of b
    if (p.coeffs.empty()) return 0;
    mpz_class s = p.coeffs.back();
    mpz_class bp = 1;
    for (std::size_t i = p.coeffs.size() - 1; i-- > 0;) {
        bp *= b;
        s = s * a + p.coeffs[i] * bp;
    }
    return s;
}

double evaluate(const RealPoly& p, double x, EvalMode mode) {
    switch (mode) {
    case EvalMode::Standard: return horner(p.coeffs, x);
    case EvalMode::Compensated: return horner_compensated(p.coeffs, x).value;
    case EvalMode::ExactRational:
        throw std::invalid_argument("evaluate: exact-rational mode requires integer coefficients");
    }
    return 0.0;
}

double evaluate(const IntPoly& p, double x, EvalMode mode) {
    if (mode == EvalMode::ExactRational) {
        mpq_class xq(x);
        return evaluate_exact(p, xq).get_d();
    }
    return evaluate(to_real(p), x, mode);
}

mpq_class evaluate_exact(const IntPoly& p, const mpq_class& x) {
    return eval_exact(p, x);
}

} // namespace kac
