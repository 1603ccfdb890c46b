#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace kac {

// Coefficients in ascending power order; degree == coeffs.size() - 1.
// Transforms never strip zeros, so the storage degree is the nominal n.
template <class T>
struct Poly {
    std::vector<T> coeffs;

    Poly() = default;
    explicit Poly(std::vector<T> c) : coeffs(std::move(c)) {}

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool empty() const { return coeffs.empty(); }
};

using IntPoly = Poly<mpz_class>;
using RealPoly = Poly<double>;

// A sampled polynomial is exact-integer for discrete atoms and floating for
// continuous ones.
using SampledPoly = std::variant<IntPoly, RealPoly>;

enum class PolyTransform { Derivative, Reciprocal, NegateArg };

template <class T>
Poly<T> transform(const Poly<T>& p, PolyTransform kind) {
    Poly<T> out;
    const auto& c = p.coeffs;
    switch (kind) {
    case PolyTransform::Derivative:
        if (c.size() <= 1) {
            out.coeffs.assign(1, T(0));
        } else {
            out.coeffs.reserve(c.size() - 1);
            for (std::size_t i = 1; i < c.size(); ++i) out.coeffs.push_back(c[i] * T(static_cast<long>(i)));
        }
        break;
    case PolyTransform::Reciprocal:
        out.coeffs.assign(c.rbegin(), c.rend());
        break;
    case PolyTransform::NegateArg:
        out.coeffs = c;
        for (std::size_t i = 1; i < out.coeffs.size(); i += 2) out.coeffs[i] = -out.coeffs[i];
        break;
    }
    return out;
}

inline RealPoly to_real(const IntPoly& p) {
    RealPoly out;
    out.coeffs.reserve(p.coeffs.size());
    for (const auto& c : p.coeffs) out.coeffs.push_back(c.get_d());
    return out;
}

inline RealPoly to_real(const SampledPoly& p) {
    if (const auto* ip = std::get_if<IntPoly>(&p)) return to_real(*ip);
    return std::get<RealPoly>(p);
}

// --- evaluation -------------------------------------------------------------

double horner(std::span<const double> coeffs, double x);

// Compensated Horner (error-free transformations) with a certified running
// absolute error bound: |value - p(x)| <= err.
struct EvalCert {
    double value = 0.0;
    double err = 0.0;
    bool sign_certified() const { return value > err || value < -err; }
    int sign() const { return value > err ? 1 : (value < -err ? -1 : 0); }
};

EvalCert horner_compensated(std::span<const double> coeffs, double x);

// Exact evaluation of an integer polynomial at a rational point.
mpq_class eval_exact(const IntPoly& p, const mpq_class& x);

// q^n * p(a/b) as an exact integer, where x = a/b (b > 0).  Shares the sign
// of p(a/b); this is the workhorse for exact sign queries.
mpz_class eval_scaled(const IntPoly& p, const mpz_class& a, const mpz_class& b);

enum class EvalMode { Standard, Compensated, ExactRational };

// Public evaluate() of the spec.  ExactRational on float coefficients is a
// mode mismatch.
double evaluate(const RealPoly& p, double x, EvalMode mode);
double evaluate(const IntPoly& p, double x, EvalMode mode);
mpq_class evaluate_exact(const IntPoly& p, const mpq_class& x);

} // namespace kac
