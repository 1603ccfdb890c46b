#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kacroots/poly.hpp"
#include "kacroots/rng.hpp"

namespace kac {

enum class AtomKind { TypeI, Gaussian, UniformContinuous, CustomDiscrete };

// Coefficient distribution of the random polynomial.  TypeI(N) is uniform on
// {+-1,...,+-N}; Bernoulli is TypeI(1).  Continuous atoms are normalized to
// unit variance (the uniform one has half-width sqrt(3)).
struct Atom {
    AtomKind kind = AtomKind::TypeI;
    int N = 1; // TypeI parameter

    // CustomDiscrete: integer values with relative integer weights.
    std::vector<long> values;
    std::vector<std::uint64_t> weights;

    // Type II metadata, carried but never used computationally.
    std::optional<double> density_p;
    std::optional<double> moment_eps;

    std::string label;

    static Atom type_i(int N);
    static Atom bernoulli() { return type_i(1); }
    static Atom gaussian();
    static Atom uniform_continuous();
    static Atom custom_discrete(std::vector<long> values, std::vector<std::uint64_t> weights);

    bool discrete() const { return kind == AtomKind::TypeI || kind == AtomKind::CustomDiscrete; }

    // Exact moments.  TypeI variance is (N+1)(2N+1)/6.
    mpq_class mean_exact() const;
    mpq_class variance_exact() const;
    double variance() const { return variance_exact().get_d(); }
};

// n+1 iid draws; exact-integer variant for discrete atoms.  Bit-identical
// output for identical (atom, n, seed, trial).
SampledPoly sample_poly(const Atom& atom, int n, const RngSpec& rng);

// Single draw helpers (draw index = rng.counter).
long sample_discrete(const Atom& atom, const CounterRng& rng, std::uint64_t counter);
double sample_continuous(const Atom& atom, const CounterRng& rng, std::uint64_t counter);

Atom parse_atom(const std::string& text); // "bernoulli" | "typeI:N" | "gaussian" | "uniform"

} // namespace kac
