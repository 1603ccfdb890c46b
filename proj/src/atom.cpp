#include "kacroots/atom.hpp"

#include <numeric>
#include <stdexcept>

namespace kac {

Atom Atom::type_i(int N) {
    if (N < 1) throw std::invalid_argument("TypeI atom requires N >= 1");
    Atom a;
    a.kind = AtomKind::TypeI;
    a.N = N;
    a.label = N == 1 ? "bernoulli" : "typeI:" + std::to_string(N);
    return a;
}

Atom Atom::gaussian() {
    Atom a;
    a.kind = AtomKind::Gaussian;
    a.label = "gaussian";
    return a;
}

Atom Atom::uniform_continuous() {
    Atom a;
    a.kind = AtomKind::UniformContinuous;
    a.density_p = 2.0; // bounded density, any p works; recorded for reference
    a.label = "uniform";
    return a;
}

Atom Atom::custom_discrete(std::vector<long> values, std::vector<std::uint64_t> weights) {
    if (values.empty() || values.size() != weights.size())
        throw std::invalid_argument("custom atom: values/weights size mismatch");
    Atom a;
    a.kind = AtomKind::CustomDiscrete;
    a.values = std::move(values);
    a.weights = std::move(weights);
    a.label = "custom";
    // zero excluded from support, mean zero
    mpz_class m = 0, w = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (a.values[i] == 0) throw std::invalid_argument("custom atom: zero in support");
        if (a.weights[i] == 0) throw std::invalid_argument("custom atom: zero weight");
        m += mpz_class(a.values[i]) * mpz_class(static_cast<unsigned long>(a.weights[i]));
        w += mpz_class(static_cast<unsigned long>(a.weights[i]));
    }
    if (m != 0) throw std::invalid_argument("custom atom: mean must be zero");
    return a;
}

mpq_class Atom::mean_exact() const {
    return mpq_class(0); // all supported atoms are centered
}

mpq_class Atom::variance_exact() const {
    switch (kind) {
    case AtomKind::TypeI: {
        mpq_class v(mpz_class(N + 1) * mpz_class(2 * N + 1), 6);
        v.canonicalize();
        return v;
    }
    case AtomKind::Gaussian:
    case AtomKind::UniformContinuous:
        return mpq_class(1);
    case AtomKind::CustomDiscrete: {
        mpz_class s2 = 0, w = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            s2 += mpz_class(values[i]) * mpz_class(values[i]) * mpz_class(static_cast<unsigned long>(weights[i]));
            w += mpz_class(static_cast<unsigned long>(weights[i]));
        }
        mpq_class v(s2, w);
        v.canonicalize();
        return v;
    }
    }
    return 0;
}

long sample_discrete(const Atom& atom, const CounterRng& rng, std::uint64_t counter) {
    if (atom.kind == AtomKind::TypeI) {
        std::uint64_t r = rng.uniform_below(counter, static_cast<std::uint64_t>(2 * atom.N));
        long m = static_cast<long>(r);
        return m < atom.N ? m + 1 : -(m - atom.N + 1);
    }
    // custom: pick by cumulative weight
    std::uint64_t total = std::accumulate(atom.weights.begin(), atom.weights.end(), std::uint64_t{0});
    std::uint64_t r = rng.uniform_below(counter, total);
    for (std::size_t i = 0; i < atom.values.size(); ++i) {
        if (r < atom.weights[i]) return atom.values[i];
        r -= atom.weights[i];
    }
    return atom.values.back();
}

double sample_continuous(const Atom& atom, const CounterRng& rng, std::uint64_t counter) {
    if (atom.kind == AtomKind::Gaussian) return rng.gaussian(counter);
    // uniform on [-sqrt(3), sqrt(3)] so the variance is exactly 1
    return (2.0 * rng.unit_open(counter) - 1.0) * 1.7320508075688772935;
}

SampledPoly sample_poly(const Atom& atom, int n, const RngSpec& spec) {
    if (n < 0) throw std::invalid_argument("sample_poly: n >= 0 required");
    CounterRng rng(spec.seed, spec.trial);
    if (atom.discrete()) {
        IntPoly p;
        p.coeffs.reserve(n + 1);
        for (int i = 0; i <= n; ++i)
            p.coeffs.emplace_back(sample_discrete(atom, rng, spec.counter + static_cast<std::uint64_t>(i)));
        return p;
    }
    RealPoly p;
    p.coeffs.reserve(n + 1);
    for (int i = 0; i <= n; ++i)
        p.coeffs.push_back(sample_continuous(atom, rng, spec.counter + static_cast<std::uint64_t>(i)));
    return p;
}

Atom parse_atom(const std::string& text) {
    if (text == "bernoulli") return Atom::bernoulli();
    if (text == "gaussian") return Atom::gaussian();
    if (text == "uniform") return Atom::uniform_continuous();
    if (text.rfind("typeI:", 0) == 0 || text.rfind("typei:", 0) == 0) {
        int N = std::stoi(text.substr(6));
        return Atom::type_i(N);
    }
    throw std::invalid_argument("unknown atom '" + text + "' (expected bernoulli|typeI:N|gaussian|uniform)");
}

} // namespace kac
