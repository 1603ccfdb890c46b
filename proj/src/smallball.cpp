#include "kacroots/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kac {

namespace {

using int128 = __int128;

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

bool fits_int128(const mpz_class& bound) {
    static const mpz_class lim = (mpz_class(1) << 126);
    return bound < lim;
}

int128 to_int128(const mpz_class& v) {
    // |v| < 2^126 assumed
    mpz_class a = abs(v);
    std::uint64_t lo = mpz_class(a & mpz_class(0xFFFFFFFFFFFFFFFFul)).get_ui();
    std::uint64_t hi = mpz_class(a >> 64).get_ui();
    int128 r = (static_cast<int128>(hi) << 64) | static_cast<int128>(lo);
    return sgn(v) < 0 ? -r : r;
}

// All signed sums over the given scaled terms with signs in {+-1..+-N},
// enumerated by an odometer with incremental updates.
template <class Int>
void enumerate_sums(const std::vector<Int>& terms, int N, std::vector<Int>& out) {
    const std::size_t k = terms.size();
    std::vector<int> digit(k, 0); // 0..2N-1 -> value -N..-1, 1..N
    auto value_of = [N](int d) { return d < N ? d - N : d - N + 1; };
    Int sum = 0;
    for (std::size_t j = 0; j < k; ++j) sum += Int(value_of(0)) * terms[j];
    for (;;) {
        out.push_back(sum);
        std::size_t j = 0;
        for (; j < k; ++j) {
            if (digit[j] + 1 < 2 * N) {
                sum += Int(value_of(digit[j] + 1) - value_of(digit[j])) * terms[j];
                ++digit[j];
                break;
            }
            sum += Int(value_of(0) - value_of(digit[j])) * terms[j];
            digit[j] = 0;
        }
        if (j == k) break;
    }
}

template <class Int>
mpz_class count_window_pairs(std::vector<Int>& a, std::vector<Int>& b, const Int& K) {
    std::sort(b.begin(), b.end());
    mpz_class count = 0;
    for (const Int& v : a) {
        auto lo = std::lower_bound(b.begin(), b.end(), -K - v);
        auto hi = std::upper_bound(b.begin(), b.end(), K - v);
        count += static_cast<unsigned long>(hi - lo);
    }
    return count;
}

} // namespace

mpq_class smallball_prob(int n, int N, const mpq_class& x, const mpq_class& delta) {
    if (n < 0 || N < 1) throw std::invalid_argument("smallball_prob: n >= 0, N >= 1");
    if (delta < 0) throw std::invalid_argument("smallball_prob: delta >= 0");
    const int m = n + 1;
    // guards per the resource contract
    bool mitm_ok = (N == 1 && n <= 50);
    double log2_total = m * std::log2(2.0 * N);
    bool full_ok = log2_total <= 24.0;
    if (!mitm_ok && !full_ok)
        throw ResourceError("smallball_prob: enumeration guard exceeded (N=1 needs n <= 50, "
                            "otherwise (2N)^(n+1) <= 2^24)");

    mpq_class xc = x;
    xc.canonicalize();
    const mpz_class p = xc.get_num(), q = xc.get_den();
    // scaled terms p^i q^(n-i)
    std::vector<mpz_class> terms(m);
    for (int i = 0; i < m; ++i) terms[i] = pow_mpz(p, i) * pow_mpz(q, n - i);
    // threshold K = floor(delta * q^n)
    mpq_class dq = delta;
    dq.canonicalize();
    mpz_class K = (dq.get_num() * pow_mpz(q, n)) / dq.get_den();

    // value bound for the int128 fast path
    mpz_class bound = 0;
    for (const auto& t : terms) bound += abs(t);
    bound *= N;

    const int h = m / 2;
    std::vector<mpz_class> lo_terms(terms.begin(), terms.begin() + h);
    std::vector<mpz_class> hi_terms(terms.begin() + h, terms.end());

    mpz_class count;
    if (fits_int128(bound)) {
        std::vector<int128> lt, ht;
        for (const auto& t : lo_terms) lt.push_back(to_int128(t));
        for (const auto& t : hi_terms) ht.push_back(to_int128(t));
        std::vector<int128> a, b;
        a.reserve(std::size_t(1) << (h > 0 ? h : 0));
        enumerate_sums(lt, N, a);
        enumerate_sums(ht, N, b);
        count = count_window_pairs(a, b, to_int128(K));
    } else {
        std::vector<mpz_class> a, b;
        enumerate_sums(lo_terms, N, a);
        enumerate_sums(hi_terms, N, b);
        count = count_window_pairs(a, b, K);
    }

    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(2 * N), static_cast<unsigned long>(m));
    mpq_class prob(count, total);
    prob.canonicalize();
    return prob;
}

namespace {

// exact comparison x^e vs a/b for positive rationals
int cmp_pow(const mpz_class& p, const mpz_class& q, long e, const mpz_class& a, const mpz_class& b) {
    // p^e * b  <=>  a * q^e
    mpz_class lhs = pow_mpz(p, e) * b;
    mpz_class rhs = pow_mpz(q, e) * a;
    return cmp(lhs, rhs);
}

} // namespace

LacunaryParams choose_lacunary_params(const mpq_class& x, int N, int A, long n) {
    if (N < 1 || A < 1 || n < 1) throw std::invalid_argument("choose_lacunary_params: N, A, n >= 1");
    mpq_class xc = x;
    xc.canonicalize();
    if (!(xc > 0 && xc < 1)) throw std::invalid_argument("choose_lacunary_params: x in (0,1) required");
    mpq_class lo_lim(1, N + 1);
    if (!(xc > lo_lim)) throw std::invalid_argument("choose_lacunary_params: x > 1/(N+1) required");
    const mpz_class p = xc.get_num(), q = xc.get_den();
    // threshold: 1/2 for N = 1, 1/(2N+1) otherwise
    const mpz_class ta = 1, tb = N == 1 ? 2 : 2 * N + 1;

    // smallest ell with x^ell < ta/tb (exists since x < 1)
    long lo = 1, hi = 1;
    while (cmp_pow(p, q, hi, ta, tb) >= 0) {
        lo = hi;
        hi *= 2;
        if (hi > (1L << 40)) throw ResourceError("choose_lacunary_params: ell overflow");
    }
    while (lo < hi) {
        long mid = lo + (hi - lo) / 2;
        if (cmp_pow(p, q, mid, ta, tb) < 0) hi = mid; else lo = mid + 1;
    }
    LacunaryParams out;
    out.ell = lo;

    // largest k with x^(ell k) >= n^(-2A), i.e. p^(ell k) n^(2A) >= q^(ell k)
    mpz_class n2a = pow_mpz(mpz_class(n), static_cast<unsigned long>(2 * A));
    auto ok = [&](long k) {
        return cmp_pow(p, q, out.ell * k, mpz_class(1), n2a) >= 0; // x^(ell k) >= 1/n^2A
    };
    long k = 1;
    if (!ok(1)) {
        out.k = 0;
        return out;
    }
    while (ok(k * 2)) {
        k *= 2;
        if (k > (1L << 40)) throw ResourceError("choose_lacunary_params: k overflow");
    }
    long klo = k, khi = k * 2;
    while (klo + 1 < khi) {
        long mid = klo + (khi - klo) / 2;
        if (ok(mid)) klo = mid; else khi = mid;
    }
    out.k = klo;
    return out;
}

namespace {

struct ScaledSet {
    std::vector<mpz_class> terms; // scaled exponent terms
    long scale_pow;               // common denominator q^scale_pow
};

mpq_class unscale(const mpz_class& v, const mpz_class& q, long e) {
    mpq_class r(v, pow_mpz(q, e));
    r.canonicalize();
    return r;
}

mpz_class min_adjacent_gap(std::vector<mpz_class>& vals) {
    std::sort(vals.begin(), vals.end());
    mpz_class best = vals.back() - vals.front();
    mpz_class d;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        d = vals[i] - vals[i - 1];
        if (d < best) best = d;
    }
    return best;
}

// int128 fast path mirror
int128 min_adjacent_gap_i(std::vector<int128>& vals) {
    std::sort(vals.begin(), vals.end());
    int128 best = vals.back() - vals.front();
    for (std::size_t i = 1; i < vals.size(); ++i) {
        int128 d = vals[i] - vals[i - 1];
        if (d < best) best = d;
    }
    return best;
}

} // namespace

SeparationResult separation_check(SeparationVariant variant, const mpq_class& x, int N, long k,
                                  const mpq_class& c0) {
    SeparationResult res;
    res.variant = variant;
    res.x = x;
    res.x.canonicalize();
    res.N = N;
    res.k = k;
    if (k < 1) {
        res.reason = "k >= 1 required";
        return res;
    }
    const mpz_class p = res.x.get_num(), q = res.x.get_den();
    if (!(res.x > 0 && res.x < 1)) {
        res.reason = "x in (0,1) required";
        return res;
    }

    std::vector<long> exponents;
    long scale = 0;
    int enum_N = 1;
    switch (variant) {
    case SeparationVariant::Claim1: {
        if (N != 1) {
            res.reason = "claim1 applies to N = 1";
            return res;
        }
        LacunaryParams lp = choose_lacunary_params(res.x, 1, 1, 2); // ell only
        res.ell = lp.ell;
        if (k > 22) throw ResourceError("separation_check claim1: k <= 22");
        for (long j = 1; j <= k; ++j) exponents.push_back(j * res.ell);
        scale = k * res.ell;
        res.bound = 2 * mpq_class(pow_mpz(p, scale), pow_mpz(q, scale));
        break;
    }
    case SeparationVariant::Claim2: {
        if (N != 1) {
            res.reason = "claim2 applies to N = 1";
            return res;
        }
        res.ell = 2;
        mpq_class half(1, 2);
        if (!(res.x > half && res.x < half + c0)) {
            res.reason = "claim2 needs 1/2 < x < 1/2 + c0";
            return res;
        }
        if (k > 22) throw ResourceError("separation_check claim2: k <= 22");
        for (long j = 0; j <= k; ++j) exponents.push_back(2 * j);
        for (long j = 0; j <= k / 8; ++j) exponents.push_back(8 * j + 1);
        scale = 2 * k;
        res.bound = mpq_class(pow_mpz(p, 2 * k), 8 * pow_mpz(q, 2 * k));
        res.bound.canonicalize();
        break;
    }
    case SeparationVariant::Uniform: {
        mpq_class lo_lim(1, N + 1);
        if (!(res.x > lo_lim)) {
            res.reason = "uniform variant needs x > 1/(N+1)";
            return res;
        }
        LacunaryParams lp = choose_lacunary_params(res.x, N, 1, 2);
        res.ell = lp.ell;
        double log2_size = k * std::log2(2.0 * N);
        if (log2_size > 24.0) throw ResourceError("separation_check uniform: (2N)^k <= 2^24");
        for (long j = 1; j <= k; ++j) exponents.push_back(j * res.ell);
        scale = k * res.ell;
        res.bound = mpq_class(pow_mpz(p, scale), pow_mpz(q, scale));
        res.bound.canonicalize();
        enum_N = N;
        break;
    }
    }

    long max_e = *std::max_element(exponents.begin(), exponents.end());
    if (max_e > scale) scale = max_e;
    std::vector<mpz_class> terms;
    terms.reserve(exponents.size());
    for (long e : exponents) terms.push_back(pow_mpz(p, e) * pow_mpz(q, scale - e));

    mpz_class bound_sum = 0;
    for (const auto& t : terms) bound_sum += t;
    bound_sum *= enum_N;

    mpq_class gap;
    std::size_t size;
    if (fits_int128(bound_sum)) {
        std::vector<int128> t128, vals;
        for (const auto& t : terms) t128.push_back(to_int128(t));
        enumerate_sums(t128, enum_N, vals);
        size = vals.size();
        int128 g = min_adjacent_gap_i(vals);
        mpz_class gz;
        // reassemble int128 -> mpz
        bool neg = g < 0;
        unsigned __int128 ug = neg ? -static_cast<unsigned __int128>(g) : g;
        mpz_class hi(static_cast<unsigned long>(ug >> 64));
        mpz_class lo(static_cast<unsigned long>(ug & 0xFFFFFFFFFFFFFFFFull));
        gz = (hi << 64) + lo;
        if (neg) gz = -gz;
        gap = unscale(gz, q, scale);
    } else {
        std::vector<mpz_class> vals;
        double log2_size = exponents.size() * std::log2(2.0 * enum_N);
        if (log2_size > 24.0)
            throw ResourceError("separation_check: exact enumeration guard exceeded");
        enumerate_sums(terms, enum_N, vals);
        size = vals.size();
        gap = unscale(min_adjacent_gap(vals), q, scale);
    }
    res.set_size = size;
    res.min_gap = gap;
    res.pass = gap >= res.bound;
    return res;
}

} // namespace kac
