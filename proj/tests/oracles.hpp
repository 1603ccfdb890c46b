#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "kacroots/poly.hpp"

namespace oracle {

// Simple rational-arithmetic gcd over Q[x] (monic Euclid), independent of the
// pseudo-remainder machinery in the library.
inline std::vector<mpq_class> q_normalize(std::vector<mpq_class> p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

inline std::vector<mpq_class> q_rem(std::vector<mpq_class> a, const std::vector<mpq_class>& b) {
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class c = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= c * b[i];
        a = q_normalize(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

inline std::vector<mpq_class> q_gcd(std::vector<mpq_class> a, std::vector<mpq_class> b) {
    a = q_normalize(std::move(a));
    b = q_normalize(std::move(b));
    while (!b.empty()) {
        auto r = q_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline std::vector<mpq_class> q_divexact(std::vector<mpq_class> a, const std::vector<mpq_class>& b) {
    std::vector<mpq_class> q(a.size() - b.size() + 1, mpq_class(0));
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class c = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        q[off] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= c * b[i];
        a = q_normalize(std::move(a));
        if (a.empty()) break;
    }
    return q;
}

// Squarefree part of an integer polynomial, as exact rationals.
inline std::vector<mpq_class> squarefree_q(const kac::IntPoly& p) {
    std::vector<mpq_class> a;
    for (const auto& c : p.coeffs) a.emplace_back(c);
    a = q_normalize(std::move(a));
    if (a.size() <= 1) return a;
    std::vector<mpq_class> d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * mpq_class(static_cast<long>(i)));
    auto g = q_gcd(a, q_normalize(std::move(d)));
    if (g.size() <= 1) return a;
    return q_divexact(std::move(a), g);
}

inline mpq_class q_value_at(const std::vector<mpq_class>& p, const mpq_class& x) {
    mpq_class s = 0;
    for (std::size_t i = p.size(); i-- > 0;) s = s * x + p[i];
    return s;
}

inline int q_sign_at(const std::vector<mpq_class>& p, const mpq_class& x) {
    return sgn(q_value_at(p, x));
}

// Dense sign-change scan of the squarefree part on a uniform rational grid.
// Counts exact zeros at grid points once.  Suitable for random instances
// whose root gaps are far above the grid step.
inline int dense_scan_distinct_roots(const kac::IntPoly& p, const mpq_class& lo,
                                     const mpq_class& hi, int grid_points) {
    auto q = squarefree_q(p);
    if (q.size() <= 1) return 0;
    mpq_class step = (hi - lo) / grid_points;
    int roots = 0;
    int sprev = 0;
    bool after_zero = false;
    for (int i = 0; i <= grid_points; ++i) {
        mpq_class x = lo + step * i;
        int s = q_sign_at(q, x);
        if (s == 0) {
            ++roots;
            after_zero = true;
            continue;
        }
        if (!after_zero && sprev != 0 && s != sprev) ++roots;
        sprev = s;
        after_zero = false;
    }
    return roots;
}

namespace detail {

struct TryCount {
    int count = 0;
    bool hit_rational_root = false;
    mpq_class root;
};

// Bisection with exact centered-form exclusion and monotonicity certificates.
// Stops early when a split point is an exact root (caller deflates).
inline TryCount try_count(const std::vector<mpq_class>& q, const mpq_class& lo, const mpq_class& hi) {
    TryCount out;
    std::vector<mpq_class> dq, qabs1, qabs2;
    for (std::size_t i = 1; i < q.size(); ++i) dq.push_back(q[i] * mpq_class(static_cast<long>(i)));
    for (const auto& c : dq) qabs1.push_back(abs(c));
    for (std::size_t i = 1; i < dq.size(); ++i)
        qabs2.push_back(abs(dq[i] * mpq_class(static_cast<long>(i))));
    if (qabs2.empty()) qabs2.push_back(0);

    struct Cell { mpq_class a, b; int sa, sb; };
    std::vector<Cell> stack;
    stack.push_back({lo, hi, q_sign_at(q, lo), q_sign_at(q, hi)});
    while (!stack.empty()) {
        Cell c = std::move(stack.back());
        stack.pop_back();
        mpq_class rad = (c.b - c.a) / 2;
        mpq_class m = c.a + rad;
        mpq_class xm = std::max(abs(c.a), abs(c.b));
        if (c.sa != c.sb) {
            mpq_class dm = abs(q_value_at(dq, m));
            if (dm > rad * q_value_at(qabs2, xm)) { ++out.count; continue; } // monotone
        } else {
            mpq_class vm = abs(q_value_at(q, m));
            if (vm > rad * q_value_at(qabs1, xm)) continue; // root-free
        }
        int sm = q_sign_at(q, m);
        if (sm == 0) {
            out.hit_rational_root = true;
            out.root = m;
            return out;
        }
        stack.push_back({c.a, m, c.sa, sm});
        stack.push_back({m, c.b, sm, c.sb});
    }
    return out;
}

inline std::vector<mpq_class> deflate_rational(const std::vector<mpq_class>& q, const mpq_class& m) {
    // q(x) = (x - m) q1(x)
    std::vector<mpq_class> q1(q.size() - 1);
    mpq_class carry = 0;
    for (std::size_t i = q.size(); i-- > 1;) {
        carry = q[i] + m * carry;
        q1[i - 1] = carry;
    }
    return q1;
}

} // namespace detail

// Certified distinct-root count on (lo, hi); lo and hi must not be roots of
// the squarefree part.  Exact rational roots are deflated and the count
// restarts, so the procedure terminates for every input.
inline int cert_count_distinct(const kac::IntPoly& p, const mpq_class& lo, const mpq_class& hi) {
    auto q = squarefree_q(p);
    int total = 0;
    for (;;) {
        if (q.size() <= 1) return total;
        auto r = detail::try_count(q, lo, hi);
        if (!r.hit_rational_root) return total + r.count;
        if (lo < r.root && r.root < hi) ++total;
        q = detail::deflate_rational(q, r.root);
    }
}

// All +-1 sign vectors of length n+1.
inline void for_each_sign_vector(int n, const std::function<void(const kac::IntPoly&)>& fn) {
    const std::uint64_t total = 1ull << (n + 1);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        kac::IntPoly p;
        p.coeffs.reserve(n + 1);
        for (int i = 0; i <= n; ++i)
            p.coeffs.emplace_back((mask >> i) & 1 ? 1 : -1);
        fn(p);
    }
}

} // namespace oracle
