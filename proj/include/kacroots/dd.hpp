#pragma once

#include <cmath>

namespace kac {

// Double-double arithmetic: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// giving roughly 106 bits of precision.  Only the operations needed by the
// zero-density evaluation near |t| = 1 are provided.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {
inline dd two_sum(double a, double b) {
    double s = a + b;
    double v = s - a;
    double e = (a - (s - v)) + (b - v);
    return {s, e};
}
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}
inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}
} // namespace detail

inline dd dd_add(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    dd t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }
inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul(b, dd(q1)));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, dd(q2)));
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return dd_add(q, dd(q3));
}

inline dd dd_sqrt(dd a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    double x = std::sqrt(a.hi);
    // one Newton step in dd: x' = x + (a - x^2) / (2x)
    dd x2 = detail::two_prod(x, x);
    dd diff = dd_sub(a, x2);
    return dd_add(dd(x), dd(diff.hi / (2.0 * x), diff.lo / (2.0 * x)));
}

// a^n for n >= 0 by binary powering.
inline dd dd_powi(dd a, unsigned long n) {
    dd r(1.0);
    dd base = a;
    while (n) {
        if (n & 1) r = dd_mul(r, base);
        base = dd_mul(base, base);
        n >>= 1;
    }
    return r;
}

} // namespace kac
