#include "kacroots/rootfind.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace kac {

namespace sturm_detail {

IntPoly normalized(const IntPoly& p) {
    IntPoly q = p;
    while (!q.coeffs.empty() && q.coeffs.back() == 0) q.coeffs.pop_back();
    return q;
}

mpz_class content(const IntPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p.coeffs) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

IntPoly primitive_part(const IntPoly& p) {
    mpz_class g = content(p);
    if (g == 0 || g == 1) return p;
    IntPoly q;
    q.coeffs.reserve(p.coeffs.size());
    for (const auto& c : p.coeffs) q.coeffs.push_back(c / g);
    return q;
}

namespace {

// Pseudo-remainder with the multiplier forced to an even power of lc(B), so
// the result is a positive multiple of the rational remainder.
IntPoly prem_even(IntPoly a, const IntPoly& b) {
    const int db = b.degree();
    const mpz_class& lb = b.coeffs.back();
    int da = a.degree();
    int steps = da - db + 1;
    if (steps % 2 != 0) ++steps; // keep the overall multiplier positive
    int done = 0;
    while (a.degree() >= db && !(a.coeffs.size() == 1 && a.coeffs[0] == 0)) {
        da = a.degree();
        mpz_class q = a.coeffs.back();
        // a = lb * a - q * x^(da-db) * b
        for (auto& c : a.coeffs) c *= lb;
        for (int i = 0; i <= db; ++i) a.coeffs[da - db + i] -= q * b.coeffs[i];
        a = normalized(a);
        ++done;
        if (a.coeffs.empty()) { a.coeffs.assign(1, mpz_class(0)); break; }
    }
    // pad the multiplier to the even power
    for (; done < steps; ++done)
        for (auto& c : a.coeffs) c *= lb;
    return a;
}

IntPoly exact_divide(const IntPoly& a, const IntPoly& b) {
    IntPoly rem = normalized(a);
    IntPoly q;
    const int db = b.degree();
    const mpz_class& lb = b.coeffs.back();
    q.coeffs.assign(std::max<int>(rem.degree() - db + 1, 1), mpz_class(0));
    while (rem.degree() >= db && !(rem.coeffs.size() == 1 && rem.coeffs[0] == 0)) {
        int k = rem.degree() - db;
        mpz_class c;
        mpz_divexact(c.get_mpz_t(), rem.coeffs.back().get_mpz_t(), lb.get_mpz_t());
        q.coeffs[k] = c;
        for (int i = 0; i <= db; ++i) rem.coeffs[k + i] -= c * b.coeffs[i];
        rem = normalized(rem);
        if (rem.coeffs.empty()) break;
    }
    return q;
}

} // namespace

IntPoly poly_gcd(const IntPoly& a0, const IntPoly& b0) {
    IntPoly a = primitive_part(normalized(a0));
    IntPoly b = primitive_part(normalized(b0));
    if (a.coeffs.empty()) return b;
    if (b.coeffs.empty()) return a;
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.coeffs.empty() && !(b.coeffs.size() == 1 && b.coeffs[0] == 0)) {
        IntPoly r = prem_even(a, b);
        r = normalized(r);
        a = std::move(b);
        if (r.coeffs.empty()) { b = IntPoly{}; break; }
        b = primitive_part(r);
        if (b.coeffs.size() == 1 && b.coeffs[0] == 0) { b = IntPoly{}; break; }
    }
    if (a.coeffs.back() < 0)
        for (auto& c : a.coeffs) c = -c;
    return a;
}

IntPoly squarefree_part(const IntPoly& p) {
    IntPoly q = primitive_part(normalized(p));
    if (q.degree() <= 0) return q;
    IntPoly g = poly_gcd(q, transform(q, PolyTransform::Derivative));
    if (g.degree() <= 0) return q;
    return primitive_part(exact_divide(q, g));
}

std::vector<IntPoly> sturm_chain(const IntPoly& squarefree) {
    std::vector<IntPoly> chain;
    chain.push_back(squarefree);
    if (squarefree.degree() <= 0) return chain;
    chain.push_back(primitive_part(normalized(transform(squarefree, PolyTransform::Derivative))));
    while (chain.back().degree() >= 1) {
        IntPoly r = prem_even(chain[chain.size() - 2], chain.back());
        r = normalized(r);
        if (r.coeffs.empty() || (r.coeffs.size() == 1 && r.coeffs[0] == 0)) break;
        for (auto& c : r.coeffs) c = -c;
        chain.push_back(primitive_part(r));
    }
    return chain;
}

namespace {

int sign_at(const IntPoly& p, const mpq_class& x) {
    mpz_class v = eval_scaled(p, x.get_num(), x.get_den());
    return sgn(v);
}

int count_variations(const std::vector<int>& signs) {
    int var = 0;
    int prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

} // namespace

int variations_at(const std::vector<IntPoly>& chain, const mpq_class& x) {
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& p : chain) signs.push_back(sign_at(p, x));
    // right-limit convention: if the polynomial itself vanishes at x, its sign
    // just right of x agrees with the next chain element, i.e. skipping it
    // (count_variations already skips zeros) realizes W(x) = V(x+)
    return count_variations(signs);
}

int variations_at_neg_inf(const std::vector<IntPoly>& chain) {
    std::vector<int> signs;
    for (const auto& p : chain) {
        int s = sgn(p.coeffs.back());
        if (p.degree() % 2 != 0) s = -s;
        signs.push_back(s);
    }
    return count_variations(signs);
}

int variations_at_pos_inf(const std::vector<IntPoly>& chain) {
    std::vector<int> signs;
    for (const auto& p : chain) signs.push_back(sgn(p.coeffs.back()));
    return count_variations(signs);
}

} // namespace sturm_detail

using namespace sturm_detail;

mpq_class cauchy_root_bound(const IntPoly& p) {
    IntPoly q = normalized(p);
    if (q.degree() < 0) throw std::invalid_argument("root bound of zero polynomial");
    mpz_class maxc = 0;
    for (const auto& c : q.coeffs) {
        mpz_class a = abs(c);
        if (a > maxc) maxc = a;
    }
    mpq_class bound = 1 + mpq_class(maxc) / mpq_class(abs(q.coeffs.back()));
    // round up to a power of two so bisection midpoints stay dyadic
    mpq_class b = 1;
    while (b < bound) b *= 2;
    return b;
}

int deflate_root(IntPoly& p, int root_sign) {
    // divide by (x - 1) or (x + 1) while the value at the root vanishes
    int mult = 0;
    for (;;) {
        mpz_class v = 0;
        if (root_sign > 0) {
            for (const auto& c : p.coeffs) v += c;
        } else {
            for (std::size_t i = 0; i < p.coeffs.size(); ++i)
                v += (i % 2 == 0) ? p.coeffs[i] : -p.coeffs[i];
        }
        if (v != 0 || p.degree() < 1) break;
        // synthetic division by (x -+ 1)
        std::vector<mpz_class> q(p.coeffs.size() - 1);
        mpz_class carry = 0;
        for (std::size_t i = p.coeffs.size(); i-- > 1;) {
            carry = p.coeffs[i] + (root_sign > 0 ? carry : -carry);
            q[i - 1] = carry;
        }
        p.coeffs = std::move(q);
        ++mult;
    }
    return mult;
}

bool has_multiple_root(const IntPoly& p) {
    IntPoly q = primitive_part(normalized(p));
    if (q.degree() <= 1) return false;
    return poly_gcd(q, transform(q, PolyTransform::Derivative)).degree() >= 1;
}

namespace {

struct SturmContext {
    std::vector<IntPoly> chain;
    const IntPoly* sqf = nullptr;

    int W(const mpq_class& x) const { return variations_at(chain, x); }
    int sign(const mpq_class& x) const { return sturm_detail::sign_at(*sqf, x); }
    // roots in (a, b]
    int count_halfopen(const mpq_class& a, const mpq_class& b) const { return W(a) - W(b); }
};

int count_with_bounds(const SturmContext& ctx, const RatInterval& iv, mpq_class& lo, mpq_class& hi) {
    const IntPoly& q = *ctx.sqf;
    mpq_class bound = cauchy_root_bound(q);
    lo = iv.lo ? *iv.lo : -bound;
    hi = iv.hi ? *iv.hi : bound;
    if (lo >= hi) {
        // degenerate or single-point query
        if (lo == hi && !iv.lo_open && !iv.hi_open) return ctx.sign(lo) == 0 ? 1 : 0;
        return 0;
    }
    if (!iv.lo) lo = -bound; // strictly below all roots
    if (!iv.hi) hi = bound;
    int c = ctx.count_halfopen(lo, hi);
    if (!iv.lo_open && ctx.sign(lo) == 0) ++c;          // include root at lo
    if (iv.hi_open && ctx.sign(hi) == 0) --c;           // exclude root at hi
    return c;
}

} // namespace

int count_real_roots(const IntPoly& p, const RatInterval& iv) {
    IntPoly q = squarefree_part(p);
    if (q.coeffs.empty()) throw std::invalid_argument("count_real_roots: zero polynomial");
    if (q.degree() == 0) return 0;
    SturmContext ctx;
    ctx.chain = sturm_chain(q);
    ctx.sqf = &ctx.chain.front();
    mpq_class lo, hi;
    return count_with_bounds(ctx, iv, lo, hi);
}

namespace {

struct Node {
    mpq_class lo, hi;  // half-open (lo, hi]
    int count;
    bool hi_excluded;  // hi is a known root, not part of this node
};

// pick a split point in (lo, hi) that is not a root of q
mpq_class safe_split(const SturmContext& ctx, const mpq_class& lo, const mpq_class& hi, bool& is_root) {
    mpq_class m = (lo + hi) / 2;
    if (ctx.sign(m) != 0) { is_root = false; return m; }
    is_root = true;
    return m;
}

} // namespace

RootReport isolate_and_refine(const IntPoly& p, const RatInterval& iv, const mpq_class& width) {
    if (width <= 0) throw std::invalid_argument("isolate_and_refine: width must be positive");
    IntPoly prim = primitive_part(normalized(p));
    if (prim.coeffs.empty()) throw std::invalid_argument("isolate_and_refine: zero polynomial");
    IntPoly q = squarefree_part(prim);

    RootReport report;
    report.multiple_root_flag = q.degree() < prim.degree();
    if (q.degree() == 0) return report;

    SturmContext ctx;
    ctx.chain = sturm_chain(q);
    ctx.sqf = &ctx.chain.front();

    mpq_class lo, hi;
    int total = count_with_bounds(ctx, iv, lo, hi);
    // normalize query to (lo, hi] + optional endpoint adjustments already in total
    std::vector<RootInterval> found;
    if (total > 0) {
        std::deque<Node> work;
        // Represent the query exactly: roots at lo included iff closed; root at hi
        // excluded iff open.  Emit those endpoint roots directly.
        if (!iv.lo_open && iv.lo && ctx.sign(*iv.lo) == 0) {
            found.push_back({*iv.lo, *iv.lo, true});
            --total;
        }
        int c0 = ctx.count_halfopen(lo, hi);
        bool hi_excl = false;
        if (ctx.sign(hi) == 0) {
            if (iv.hi && iv.hi_open) {
                hi_excl = true;
                --c0;
            } else if (c0 > 0) {
                found.push_back({hi, hi, true});
                --c0;
                hi_excl = true;
            }
        }
        if (c0 > 0) work.push_back({lo, hi, c0, hi_excl});
        while (!work.empty()) {
            Node nd = std::move(work.front());
            work.pop_front();
            if (nd.count == 0) continue;
            if (nd.count == 1 && !nd.hi_excluded && ctx.sign(nd.hi) == 0) {
                found.push_back({nd.hi, nd.hi, true});
                continue;
            }
            if (nd.count == 1) {
                mpq_class a = nd.lo, b = nd.hi;
                // the bracket endpoints must carry nonzero signs of opposite
                // parity; shrink past any endpoint that sits on a root
                while (ctx.sign(a) == 0) {
                    mpq_class step = (b - a) / 4;
                    mpq_class a2 = a + step;
                    while (ctx.W(a) - ctx.W(a2) != 0) {
                        step /= 2;
                        a2 = a + step;
                    }
                    a = a2;
                }
                while (ctx.sign(b) == 0) {
                    // only possible when b is an excluded known root; retreat
                    // toward the interior root without crossing it
                    mpq_class step = (b - a) / 4;
                    mpq_class b2 = b - step;
                    while (ctx.count_halfopen(a, b2) != 1 || ctx.sign(b2) == 0) {
                        step /= 2;
                        b2 = b - step;
                    }
                    b = b2;
                }
                found.push_back({a, b, false});
                continue;
            }
            bool is_root = false;
            mpq_class m = safe_split(ctx, nd.lo, nd.hi, is_root);
            if (is_root) {
                found.push_back({m, m, true});
                int left = ctx.count_halfopen(nd.lo, m) - 1; // excludes the root at m
                int right = nd.count - left - 1;
                if (left > 0) {
                    // shrink right end below m without losing roots
                    mpq_class b2 = m - (m - nd.lo) / 1024;
                    while (ctx.count_halfopen(b2, m) != 1 /* only the root m */ || ctx.sign(b2) == 0) {
                        b2 = m - (m - b2) / 2;
                        if (b2 == m) break;
                    }
                    work.push_back({nd.lo, b2, left, false});
                }
                if (right > 0) work.push_back({m, nd.hi, right, nd.hi_excluded});
            } else {
                int left = ctx.count_halfopen(nd.lo, m);
                int right = nd.count - left;
                if (left > 0) work.push_back({nd.lo, m, left, false});
                if (right > 0) work.push_back({m, nd.hi, right, nd.hi_excluded});
            }
        }
    }

    // refine every non-exact bracket by sign bisection
    for (auto& ri : found) {
        if (ri.exact) continue;
        int slo = ctx.sign(ri.lo);
        while (ri.hi - ri.lo > width) {
            mpq_class m = (ri.lo + ri.hi) / 2;
            int sm = ctx.sign(m);
            if (sm == 0) {
                ri.lo = ri.hi = m;
                ri.exact = true;
                break;
            }
            if (sm == slo) ri.lo = m; else ri.hi = m;
        }
    }

    std::sort(found.begin(), found.end(), [](const RootInterval& a, const RootInterval& b) {
        return a.lo < b.lo;
    });
    report.intervals = std::move(found);
    report.distinct_count = static_cast<int>(report.intervals.size());
    for (const auto& ri : report.intervals) report.refined.push_back(ri.mid());
    if (report.distinct_count >= 2) {
        mpq_class best = report.refined[1] - report.refined[0];
        mpq_class err = report.intervals[0].width() + report.intervals[1].width();
        for (std::size_t i = 2; i < report.refined.size(); ++i) {
            mpq_class g = report.refined[i] - report.refined[i - 1];
            if (g < best) {
                best = g;
                err = report.intervals[i].width() + report.intervals[i - 1].width();
            }
        }
        report.min_gap = best;
        report.min_gap_err = err;
    }
    return report;
}

std::optional<mpq_class> min_gap(const RootReport& report) {
    return report.min_gap;
}

} // namespace kac
