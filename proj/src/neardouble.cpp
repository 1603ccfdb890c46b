#include "kacroots/neardouble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kacroots/rootfind.hpp"

namespace kac {

namespace {

double pos_horner(const std::vector<double>& coeffs, double x) {
    double s = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) s = s * x + coeffs[i];
    return s;
}

std::vector<double> abs_coeffs(const std::vector<double>& c) {
    std::vector<double> a(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) a[i] = std::fabs(c[i]);
    return a;
}

// Decide exactly whether |A(r)| <= thr * r^pw for some r in the bracket of a
// root of "locator" (A and locator are integer polynomials, thr is exact).
// Refines the bracket by bisection on locator until the comparison separates.
struct ExactDecision {
    bool event = false;
    bool undecided = false;
    double bound = 0.0;
};

ExactDecision decide_exact(const IntPoly& locator, const IntPoly& A, const mpq_class& thr,
                           int pw, mpq_class r1, mpq_class r2) {
    IntPoly dabs;
    {
        IntPoly d = transform(A, PolyTransform::Derivative);
        dabs.coeffs.reserve(d.coeffs.size());
        for (const auto& c : d.coeffs) dabs.coeffs.push_back(abs(c));
    }
    int s1 = sgn(eval_scaled(locator, r1.get_num(), r1.get_den()));
    for (int iter = 0; iter < 400; ++iter) {
        mpq_class w = r2 - r1;
        mpq_class m = r1 + w / 2;
        mpq_class am = abs(eval_exact(A, m));
        mpq_class slope = eval_exact(dabs, r2);
        mpq_class lo_val = am - slope * w;   // lower bound of |A| on [r1,r2]
        mpq_class hi_val = am + slope * w;
        // threshold range over the bracket: thr * r^pw is monotone in r
        mpq_class t1 = thr, t2 = thr;
        if (pw > 0) {
            mpq_class p1 = r1, p2 = r2;
            for (int k = 1; k < pw; ++k) { p1 *= r1; p2 *= r2; }
            t1 *= p1;
            t2 *= p2;
        }
        if (t2 < t1) swap(t1, t2);
        if (lo_val > t2) return {false, false, hi_val.get_d()};
        if (hi_val <= t1) return {true, false, hi_val.get_d()};
        // refine the root bracket
        int sm = sgn(eval_scaled(locator, m.get_num(), m.get_den()));
        if (sm == 0) { r1 = r2 = m; continue; }
        if (sm == s1) r1 = m; else r2 = m;
    }
    return {true, true, 0.0};
}

struct QuadrantPolys {
    IntPoly A;    // P composed with the quadrant map, as a polynomial in r
    IntPoly D;    // same for P'
    int pw_a;     // |P(x)| = |A(r)| / r^pw_a
    int pw_d;
    int kind;
};

double map_back(int kind, double r) {
    switch (kind) {
    case 0: return r;
    case 1: return 1.0 / r;
    case 2: return -r;
    default: return -1.0 / r;
    }
}

} // namespace

std::vector<NearDoubleEvent> near_double_scan(const IntPoly& p, double B,
                                              std::optional<DInterval> window) {
    if (B <= 0) throw std::invalid_argument("near_double_scan: B > 0 required");
    IntPoly prim = p;
    while (!prim.coeffs.empty() && prim.coeffs.back() == 0) prim.coeffs.pop_back();
    if (prim.coeffs.empty()) throw std::invalid_argument("near_double_scan: zero polynomial");
    const int n = p.degree(); // nominal degree sets the threshold
    const double thr = std::pow(static_cast<double>(std::max(n, 2)), -B);
    const mpq_class thr_q(thr);

    const double wlo = window ? window->lo : -std::numeric_limits<double>::infinity();
    const double whi = window ? window->hi : std::numeric_limits<double>::infinity();

    std::vector<NearDoubleEvent> events;

    // exact checks at +-1 (the only possible double-root sites for Type I)
    IntPoly dp = transform(prim, PolyTransform::Derivative);
    for (int s : {+1, -1}) {
        double x = s;
        bool inside = window ? (wlo < x && x < whi) : true;
        if (!inside) continue;
        mpz_class v = 0, d = 0;
        for (std::size_t i = 0; i < prim.coeffs.size(); ++i)
            v += (s > 0 || i % 2 == 0) ? prim.coeffs[i] : -prim.coeffs[i];
        for (std::size_t i = 0; i < dp.coeffs.size(); ++i)
            d += (s > 0 || i % 2 == 0) ? dp.coeffs[i] : -dp.coeffs[i];
        // integer values: |v| <= thr < 1 forces v == 0
        bool pv = (v == 0) || (mpq_class(abs(v)) <= thr_q);
        bool dv = (d == 0) || (mpq_class(abs(d)) <= thr_q);
        if (pv && dv)
            events.push_back({x, x, 0.0, 0.0, thr, v == 0 && d == 0, false});
    }

    // quadrant scans over r in (eps, 1): candidates are roots of A (with |D|
    // small) and roots of D (with |A| small)
    mpq_class bound = cauchy_root_bound(prim);
    double rmin = 1.0 / bound.get_d();
    CertifiedScanner scanner;
    ScanOptions sopts;
    sopts.collect_roots = true;
    sopts.refine_width = 1e-12;

    for (int kind = 0; kind < 4; ++kind) {
        QuadrantPolys qp;
        qp.kind = kind;
        qp.A = prim;
        qp.D = dp;
        if (kind == 1 || kind == 3) {
            qp.A = transform(qp.A, PolyTransform::Reciprocal);
            qp.D = transform(qp.D, PolyTransform::Reciprocal);
            qp.pw_a = prim.degree();
            qp.pw_d = dp.degree();
        } else {
            qp.pw_a = qp.pw_d = 0;
        }
        if (kind == 2 || kind == 3) {
            qp.A = transform(qp.A, PolyTransform::NegateArg);
            qp.D = transform(qp.D, PolyTransform::NegateArg);
        }
        // r-window for this quadrant under the x-restriction
        double rlo = rmin, rhi = 1.0;
        {
            // x-range of this quadrant
            double xlo, xhi;
            switch (kind) {
            case 0: xlo = rmin; xhi = 1.0; break;
            case 1: xlo = 1.0; xhi = 1.0 / rmin; break;
            case 2: xlo = -1.0; xhi = -rmin; break;
            default: xlo = -1.0 / rmin; xhi = -1.0; break;
            }
            double alo = std::max(xlo, wlo), ahi = std::min(xhi, whi);
            if (!(alo < ahi)) continue;
            switch (kind) {
            case 0: rlo = alo; rhi = ahi; break;
            case 1: rlo = 1.0 / ahi; rhi = 1.0 / alo; break;
            case 2: rlo = -ahi; rhi = -alo; break;
            default: rlo = -1.0 / alo; rhi = -1.0 / ahi; break;
            }
            rlo = std::max(rlo, 1e-300);
            rhi = std::min(rhi, 1.0);
            if (!(rlo < rhi)) continue;
        }

        std::vector<double> a_coeffs, d_coeffs;
        for (const auto& c : qp.A.coeffs) a_coeffs.push_back(c.get_d());
        for (const auto& c : qp.D.coeffs) d_coeffs.push_back(c.get_d());
        std::vector<double> a_abs = abs_coeffs(a_coeffs), d_abs = abs_coeffs(d_coeffs);

        for (int which = 0; which < 2; ++which) {
            const IntPoly& locator = which == 0 ? qp.D : qp.A;  // roots of this
            const IntPoly& other = which == 0 ? qp.A : qp.D;    // must be small
            const std::vector<double>& loc_c = which == 0 ? d_coeffs : a_coeffs;
            const std::vector<double>& oth_c = which == 0 ? a_coeffs : d_coeffs;
            const std::vector<double>& oth_abs = which == 0 ? a_abs : d_abs;
            int pw = which == 0 ? qp.pw_a : qp.pw_d;

            scanner.set_poly(loc_c, &locator);
            ScanOutcome so = scanner.scan_open(rlo, rhi, sopts);
            for (double r : so.roots) {
                // quick certified rejection in doubles
                EvalCert e = horner_compensated(oth_c, r);
                double w = sopts.refine_width;
                double lower = std::fabs(e.value) - e.err - w * pos_horner(oth_abs, std::min(r + w, 1.0));
                double thr_here = thr * (pw > 0 ? std::pow(r, pw) : 1.0);
                if (lower > thr_here * 1.0000001) continue;
                // exact decision
                mpq_class r1(std::max(r - w, rlo)), r2(std::min(r + w, rhi));
                ExactDecision dec = decide_exact(locator, other, thr_q, pw, r1, r2);
                if (!dec.event) continue;
                double x1 = map_back(kind, r + w), x2 = map_back(kind, r - w);
                if (x1 > x2) std::swap(x1, x2);
                NearDoubleEvent ev;
                ev.lo = x1;
                ev.hi = x2;
                ev.threshold = thr;
                ev.p_bound = which == 0 ? dec.bound : 0.0;
                ev.dp_bound = which == 0 ? 0.0 : dec.bound;
                ev.undecided = dec.undecided;
                events.push_back(ev);
            }
        }
    }

    // merge events that refer to the same location
    std::sort(events.begin(), events.end(),
              [](const NearDoubleEvent& a, const NearDoubleEvent& b) { return a.lo < b.lo; });
    std::vector<NearDoubleEvent> merged;
    for (const auto& ev : events) {
        if (!merged.empty() && ev.lo <= merged.back().hi + 4e-12) {
            merged.back().hi = std::max(merged.back().hi, ev.hi);
            merged.back().exact_double = merged.back().exact_double || ev.exact_double;
            merged.back().undecided = merged.back().undecided || ev.undecided;
        } else {
            merged.push_back(ev);
        }
    }
    return merged;
}

RootMatchReport root_match(const SampledPoly& F, const SampledPoly& G,
                           double eps1, double M, std::optional<DInterval> window) {
    if (eps1 <= 0 || M <= 0) throw std::invalid_argument("root_match: eps1, M > 0 required");
    RootMatchReport report;

    CountOptions copts;
    copts.collect_roots = true;
    copts.refine_width = 1e-12;
    copts.restrict_to = window;
    CountOutcome roots = count_distinct(F, copts);
    report.roots_certified = roots.certified;

    RealPoly f = to_real(F), g = to_real(G);
    RealPoly fd = transform(f, PolyTransform::Derivative);
    std::vector<double> f2_abs;
    {
        RealPoly f2 = transform(fd, PolyTransform::Derivative);
        for (double c : f2.coeffs) f2_abs.push_back(std::fabs(c));
    }
    std::vector<double> diff_abs(std::max(f.coeffs.size(), g.coeffs.size()), 0.0);
    for (std::size_t i = 0; i < diff_abs.size(); ++i) {
        double a = i < f.coeffs.size() ? f.coeffs[i] : 0.0;
        double b = i < g.coeffs.size() ? g.coeffs[i] : 0.0;
        diff_abs[i] = std::fabs(a - b);
    }

    const double radius = eps1 / M;
    for (double x0 : roots.roots) {
        RootMatch m;
        m.root = x0;
        m.ilo = x0 - radius;
        m.ihi = x0 + radius;
        double xmax = std::max(std::fabs(m.ilo), std::fabs(m.ihi));
        EvalCert dc = horner_compensated(fd.coeffs, x0);
        // numeric precondition check; the final authority is the sign change
        if (std::fabs(dc.value) + dc.err < eps1 * (1.0 - 1e-9)) {
            m.reason = "derivative below eps1 at root";
        } else if (pos_horner(f2_abs, xmax) > M) {
            m.reason = "second-derivative bound exceeds M on I";
        } else if (pos_horner(diff_abs, xmax) > 0.25 * eps1 * eps1 / M) {
            m.reason = "sup |F-G| exceeds eps1^2/(4M) on I";
        } else {
            EvalCert gl = horner_compensated(g.coeffs, m.ilo);
            EvalCert gh = horner_compensated(g.coeffs, m.ihi);
            if (gl.sign_certified() && gh.sign_certified() && gl.sign() != gh.sign()) {
                m.matched = true;
            } else {
                m.reason = "no certified sign change of G on I";
            }
        }
        if (m.matched) ++report.matched_count; else ++report.unmatched_count;
        report.matches.push_back(std::move(m));
    }
    return report;
}

} // namespace kac
