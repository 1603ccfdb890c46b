#include "kacroots/certified.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace kac {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

// 4-way interleaved Horner for x >= 0: returns the value and the
// absolute-coefficient majorant p~(x) = sum |c_i| x^i in one pass.  The
// interleaving breaks the fma dependency chain, which dominates the cost at
// degrees in the thousands.  Arrays are zero-padded to a multiple of four.
void eval_pair4(const double* c, std::size_t padded, double x,
                double& value, double& mag) {
    double y = x * x;
    y *= y;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    double m0 = 0, m1 = 0, m2 = 0, m3 = 0;
    for (std::size_t b = padded; b >= 4; b -= 4) {
        s0 = std::fma(s0, y, c[b - 4]);
        s1 = std::fma(s1, y, c[b - 3]);
        s2 = std::fma(s2, y, c[b - 2]);
        s3 = std::fma(s3, y, c[b - 1]);
        m0 = std::fma(m0, y, std::fabs(c[b - 4]));
        m1 = std::fma(m1, y, std::fabs(c[b - 3]));
        m2 = std::fma(m2, y, std::fabs(c[b - 2]));
        m3 = std::fma(m3, y, std::fabs(c[b - 1]));
    }
    value = s0 + x * (s1 + x * (s2 + x * s3));
    mag = m0 + x * (m1 + x * (m2 + x * m3));
}

double pos_eval4(const double* c, std::size_t padded, double x) {
    double y = x * x;
    y *= y;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (std::size_t b = padded; b >= 4; b -= 4) {
        s0 = std::fma(s0, y, c[b - 4]);
        s1 = std::fma(s1, y, c[b - 3]);
        s2 = std::fma(s2, y, c[b - 2]);
        s3 = std::fma(s3, y, c[b - 1]);
    }
    return s0 + x * (s1 + x * (s2 + x * s3));
}

std::size_t pad4(std::vector<double>& v) {
    while (v.size() % 4 != 0) v.push_back(0.0);
    return v.size();
}

IntPoly abs_poly(const IntPoly& p) {
    IntPoly out;
    out.coeffs.reserve(p.coeffs.size());
    for (const auto& c : p.coeffs) out.coeffs.push_back(abs(c));
    return out;
}

} // namespace

void CertifiedScanner::set_poly(const std::vector<double>& coeffs, const IntPoly* exact) {
    c_ = coeffs;
    const std::size_t n = c_.size();
    dc_.assign(n > 1 ? n - 1 : 1, 0.0);
    if (n > 1)
        for (std::size_t i = 1; i < n; ++i) dc_[i - 1] = static_cast<double>(i) * c_[i];
    d2c_.assign(n > 2 ? n - 2 : 1, 0.0);
    if (n > 2)
        for (std::size_t i = 2; i < n; ++i)
            d2c_[i - 2] = static_cast<double>(i) * static_cast<double>(i - 1) * c_[i];
    mag2_.resize(d2c_.size());
    for (std::size_t i = 0; i < d2c_.size(); ++i) mag2_[i] = std::fabs(d2c_[i]);
    mag3_.assign(n > 3 ? n - 3 : 1, 0.0);
    if (n > 3)
        for (std::size_t i = 3; i < n; ++i)
            mag3_[i - 3] = static_cast<double>(i) * static_cast<double>(i - 1) *
                           static_cast<double>(i - 2) * std::fabs(c_[i]);
    // error constants: gamma ~ 2 n u overestimates the plain-Horner bound
    gamma_ = 2.0 * static_cast<double>(n + 4) * 0x1p-53;
    pc_ = pad4(c_);
    pdc_ = pad4(dc_);
    pd2c_ = pad4(d2c_);
    pm2_ = pad4(mag2_);
    pm3_ = pad4(mag3_);
    exact_ = exact;
    if (exact_) dexact_ = transform(*exact_, PolyTransform::Derivative);
}

int CertifiedScanner::exact_sign(const mpq_class& x) const {
    mpz_class v = eval_scaled(*exact_, x.get_num(), x.get_den());
    return sgn(v);
}

int CertifiedScanner::cert_sign(double x) const {
    double v, m;
    eval_pair4(c_.data(), pc_, x, v, m);
    double err = gamma_ * m + kTiny;
    if (v > err) return 1;
    if (v < -err) return -1;
    EvalCert e = horner_compensated(std::span<const double>(c_.data(), c_.size()), x);
    if (e.sign_certified()) return e.sign();
    if (exact_) return exact_sign(mpq_class(x));
    return 2;
}

void CertifiedScanner::refine_bracket(double x1, double x2, int s1, ScanOutcome& out,
                                      const ScanOptions& opts) {
    while (x2 - x1 > opts.refine_width) {
        double m = 0.5 * (x1 + x2);
        if (m <= x1 || m >= x2) break;
        double v, mg;
        eval_pair4(c_.data(), pc_, m, v, mg);
        double err = gamma_ * mg + kTiny;
        int sm;
        if (v > err) sm = 1;
        else if (v < -err) sm = -1;
        else {
            EvalCert e = horner_compensated(std::span<const double>(c_.data(), c_.size()), m);
            if (!e.sign_certified()) break; // precision floor; count stands
            sm = e.sign();
        }
        if (sm == s1) x1 = m; else x2 = m;
    }
    out.count += 1;
    if (opts.collect_roots) out.roots.push_back(0.5 * (x1 + x2));
}

bool CertifiedScanner::escalate(const mpq_class& x1in, const mpq_class& x2in, int s1in, int s2in,
                                ScanOutcome& out, const ScanOptions& opts) {
    out.escalated = true;
    if (!exact_) return false;
    IntPoly dabs = abs_poly(dexact_);
    IntPoly d2abs = abs_poly(transform(dexact_, PolyTransform::Derivative));

    struct QSeg { mpq_class x1, x2; int s1, s2; int depth; };
    std::vector<QSeg> stack;
    stack.push_back({x1in, x2in, s1in, s2in, 0});
    const int kMaxDepth = 120;

    while (!stack.empty()) {
        QSeg sg = std::move(stack.back());
        stack.pop_back();
        mpq_class rad = (sg.x2 - sg.x1) / 2;
        mpq_class m = sg.x1 + rad;
        int sm = (sg.s1 == 0 || sg.s2 == 0) ? 0 : exact_sign(m);
        bool sturm_needed = sg.depth >= kMaxDepth || sm == 0;
        if (!sturm_needed) {
            if (sg.s1 == sg.s2 && sm == sg.s1) {
                mpq_class pm = eval_exact(*exact_, m);
                mpq_class bound = eval_exact(dabs, sg.x2) * rad;
                if (abs(pm) > bound) continue; // certified root-free
            } else if (sg.s1 != sg.s2) {
                // monotonicity certificate: exactly one root
                mpq_class dm = eval_exact(dexact_, m);
                mpq_class bound2 = eval_exact(d2abs, sg.x2) * rad;
                if (abs(dm) > bound2) {
                    out.count += 1;
                    if (opts.collect_roots) out.roots.push_back(m.get_d());
                    continue;
                }
            }
            stack.push_back({sg.x1, m, sg.s1, sm, sg.depth + 1});
            stack.push_back({m, sg.x2, sm, sg.s2, sg.depth + 1});
            continue;
        }
        // definitive resolution on the offending segment
        if (exact_->degree() > opts.exact_degree_cap) {
            out.certified = false;
            return false;
        }
        RootReport rep = isolate_and_refine(*exact_, RatInterval::open(sg.x1, sg.x2),
                                            mpq_class(1, 1000000));
        out.count += rep.distinct_count;
        out.multiple_root = out.multiple_root || rep.multiple_root_flag;
        if (opts.collect_roots)
            for (const auto& r : rep.refined) out.roots.push_back(r.get_d());
    }
    return true;
}

ScanOutcome CertifiedScanner::scan_open(double a, double b, const ScanOptions& opts) {
    ScanOutcome out;
    if (!(a < b)) return out;
    int sa = cert_sign(a);
    int sb = cert_sign(b);
    if (sa == 0 || sa == 2 || sb == 0 || sb == 2) {
        // a root or an uncertifiable value sits on an endpoint
        if (exact_) {
            escalate(mpq_class(a), mpq_class(b), sa, sb, out, opts);
            return out;
        }
        out.certified = false;
        return out;
    }

    std::vector<Seg> stack;
    stack.push_back({a, b, sa, sb});
    int processed = 0;
    while (!stack.empty()) {
        Seg sg = stack.back();
        stack.pop_back();
        if (++processed > opts.max_segments) {
            out.certified = false;
            return out;
        }
        double rad = 0.5 * (sg.x2 - sg.x1);
        double m = 0.5 * (sg.x1 + sg.x2);
        if (sg.s1 != sg.s2) {
            // uniqueness: P' bounded away from zero on the segment, via the
            // centered form |P'| >= |P'(m)| - rad * sup|P''|
            double dv, dm;
            eval_pair4(dc_.data(), pdc_, m, dv, dm);
            double low = std::fabs(dv) - (gamma_ * dm + kTiny);
            double d2v, d2m;
            eval_pair4(d2c_.data(), pd2c_, m, d2v, d2m);
            double up2 = std::fabs(d2v) + gamma_ * d2m + kTiny;
            double b3 = pos_eval4(mag3_.data(), pm3_, sg.x2) * 1.0000001 + kTiny;
            if (low <= rad * (up2 + rad * b3)) {
                EvalCert d = horner_compensated(std::span<const double>(dc_.data(), dc_.size()), m);
                low = std::fabs(d.value) - d.err;
            }
            if (low > rad * (up2 + rad * b3)) {
                refine_bracket(sg.x1, sg.x2, sg.s1, out, opts);
                continue;
            }
        } else {
            // exclusion: |P(m)| > rad * sup|P'|, sup|P'| <= |P'(m)| + rad*sup|P''|
            double v, vm;
            eval_pair4(c_.data(), pc_, m, v, vm);
            double low = std::fabs(v) - (gamma_ * vm + kTiny);
            double dv, dmm;
            eval_pair4(dc_.data(), pdc_, m, dv, dmm);
            double up1 = std::fabs(dv) + gamma_ * dmm + kTiny;
            double b2 = pos_eval4(mag2_.data(), pm2_, sg.x2) * 1.0000001 + kTiny;
            double rhs = rad * (up1 + rad * b2);
            if (low <= rhs) {
                EvalCert e = horner_compensated(std::span<const double>(c_.data(), c_.size()), m);
                low = std::fabs(e.value) - e.err;
            }
            if (low > rhs) continue; // certified root-free
        }
        if (m <= sg.x1 || m >= sg.x2) {
            // double subdivision floor
            if (exact_) {
                escalate(mpq_class(sg.x1), mpq_class(sg.x2), sg.s1, sg.s2, out, opts);
                continue;
            }
            out.certified = false;
            continue;
        }
        int sm = cert_sign(m);
        if (sm == 0 || sm == 2) {
            if (exact_) {
                escalate(mpq_class(sg.x1), mpq_class(sg.x2), sg.s1, sg.s2, out, opts);
                continue;
            }
            out.certified = false;
            continue;
        }
        stack.push_back({sg.x1, m, sg.s1, sm});
        stack.push_back({m, sg.x2, sm, sg.s2});
    }
    return out;
}

namespace {

double map_back(int kind, double r) {
    switch (kind) {
    case 0: return r;
    case 1: return 1.0 / r;
    case 2: return -r;
    default: return -1.0 / r;
    }
}

// image of the open restriction (lo,hi) in the r-parameter of each quadrant
bool quadrant_range(int kind, double lo, double hi, double& rlo, double& rhi) {
    double a, b;
    switch (kind) {
    case 0: // x in (0,1), r = x
        a = std::max(lo, 0.0); b = std::min(hi, 1.0);
        if (a >= b) return false;
        rlo = a; rhi = b; return true;
    case 1: // x in (1,inf), r = 1/x
        a = std::max(lo, 1.0); b = hi;
        if (a >= b) return false;
        rlo = std::isinf(b) ? 0.0 : 1.0 / b;
        rhi = 1.0 / a;
        return rlo < rhi;
    case 2: // x in (-1,0), r = -x
        a = std::max(lo, -1.0); b = std::min(hi, 0.0);
        if (a >= b) return false;
        rlo = -b; rhi = -a; return rlo < rhi;
    default: // x in (-inf,-1), r = -1/x
        a = lo; b = std::min(hi, -1.0);
        if (a >= b) return false;
        rlo = std::isinf(a) ? 0.0 : -1.0 / a;
        rhi = -1.0 / b;
        return rlo < rhi;
    }
}

} // namespace

CountOutcome count_distinct(const SampledPoly& sp, const CountOptions& opts) {
    CountOutcome out;
    const IntPoly* ip = std::get_if<IntPoly>(&sp);
    RealPoly rp = to_real(sp);
    if (rp.coeffs.empty()) throw std::invalid_argument("count_distinct: empty polynomial");

    const double lo = opts.restrict_to ? opts.restrict_to->lo
                                       : -std::numeric_limits<double>::infinity();
    const double hi = opts.restrict_to ? opts.restrict_to->hi
                                       : std::numeric_limits<double>::infinity();

    // roots at +-1 handled exactly (integers) or by certified evaluation
    int root_at[2] = {0, 0}; // index 0: +1, index 1: -1
    IntPoly base_exact;
    if (ip) {
        base_exact = *ip;
        mpz_class v1 = 0, vm1 = 0;
        for (std::size_t i = 0; i < base_exact.coeffs.size(); ++i) {
            v1 += base_exact.coeffs[i];
            vm1 += (i % 2 == 0) ? base_exact.coeffs[i] : -base_exact.coeffs[i];
        }
        root_at[0] = (v1 == 0);
        root_at[1] = (vm1 == 0);
        if (root_at[0] || root_at[1]) out.multiple_root = has_multiple_root(base_exact);
    } else {
        EvalCert e1 = horner_compensated(rp.coeffs, 1.0);
        EvalCert e2 = horner_compensated(rp.coeffs, -1.0);
        if (!e1.sign_certified() || !e2.sign_certified()) {
            out.certified = false;
            return out;
        }
    }
    const bool whole = !opts.restrict_to;
    if ((whole || (lo < 1.0 && 1.0 < hi)) && root_at[0]) {
        ++out.count;
        if (opts.collect_roots) out.roots.push_back(1.0);
    }
    if ((whole || (lo < -1.0 && -1.0 < hi)) && root_at[1]) {
        ++out.count;
        if (opts.collect_roots) out.roots.push_back(-1.0);
    }

    CertifiedScanner scanner;
    ScanOptions sopts;
    sopts.refine_width = opts.refine_width;
    sopts.collect_roots = opts.collect_roots;
    sopts.exact_degree_cap = opts.exact_degree_cap;

    std::vector<double> coeffs;
    IntPoly exact;
    for (int kind = 0; kind < 4; ++kind) {
        double rlo, rhi;
        if (!quadrant_range(kind, lo, hi, rlo, rhi)) continue;
        // transform chain: kind 0 = P, 1 = rev(P), 2 = P(-x), 3 = rev(P)(-x)
        bool has_exact = false;
        if (ip) {
            IntPoly q = base_exact;
            if (kind == 1 || kind == 3) q = transform(q, PolyTransform::Reciprocal);
            if (kind == 2 || kind == 3) q = transform(q, PolyTransform::NegateArg);
            deflate_root(q, +1); // remove any root at r=1 (handled above)
            exact = std::move(q);
            has_exact = true;
            coeffs.clear();
            coeffs.reserve(exact.coeffs.size());
            for (const auto& cc : exact.coeffs) coeffs.push_back(cc.get_d());
        } else {
            RealPoly q = rp;
            if (kind == 1 || kind == 3) q = transform(q, PolyTransform::Reciprocal);
            if (kind == 2 || kind == 3) q = transform(q, PolyTransform::NegateArg);
            coeffs = std::move(q.coeffs);
        }
        scanner.set_poly(coeffs, has_exact ? &exact : nullptr);
        ScanOutcome so = scanner.scan_open(rlo, rhi, sopts);
        out.count += so.count;
        out.certified = out.certified && so.certified;
        out.escalated = out.escalated || so.escalated;
        out.multiple_root = out.multiple_root || so.multiple_root;
        if (opts.collect_roots)
            for (double r : so.roots) out.roots.push_back(map_back(kind, r));
        if (!out.certified) return out;
    }

    if (opts.collect_roots && out.roots.size() >= 2) {
        std::sort(out.roots.begin(), out.roots.end());
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < out.roots.size(); ++i)
            best = std::min(best, out.roots[i] - out.roots[i - 1]);
        out.min_gap = best;
    }
    return out;
}

} // namespace kac
