#include "kacroots/ek.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kacroots/dd.hpp"

namespace kac {

namespace {

constexpr double kPi = std::numbers::pi;

// radicand 1/(t^2-1)^2 - (n+1)^2 t^(2n) / (t^(2n+2)-1)^2 in double-double,
// parameterized by u = 1 - t to keep the cancellation harmless
double density_dd(int n, double u) {
    dd ud(u);
    dd t = dd_sub(dd(1.0), ud);
    dd d1 = dd_mul(ud, dd_sub(dd(2.0), ud)); // 1 - t^2 = u(2-u)
    dd term1 = dd_div(dd(1.0), dd_mul(d1, d1));
    dd pw = dd_powi(t, static_cast<unsigned long>(2 * n + 2));
    dd t2n = dd_div(pw, dd_mul(t, t));
    dd w = dd_sub(pw, dd(1.0));
    dd np1(static_cast<double>(n + 1));
    dd term2 = dd_div(dd_mul(dd_mul(np1, np1), t2n), dd_mul(w, w));
    dd rad = dd_sub(term1, term2);
    double r = static_cast<double>(rad);
    if (r < 0.0) r = 0.0; // only roundoff at this proximity to the singularity
    return std::sqrt(r) / kPi;
}

double density_raw(int n, double t) {
    // t in [0, 1); plain double away from the boundary layer
    double u = 1.0 - t;
    if (u * (n + 1) < 0.1) return density_dd(n, u);
    double d1 = (t * t - 1.0);
    double term1 = 1.0 / (d1 * d1);
    double tp = std::pow(t, n); // t^n; t^(2n) = tp^2 avoids underflow a bit longer
    double t2n = tp * tp;
    double w = t2n * t * t - 1.0;
    double np1 = static_cast<double>(n + 1);
    double rad = term1 - np1 * np1 * t2n / (w * w);
    if (rad < 0.0) {
        if (std::fabs(1.0 - t) <= 1e-3) rad = 0.0; // clamp window per contract
        else throw std::domain_error("ek_density: negative radicand away from |t|=1");
    }
    return std::sqrt(rad) / kPi;
}

} // namespace

double ek_density(int n, double t) {
    if (n < 1) throw std::invalid_argument("ek_density: n >= 1 required");
    t = std::fabs(t); // even in t
    if (t > 1.0) {
        // 1/t substitution symmetry: rho(t) = rho(1/t) / t^2
        double s = 1.0 / t;
        return ek_density(n, s) * s * s;
    }
    const double u0 = 1e-3 / (n + 1);
    double u = 1.0 - t;
    if (u >= u0) return density_raw(n, t);
    // limit extrapolation through u0, 2u0, 3u0, 4u0 (cubic in u)
    double f[4];
    for (int k = 0; k < 4; ++k) f[k] = density_dd(n, u0 * (k + 1));
    double s = u / u0; // target in units of u0, s in [0,1)
    // Lagrange basis at nodes 1,2,3,4
    double v = 0.0;
    for (int k = 0; k < 4; ++k) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == k) continue;
            num *= s - (j + 1);
            den *= static_cast<double>(k - j);
        }
        v += f[k] * num / den;
    }
    return v;
}

namespace {

// 7-point Gauss / 15-point Kronrod pair (standard abscissas and weights)
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEval {
    double k15;
    double err;
};

template <class F>
PanelEval gk15(const F& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double x = h * kXgk[i];
        double v = f(c - x) + f(c + x);
        k15 += kWgk[i] * v;
        if (i % 2 == 1) g7 += kWg[i / 2] * v;
    }
    k15 *= h;
    g7 *= h;
    return {k15, std::fabs(k15 - g7)};
}

struct AdaptiveResult {
    double value = 0.0;
    double err = 0.0;
    int panels = 0;
};

// deterministic recursive refinement; the relative floor stops subdivision
// once |K15 -  G7| sits at the double roundoff level of the panel value
template <class F>
void adapt(const F& f, double a, double b, double tol, int depth, AdaptiveResult& out) {
    PanelEval pe = gk15(f, a, b);
    double floor_rel = 4e-15 * std::fabs(pe.k15);
    if (pe.err <= std::max(tol, floor_rel) || depth >= 28) {
        out.value += pe.k15;
        out.err += pe.err;
        out.panels += 1;
        return;
    }
    double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1, out);
    adapt(f, m, b, 0.5 * tol, depth + 1, out);
}

// integral of the density over [a, b] with panels graded toward any of the
// singular points +-1 inside the range
AdaptiveResult integrate_density(int n, double a, double b, double tol) {
    std::vector<double> brk{a, b};
    for (double s : {-1.0, 1.0}) {
        if (a < s && s < b) brk.push_back(s);
        int levels = static_cast<int>(std::ceil(std::log2(n + 2))) + 6;
        for (int j = 1; j <= levels; ++j) {
            double step = std::ldexp(1.0, -j);
            for (double p : {s - step, s + step})
                if (a < p && p < b) brk.push_back(p);
        }
    }
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    AdaptiveResult out;
    auto f = [n](double t) { return ek_density(n, t); };
    double tol_each = tol / static_cast<double>(brk.size());
    for (std::size_t i = 0; i + 1 < brk.size(); ++i)
        adapt(f, brk[i], brk[i + 1], tol_each, 0, out);
    return out;
}

} // namespace

QuadResult ek_expected(int n, std::optional<std::pair<double, double>> interval, double tol) {
    if (n < 1) throw std::invalid_argument("ek_expected: n >= 1 required");
    AdaptiveResult r;
    if (!interval) {
        // whole line = 4 * (0,1) by the two reflection symmetries
        r = integrate_density(n, 0.0, 1.0, tol / 4.0);
        return {4.0 * r.value, 4.0 * r.err, r.panels};
    }
    auto [a, b] = *interval;
    if (!(a < b)) return {0.0, 0.0, 0};
    r = integrate_density(n, a, b, tol);
    return {r.value, r.err, r.panels};
}

double ek_residual(int n) {
    if (n < 1) throw std::invalid_argument("ek_residual: n >= 1 required");
    return ek_expected(n).value - (2.0 / kPi) * std::log(static_cast<double>(n));
}

TailResult ek_limit_tail(double C0) {
    if (!(C0 > 1.0)) throw std::invalid_argument("ek_limit_tail: C0 > 1 required");
    double integral = std::atanh(1.0 - 1.0 / C0) / kPi;
    return {integral, kGaussianResidual / 4.0 - integral};
}

} // namespace kac
