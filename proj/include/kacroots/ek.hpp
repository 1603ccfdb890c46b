#pragma once

#include <optional>
#include <utility>

namespace kac {

// Expected number of real zeros of the Gaussian Kac polynomial: exact density
// evaluation and singularity-aware adaptive quadrature.

// Residual constant of the Gaussian expectation, E N_n - (2/pi) ln n -> C.
inline constexpr double kGaussianResidual = 0.625738072;

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

// Real-zero density rho_n(t).  The removable singularity at |t| = 1 is
// evaluated by a double-double pass with the u = 1-t substitution and a
// short polynomial limit extrapolation inside |1-|t|| < 1e-3/(n+1).
double ek_density(int n, double t);

// Integral of the density over the interval; whole line when absent.  The
// whole-line value folds to 4x the (0,1) integral through the t <-> -t and
// t <-> 1/t symmetries.
QuadResult ek_expected(int n, std::optional<std::pair<double, double>> interval = std::nullopt,
                       double tol = 1e-10);

// ek_expected(n, whole line) - (2/pi) ln n
double ek_residual(int n);

struct TailResult {
    double integral; // int_0^{1-1/C0} dt / (pi (1-t^2))
    double b_star;   // C_Gau / 4 - integral
};
TailResult ek_limit_tail(double C0);

} // namespace kac
