#pragma once
// Shared numeric kernels: adaptive Gauss-Kronrod quadrature, Brent root
// bracketing, golden-section maximization with a unimodality pre-scan.

#include <functional>
#include <vector>

namespace fpp::num {

// Adaptive G7/K15 panel integration of f over [a, b] (either orientation).
// A panel is accepted when its Kronrod error estimate is below
// max(abs_tol * width_fraction, rel_tol * |panel value|). Throws
// QuadratureFailure when the evaluation budget runs out first.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 0.0,
                 long max_evals = 1'000'000);

// Root of f on [lo, hi]; requires sign change. Brent's method: bisection,
// secant, and inverse quadratic steps. Throws BracketFailure when the input
// bracket does not straddle a root.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol, int max_iter = 200);

struct GoldenResult {
  double arg;
  double value;
};

// Maximizes f over [lo, hi]. An n_scan-point uniform pre-scan locates the
// bracket and rejects non-unimodal data (NonConcaveDetected); golden-section
// then contracts the bracket below window_tol.
GoldenResult golden_max(const std::function<double(double)>& f, double lo,
                        double hi, int n_scan, double window_tol);

// n geometrically spaced points from y0 to y1 inclusive; y0, y1 > 0.
std::vector<double> logspace(double y0, double y1, int n);

}  // namespace fpp::num
