#pragma once
// Inverse marginal functions I: (0, inf) -> (0, inf), strictly decreasing
// with I(0+) = inf and I(inf) = 0. Immutable value type; copies share the
// underlying representation and are safe to use concurrently.

#include <filesystem>
#include <memory>
#include <vector>

namespace fpp {

namespace detail {
struct MarginalImpl;
}

class MarginalFn {
 public:
  enum class Kind { Power, Scaled, Tabulated, SeriesBacked, LogPeriodic };

  MarginalFn() = default;  // empty; any use throws DomainError

  // y^-theta, theta > 0.
  static MarginalFn power(double theta);

  // scale * y^-theta, theta > 0, scale > 0.
  static MarginalFn scaled_power(double theta, double scale);

  // Monotone cubic interpolant of (log y, log I) knots with power-law tails
  // fitted to the outermost decade on each side. Requires >= 4 knots,
  // strictly increasing positive ys, positive finite values. Decreasingness
  // of the values is diagnosed by check_inada, not enforced here.
  static MarginalFn tabulated(std::vector<double> ys,
                              std::vector<double> values);

  // Lazy alternating sum  prefactor * sum_m (-1)^m weight_ratio^m *
  // base(arg_ratio^m * arg_scale * y).  Evaluation stops once the next term
  // falls below tol relative to the partial sum (the omitted tail is bounded
  // by that term) and enforces that term magnitudes decrease; it throws
  // DivergenceDetected otherwise or when max_terms is hit.
  static MarginalFn alternating_series(MarginalFn base, double prefactor,
                                       double weight_ratio, double arg_ratio,
                                       double arg_scale, double tol = 1e-12,
                                       int max_terms = 10'000);

  // y^exponent * (level + amplitude * sin(pi * ln y / log_period)):
  // a power law modulated log-periodically; flips the modulation sign when
  // y is scaled by exp(log_period). Level must exceed amplitude.
  static MarginalFn log_periodic(double exponent, double level,
                                 double amplitude, double log_period);

  double operator()(double y) const;

  // Solves I(y) = z to |I(y) - z| <= tol * z. Closed form for power kinds;
  // otherwise geometric bracket expansion plus Brent. Throws BracketFailure
  // when no bracket is found (the function fails to reach z on either side).
  double invert(double z, double tol = 1e-10) const;

  Kind kind() const;
  // True when the function is exactly power_scale() * y^-power_theta():
  // the power kinds, and series over a power base (their terms are
  // geometric, so the sum is a single power law).
  bool is_power_form() const;
  double power_theta() const;  // requires is_power_form()
  double power_scale() const;

  // Knot abscissae when Tabulated, empty otherwise.
  std::vector<double> knots() const;

  // Samples this function onto n log-spaced knots over [y_min, y_max].
  MarginalFn tabulate(int n = 512, double y_min = 1e-8,
                      double y_max = 1e8) const;

 private:
  explicit MarginalFn(std::shared_ptr<const detail::MarginalImpl> impl);
  std::shared_ptr<const detail::MarginalImpl> impl_;
};

struct InadaReport {
  double value_at_min = 0.0;
  double value_at_max = 0.0;
  int monotonicity_violations = 0;  // adjacent sample pairs failing to decrease
  int samples = 0;
};

// Samples I on a log-spaced grid and reports the boundary values together
// with the count of non-decreasing adjacent pairs. A healthy inverse
// marginal has zero violations, a large value at y_min and a small one at
// y_max (thresholds are the caller's).
InadaReport check_inada(const MarginalFn& fn, double y_min = 1e-8,
                        double y_max = 1e8, int samples = 1000);

// Two-column CSV (y, I(y)) with a header row, full double precision.
void save_marginal_csv(const MarginalFn& fn, const std::filesystem::path& path,
                       const std::vector<double>& grid);
MarginalFn load_marginal_csv(const std::filesystem::path& path);

}  // namespace fpp
