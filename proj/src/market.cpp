#include "fpp/market.hpp"

#include <cmath>
#include <string>

#include "fpp/errors.hpp"

namespace fpp {

bool PeriodParams::trivial() const { return std::abs(a - 1.0) < 1e-12; }

double PeriodParams::log_ratio() const {
  if (trivial())
    throw DomainError("log_ratio: undefined for a = 1 (p = q)");
  return std::log(b) / std::log(a);
}

PeriodParams derive(double u, double d, double p) {
  if (!std::isfinite(u) || !std::isfinite(d) || !std::isfinite(p))
    throw DomainError("derive: non-finite market parameter");
  if (!(0.0 < d && d < 1.0 && 1.0 < u))
    throw ArbitrageViolation("derive: returns must satisfy 0 < d < 1 < u, got u=" +
                             std::to_string(u) + " d=" + std::to_string(d));
  if (!(0.0 < p && p < 1.0))
    throw ProbabilityOutOfRange("derive: p must lie in (0, 1), got p=" +
                                std::to_string(p));

  PeriodParams out;
  out.u = u;
  out.d = d;
  out.p = p;
  out.q = (1.0 - d) / (u - d);
  const double one_minus_q = (u - 1.0) / (u - d);
  out.a = ((1.0 - p) * out.q) / (p * one_minus_q);
  out.b = one_minus_q / out.q;
  out.c = (1.0 - p) / one_minus_q;
  out.rho_u = out.q / p;
  out.rho_d = one_minus_q / (1.0 - p);
  return out;
}

AdmissibleRange admissible_range(const PeriodParams& params, double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw NonpositiveWealth("admissible_range: wealth must be positive, got x=" +
                            std::to_string(x));
  return {-x / (params.u - 1.0), x / (1.0 - params.d), x};
}

}  // namespace fpp
