#pragma once
// One-period binomial market with zero interest: gross returns d < 1 < u,
// up-move probability p. All downstream coefficients are derived here once
// and validated eagerly.

namespace fpp {

struct PeriodParams {
  double u = 0.0;  // up gross return, > 1
  double d = 0.0;  // down gross return, in (0, 1)
  double p = 0.0;  // physical up probability, in (0, 1)

  double q = 0.0;      // risk-neutral up probability (1-d)/(u-d)
  double a = 0.0;      // (1-p) q / (p (1-q))
  double b = 0.0;      // (1-q)/q
  double c = 0.0;      // (1-p)/(1-q)
  double rho_u = 0.0;  // pricing kernel, up state: q/p
  double rho_d = 0.0;  // pricing kernel, down state: (1-q)/(1-p)

  // p = q up to rounding; the one-period problem degenerates (the kernel is
  // identically 1 and the optimal allocation is 0).
  bool trivial() const;

  // Exponent k solving a^k = b, i.e. ln(b)/ln(a). The power y^k is the
  // self-similar solution of the one-period equation; requires !trivial().
  double log_ratio() const;
};

struct AdmissibleRange {
  double lo = 0.0;  // -x/(u-1): short position wiping out wealth on an up move
  double hi = 0.0;  //  x/(1-d): long position wiping out wealth on a down move
  double x = 0.0;
};

// Derives the full parameter set. Throws ArbitrageViolation unless
// 0 < d < 1 < u, ProbabilityOutOfRange unless 0 < p < 1.
PeriodParams derive(double u, double d, double p);

// Allocations keeping next-period wealth positive in both states.
// Throws NonpositiveWealth unless x > 0.
AdmissibleRange admissible_range(const PeriodParams& params, double x);

}  // namespace fpp
