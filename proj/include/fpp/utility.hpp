#pragma once
// Utility functions on wealth, represented by the inverse marginal
// I = (U')^{-1} together with one anchor value (x0, U(x0)). The marginal is
// U'(x) = I^{-1}(x); values integrate the marginal from the anchor with
// adaptive quadrature and are memoized per wealth. Immutable value type,
// safe to share across threads.

#include <filesystem>
#include <memory>
#include <vector>

#include "fpp/marginal.hpp"
#include "fpp/market.hpp"

namespace fpp {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  long max_evals = 1'000'000;
  double invert_tol = 1e-10;  // tolerance handed to MarginalFn::invert
};

class UtilityFn {
 public:
  UtilityFn() = default;  // empty; any use throws DomainError

  UtilityFn(MarginalFn inv_marginal, double anchor_x, double anchor_v,
            QuadratureConfig cfg = {});

  double value(double x) const;     // U(x), x > 0
  double marginal(double x) const;  // U'(x) = I^{-1}(x), x > 0

  const MarginalFn& inv_marginal() const;
  double anchor_x() const;
  double anchor_v() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// U(x) = x^(1-1/theta) / (1-1/theta), the power utility with inverse
// marginal y^-theta. Requires theta > 0; theta = 1 throws ThetaOne (that
// normalization degenerates; use log_utility).
UtilityFn power_utility(double theta);

// U(x) = ln x, inverse marginal 1/y.
UtilityFn log_utility();

// The successor utility for inverse marginal I1: U1' = I1^{-1}, anchored by
//   U1(s) = U0(s) + p * int_{Xu}^{s} I1^{-1}
//               + (1-p) * int_{Xd}^{s} I1^{-1},
// where Xu = I1(rho_u U0'(s)), Xd = I1(rho_d U0'(s)) are the optimal
// next-period wealths funded by wealth s. The resulting function does not
// depend on the anchor wealth s.
UtilityFn reconstruct(const MarginalFn& I1, const UtilityFn& U0,
                      const PeriodParams& params, double anchor_wealth = 1.0,
                      QuadratureConfig cfg = {});

// Three-column CSV (x, U, dU) with a header row, full double precision.
void save_utility_csv(const UtilityFn& fn, const std::filesystem::path& path,
                      const std::vector<double>& grid);

}  // namespace fpp
