#include "fpp/oracle.hpp"

#include <future>

#include "fpp/numerics.hpp"

namespace fpp {

OracleResult maximize(const UtilityFn& successor, const PeriodParams& params,
                      double x, const OracleConfig& cfg) {
  const auto range = admissible_range(params, x);
  const double lo = range.lo + cfg.edge_shrink * x;
  const double hi = range.hi - cfg.edge_shrink * x;
  const auto objective = [&](double pi) {
    return params.p * successor.value(x + pi * (params.u - 1.0)) +
           (1.0 - params.p) * successor.value(x + pi * (params.d - 1.0));
  };
  const auto best =
      num::golden_max(objective, lo, hi, cfg.prescan, cfg.window_rel * x);
  return {best.arg, best.value};
}

std::vector<VerifyRow> verify_pair(const UtilityFn& current,
                                   const UtilityFn& successor,
                                   const PeriodParams& params,
                                   const std::vector<double>& wealths,
                                   const OracleConfig& cfg) {
  const auto one = [&](double x) {
    VerifyRow row;
    row.x = x;
    const auto best = maximize(successor, params, x, cfg);
    row.oracle_value = best.value;
    row.oracle_argmax = best.argmax;
    row.expected_value = current.value(x);
    const double m = current.marginal(x);
    const auto& inv = successor.inv_marginal();
    row.policy_argmax = (inv(params.rho_u * m) - inv(params.rho_d * m)) /
                        (params.u - params.d);
    return row;
  };
  std::vector<std::future<VerifyRow>> futures;
  futures.reserve(wealths.size());
  for (double x : wealths)
    futures.push_back(std::async(std::launch::async, one, x));
  std::vector<VerifyRow> rows;
  rows.reserve(wealths.size());
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

}  // namespace fpp
