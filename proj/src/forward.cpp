#include "fpp/forward.hpp"

#include <cmath>
#include <string>

#include "fpp/errors.hpp"

namespace fpp {

double ForwardStep::wealth_up(double x) const {
  return inv_marginal(params.rho_u * prev_utility.marginal(x));
}

double ForwardStep::wealth_down(double x) const {
  return inv_marginal(params.rho_d * prev_utility.marginal(x));
}

double ForwardStep::pi_star(double x) const {
  return (wealth_up(x) - wealth_down(x)) / (params.u - params.d);
}

ForwardStep step_policy(const UtilityFn& utility, const PeriodParams& params,
                        const StepConfig& cfg) {
  ForwardStep st;
  st.params = params;
  st.report = classify(utility.inv_marginal(), params, cfg.classify);
  MarginalFn next = solve(utility.inv_marginal(), params, cfg.series_tol,
                          cfg.classify);
  // Power-form series evaluate in closed form, so only genuinely lazy
  // series are worth flattening between periods.
  if (cfg.retabulate_series && next.kind() == MarginalFn::Kind::SeriesBacked &&
      !next.is_power_form())
    next = next.tabulate(cfg.grid_points, cfg.classify.y_min,
                         cfg.classify.y_max);
  st.inv_marginal = next;
  st.utility = reconstruct(next, utility, params, 1.0, cfg.quad);
  st.prev_utility = utility;
  return st;
}

ForwardStep step(const UtilityFn& utility, const PeriodParams& params,
                 double x, std::optional<Outcome> outcome,
                 const StepConfig& cfg) {
  const auto range = admissible_range(params, x);  // validates x > 0
  ForwardStep st = step_policy(utility, params, cfg);
  const double pi = st.pi_star(x);
  const double slack = cfg.admissibility_tol * (range.hi - range.lo);
  if (pi < range.lo - slack || pi > range.hi + slack)
    throw AdmissibilityViolation(
        "step: allocation " + std::to_string(pi) + " escapes [" +
        std::to_string(range.lo) + ", " + std::to_string(range.hi) +
        "]; the solved marginal is numerically inconsistent");
  st.entering_wealth = x;
  st.allocation = pi;
  st.outcome = outcome;
  if (outcome) {
    const double ret = (*outcome == Outcome::Up) ? params.u : params.d;
    st.realized_wealth = x + pi * (ret - 1.0);
  }
  return st;
}

std::vector<ForwardStep> run(const Scenario& scenario, const StepConfig& cfg) {
  if (!(scenario.initial_wealth > 0.0) ||
      !std::isfinite(scenario.initial_wealth))
    throw NonpositiveWealth("run: initial wealth must be positive, got " +
                            std::to_string(scenario.initial_wealth));
  if (scenario.periods.empty())
    throw ValidationError("run: scenario has no periods");
  bool unrealized_seen = false;
  for (size_t i = 0; i < scenario.periods.size(); ++i) {
    if (scenario.periods[i].realized && unrealized_seen)
      throw ValidationError(
          "run: period " + std::to_string(i + 1) +
          " has a realized outcome after an unrealized period");
    if (!scenario.periods[i].realized) unrealized_seen = true;
  }

  std::vector<ForwardStep> out;
  out.reserve(scenario.periods.size());
  UtilityFn current = scenario.initial_utility;
  std::optional<double> wealth = scenario.initial_wealth;
  for (const auto& pd : scenario.periods) {
    const auto params = derive(pd.u, pd.d, pd.p);
    ForwardStep st = wealth ? step(current, params, *wealth, pd.realized, cfg)
                            : step_policy(current, params, cfg);
    wealth = st.realized_wealth
                 ? std::optional<double>(*st.realized_wealth)
                 : std::nullopt;
    current = st.utility;
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<ForwardStep> run(const Scenario& scenario) {
  StepConfig cfg;
  cfg.retabulate_series = true;
  return run(scenario, cfg);
}

}  // namespace fpp
