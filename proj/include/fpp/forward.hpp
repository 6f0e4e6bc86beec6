#pragma once
// One period of the forward construction. The successor inverse marginal is
// solved from the functional equation and the successor utility is anchored
// from the current one; both depend only on the current utility and the
// period parameters. The realized outcome, when known, merely selects which
// of the two optimal wealths the path takes.

#include <optional>
#include <vector>

#include "fpp/funceq.hpp"
#include "fpp/marginal.hpp"
#include "fpp/market.hpp"
#include "fpp/utility.hpp"

namespace fpp {

enum class Outcome { Up, Down };

struct StepConfig {
  double series_tol = 1e-12;
  ClassifyConfig classify;
  QuadratureConfig quad;
  double admissibility_tol = 1e-9;  // relative to the admissible width
  // Replace a series-backed solution by its tabulation on the classify grid
  // before building the successor utility, so multi-period chains do not
  // nest series evaluations inside series evaluations. A bare step keeps
  // the exact series; run() enables the tabulation.
  bool retabulate_series = false;
  int grid_points = 512;
};

struct ForwardStep {
  PeriodParams params;
  ConditionReport report;
  MarginalFn inv_marginal;  // successor inverse marginal
  UtilityFn utility;        // successor utility
  UtilityFn prev_utility;   // entering utility, kept for the policy maps

  std::optional<double> entering_wealth;
  std::optional<double> allocation;  // optimal allocation at entering_wealth
  std::optional<Outcome> outcome;
  std::optional<double> realized_wealth;

  // Optimal next-period wealth as a function of current wealth.
  double wealth_up(double x) const;    // I1(rho_u U'(x))
  double wealth_down(double x) const;  // I1(rho_d U'(x))
  double pi_star(double x) const;      // (wealth_up - wealth_down) / (u - d)
};

// Solves one period at wealth x. Throws AdmissibilityViolation if the
// computed allocation escapes the admissible range beyond tolerance (the
// construction guarantees admissibility, so that signals numerical failure).
ForwardStep step(const UtilityFn& utility, const PeriodParams& params,
                 double x, std::optional<Outcome> outcome = {},
                 const StepConfig& cfg = {});

// Policy-only variant: no wealth, no allocation, no realized wealth.
ForwardStep step_policy(const UtilityFn& utility, const PeriodParams& params,
                        const StepConfig& cfg = {});

struct ScenarioPeriod {
  double u = 0.0;
  double d = 0.0;
  double p = 0.0;
  std::optional<Outcome> realized;
};

struct Scenario {
  UtilityFn initial_utility;
  double initial_wealth = 0.0;
  std::vector<ScenarioPeriod> periods;
};

// Runs the scenario front to back, threading realized wealth while outcomes
// are present. Periods with realized outcomes must precede any without
// (ValidationError otherwise); periods after the first unrealized one still
// produce solved marginals and utilities but no wealth path.
std::vector<ForwardStep> run(const Scenario& scenario, const StepConfig& cfg);
std::vector<ForwardStep> run(const Scenario& scenario);  // retabulates series

}  // namespace fpp
