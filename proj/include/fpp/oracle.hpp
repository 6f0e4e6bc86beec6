#pragma once
// Brute-force optimality check, independent of the solver: maximize the
// expected successor utility over admissible allocations by grid scan plus
// golden-section. For a correctly constructed pair the maximized value
// returns the current utility and the argmax matches the policy allocation.

#include <vector>

#include "fpp/market.hpp"
#include "fpp/utility.hpp"

namespace fpp {

struct OracleConfig {
  int prescan = 1001;          // uniform scan guarding against non-unimodality
  double edge_shrink = 1e-12;  // times wealth: inset from the admissible ends
  double window_rel = 1e-10;   // times wealth: golden-section stop window
};

struct OracleResult {
  double argmax = 0.0;
  double value = 0.0;
};

// max over admissible pi of  p U1(x + pi (u-1)) + (1-p) U1(x + pi (d-1)).
// Throws NonConcaveDetected when the scan is not unimodal (corrupt U1).
OracleResult maximize(const UtilityFn& successor, const PeriodParams& params,
                      double x, const OracleConfig& cfg = {});

struct VerifyRow {
  double x = 0.0;
  double oracle_value = 0.0;
  double oracle_argmax = 0.0;
  double expected_value = 0.0;  // current utility at x
  double policy_argmax = 0.0;   // allocation from the inverse-marginal maps
};

// Runs maximize at each wealth (in parallel; rows come back in input order)
// and tabulates oracle vs construction.
std::vector<VerifyRow> verify_pair(const UtilityFn& current,
                                   const UtilityFn& successor,
                                   const PeriodParams& params,
                                   const std::vector<double>& wealths,
                                   const OracleConfig& cfg = {});

}  // namespace fpp
