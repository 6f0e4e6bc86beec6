#pragma once
// The one-period linear functional equation linking an inverse marginal I0
// at time n to its predictable successor I1:
//
//   I1(a y) + b I1(y) = (1 + b) I0(c y),  y > 0,
//
// with a, b, c from PeriodParams. Auxiliary functions decide which
// constructive route applies:
//   phi(y) = I0(a c y) - b I0(c y)   (direction: increasing or decreasing)
//   psi(y) = y^(-k) I0(c y), k = ln b / ln a   (vanishing at 0+ or infinity)

#include <utility>

#include "fpp/marginal.hpp"
#include "fpp/market.hpp"

namespace fpp {

enum class PhiDirection { StrictlyIncreasing, StrictlyDecreasing, NonMonotone };

enum class Branch {
  SeriesI,          // alternating series in b^-m I0(a^m c y)
  SeriesII,         // alternating series in b^m I0(a^-(m+1) c y)
  TrivialAEq1,      // p = q: I1 = I0 solves the equation
  PowerClosedForm,  // power input: I1 = delta y^-theta exactly
  Unsolvable        // sampled conditions certify neither series
};

struct ClassifyConfig {
  double y_min = 1e-8;
  double y_max = 1e8;
  int phi_samples = 256;  // log-spaced sign-constancy probe for phi
  // A vanishing psi limit is accepted when the outermost decade max is
  // below psi_accept and the three outermost decade maxima decrease
  // toward the boundary.
  double psi_accept = 1e-4;
  double pathological_tol = 1e-9;  // |theta + k| guard for power inputs
};

struct ConditionReport {
  PhiDirection phi_direction = PhiDirection::NonMonotone;
  double psi_limit_at_zero = 0.0;      // max of psi over the lowest decade
  double psi_limit_at_infinity = 0.0;  // max of psi over the highest decade
  bool psi_vanishes_at_zero = false;
  bool psi_vanishes_at_infinity = false;
  // Route solve() takes. Power inputs go to the closed form even when a
  // series also converges.
  Branch branch = Branch::Unsolvable;
  // The series admitted by the sampled conditions, also populated when
  // branch is PowerClosedForm; Unsolvable when neither series is certified.
  Branch series_branch = Branch::Unsolvable;
};

// Samples phi and psi and picks the constructive route. Throws
// PathologicalTheta for a power input with theta within pathological_tol of
// -ln b / ln a (the equation admits a one-parameter solution family there;
// see make_nonunique_pair).
ConditionReport classify(const MarginalFn& I0, const PeriodParams& params,
                         const ClassifyConfig& cfg = {});

// I1(y) = ((1+b)/b) sum_m (-1)^m b^-m I0(a^m c y). Requires the SeriesI
// conditions (throws WrongSignRegime otherwise).
MarginalFn solve_series_i(const MarginalFn& I0, const PeriodParams& params,
                          double tol = 1e-12, int max_terms = 10'000);

// I1(y) = (1+b) sum_m (-1)^m b^m I0(a^-(m+1) c y). Requires the SeriesII
// conditions (throws WrongSignRegime otherwise).
MarginalFn solve_series_ii(const MarginalFn& I0, const PeriodParams& params,
                           double tol = 1e-12, int max_terms = 10'000);

// Exact solution for I0 = y^-theta:  delta y^-theta with
// delta = (1+b) / (c^theta (a^-theta + b)). Throws ThetaOne for theta = 1
// (use the series; the scale is still well defined but callers of this
// closed form expect the associated utility normalization) and
// PathologicalTheta near theta = -ln b / ln a.
MarginalFn solve_power(double theta, const PeriodParams& params);

// classify + dispatch. Power inputs of any scale use the closed form
// (scales commute with the equation); theta = 1 powers run through the
// admitted series; Unsolvable throws NoConstructiveBranch.
MarginalFn solve(const MarginalFn& I0, const PeriodParams& params,
                 double tol = 1e-12, const ClassifyConfig& cfg = {});

// I1(a y) + b I1(y) - (1+b) I0(c y); zero when I1 solves the equation at y.
double residual(const MarginalFn& I1, const MarginalFn& I0,
                const PeriodParams& params, double y);

// Two distinct strictly decreasing solutions for the pathological power
// input I0 = y^k, k = ln b / ln a < 0: the self-similar  level * y^k  and a
// log-periodically modulated variant. Both solve the equation exactly;
// neither satisfies the vanishing-limit condition singling out a unique
// solution.
struct NonUniquePair {
  MarginalFn principal;
  MarginalFn perturbed;
  double exponent = 0.0;         // k < 0
  double level = 0.0;            // scale of the self-similar solution
  double amplitude = 0.0;        // modulation actually used (half the bound)
  double amplitude_bound = 0.0;  // strict bound keeping the variant decreasing
};
NonUniquePair make_nonunique_pair(const PeriodParams& params);

// Sampled sup of y^(-k) I(y) over the lowest and highest decade of the
// grid: proxies for the two vanishing limits of the uniqueness condition.
// A solution is singled out as unique when either component vanishes.
std::pair<double, double> uniqueness_limit(const MarginalFn& I,
                                           const PeriodParams& params,
                                           double y_min = 1e-8,
                                           double y_max = 1e8,
                                           int per_decade = 256);

}  // namespace fpp
