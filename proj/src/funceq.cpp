#include "fpp/funceq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpp/errors.hpp"
#include "fpp/numerics.hpp"

namespace fpp {

namespace {

const char* phi_name(PhiDirection d) {
  switch (d) {
    case PhiDirection::StrictlyIncreasing: return "strictly increasing";
    case PhiDirection::StrictlyDecreasing: return "strictly decreasing";
    default: return "non-monotone";
  }
}

// Max of psi(y) = y^-k I0(c y) over [lo, hi], sampled log-spaced.
double psi_decade_max(const MarginalFn& I0, double k, double c, double lo,
                      double hi, int n) {
  double best = 0.0;
  for (double y : num::logspace(lo, hi, n))
    best = std::max(best, std::pow(y, -k) * I0(c * y));
  return best;
}

MarginalFn build_series(const MarginalFn& I0, const PeriodParams& params,
                        Branch which, double tol, int max_terms) {
  const double a = params.a, b = params.b, c = params.c;
  // A power-form input is rebased onto the primitive power so chained
  // periods never nest series evaluations inside series evaluations.
  const MarginalFn base =
      I0.is_power_form()
          ? MarginalFn::scaled_power(I0.power_theta(), I0.power_scale())
          : I0;
  if (which == Branch::SeriesI)
    return MarginalFn::alternating_series(base, (1.0 + b) / b, 1.0 / b, a, c,
                                          tol, max_terms);
  return MarginalFn::alternating_series(base, 1.0 + b, b, 1.0 / a, c / a, tol,
                                        max_terms);
}

}  // namespace

ConditionReport classify(const MarginalFn& I0, const PeriodParams& params,
                         const ClassifyConfig& cfg) {
  if (!(cfg.y_min > 0.0) || !(cfg.y_max >= cfg.y_min * 1e6) ||
      cfg.phi_samples < 8)
    throw DomainError("classify: grid must span at least six decades");

  ConditionReport rep;

  // Direction of phi by sign constancy of finite differences.
  {
    const auto grid = num::logspace(cfg.y_min, cfg.y_max, cfg.phi_samples);
    bool any_up = false, any_down = false;
    double prev = 0.0;
    for (int i = 0; i < cfg.phi_samples; ++i) {
      const double v =
          I0(params.a * params.c * grid[i]) - params.b * I0(params.c * grid[i]);
      if (i > 0) {
        if (v > prev) any_up = true;
        else if (v < prev) any_down = true;
        else { any_up = any_down = true; }  // tie: not strictly monotone
      }
      prev = v;
    }
    rep.phi_direction = (any_up && !any_down) ? PhiDirection::StrictlyIncreasing
                        : (any_down && !any_up)
                            ? PhiDirection::StrictlyDecreasing
                            : PhiDirection::NonMonotone;
  }

  if (params.trivial()) {
    rep.branch = Branch::TrivialAEq1;
    return rep;
  }

  const double k = params.log_ratio();
  if (I0.is_power_form() &&
      std::abs(I0.power_theta() + k) < cfg.pathological_tol)
    throw PathologicalTheta(
        "classify: theta = " + std::to_string(I0.power_theta()) +
        " collides with -ln(b)/ln(a) = " + std::to_string(-k) +
        "; the equation has a solution family there, none constructible");

  // psi limits. The report always carries the sampled decade maxima; the
  // vanishing verdicts are exact for power-form inputs (psi is then the pure
  // power y^-(theta+k), whose limits follow from the exponent sign) and
  // otherwise use the sampled proxy: outermost decade max small and the
  // three outermost decade maxima decreasing toward the boundary.
  {
    const int n = std::max(16, cfg.phi_samples / 16);
    double lo[3], hi[3];
    for (int j = 0; j < 3; ++j) {
      const double step = std::pow(10.0, j);
      lo[j] = psi_decade_max(I0, k, params.c, cfg.y_min * step,
                             cfg.y_min * step * 10.0, n);
      hi[j] = psi_decade_max(I0, k, params.c, cfg.y_max / (step * 10.0),
                             cfg.y_max / step, n);
    }
    rep.psi_limit_at_zero = lo[0];
    rep.psi_limit_at_infinity = hi[0];
    if (I0.is_power_form()) {
      const double gap = I0.power_theta() + k;
      rep.psi_vanishes_at_zero = gap < 0.0;
      rep.psi_vanishes_at_infinity = gap > 0.0;
    } else {
      rep.psi_vanishes_at_zero =
          lo[0] < cfg.psi_accept && lo[0] < lo[1] && lo[1] < lo[2];
      rep.psi_vanishes_at_infinity =
          hi[0] < cfg.psi_accept && hi[0] < hi[1] && hi[1] < hi[2];
    }
  }

  const bool a_above = params.a > 1.0;
  if (rep.phi_direction == PhiDirection::StrictlyIncreasing &&
      (a_above ? rep.psi_vanishes_at_infinity : rep.psi_vanishes_at_zero))
    rep.series_branch = Branch::SeriesI;
  else if (rep.phi_direction == PhiDirection::StrictlyDecreasing &&
           (a_above ? rep.psi_vanishes_at_zero : rep.psi_vanishes_at_infinity))
    rep.series_branch = Branch::SeriesII;

  rep.branch = rep.series_branch;
  if (I0.is_power_form() && I0.power_theta() != 1.0)
    rep.branch = Branch::PowerClosedForm;
  return rep;
}

MarginalFn solve_series_i(const MarginalFn& I0, const PeriodParams& params,
                          double tol, int max_terms) {
  const auto rep = classify(I0, params);
  if (rep.series_branch != Branch::SeriesI)
    throw WrongSignRegime(
        std::string("solve_series_i: conditions not met (phi ") +
        phi_name(rep.phi_direction) + ", psi decade maxima " +
        std::to_string(rep.psi_limit_at_zero) + " / " +
        std::to_string(rep.psi_limit_at_infinity) + ")");
  return build_series(I0, params, Branch::SeriesI, tol, max_terms);
}

MarginalFn solve_series_ii(const MarginalFn& I0, const PeriodParams& params,
                           double tol, int max_terms) {
  const auto rep = classify(I0, params);
  if (rep.series_branch != Branch::SeriesII)
    throw WrongSignRegime(
        std::string("solve_series_ii: conditions not met (phi ") +
        phi_name(rep.phi_direction) + ", psi decade maxima " +
        std::to_string(rep.psi_limit_at_zero) + " / " +
        std::to_string(rep.psi_limit_at_infinity) + ")");
  return build_series(I0, params, Branch::SeriesII, tol, max_terms);
}

MarginalFn solve_power(double theta, const PeriodParams& params) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw DomainError("solve_power: theta must be positive, got " +
                      std::to_string(theta));
  if (theta == 1.0)
    throw ThetaOne(
        "solve_power: theta = 1 is excluded from the closed form; solve the "
        "series instead");
  if (params.trivial()) return MarginalFn::scaled_power(theta, 1.0);
  const double k = params.log_ratio();
  if (std::abs(theta + k) < 1e-9)
    throw PathologicalTheta("solve_power: theta = " + std::to_string(theta) +
                            " collides with -ln(b)/ln(a)");
  const double delta =
      (1.0 + params.b) /
      (std::pow(params.c, theta) * (std::pow(params.a, -theta) + params.b));
  return MarginalFn::scaled_power(theta, delta);
}

MarginalFn solve(const MarginalFn& I0, const PeriodParams& params, double tol,
                 const ClassifyConfig& cfg) {
  const auto rep = classify(I0, params, cfg);
  switch (rep.branch) {
    case Branch::TrivialAEq1:
      return I0;
    case Branch::PowerClosedForm: {
      const double theta = I0.power_theta();
      const double delta = solve_power(theta, params).power_scale();
      return MarginalFn::scaled_power(theta, I0.power_scale() * delta);
    }
    case Branch::SeriesI:
    case Branch::SeriesII:
      return build_series(I0, params, rep.branch, tol, 10'000);
    default:
      throw NoConstructiveBranch(
          std::string("solve: neither series is admitted (phi ") +
          phi_name(rep.phi_direction) + ", psi decade maxima " +
          std::to_string(rep.psi_limit_at_zero) + " near zero, " +
          std::to_string(rep.psi_limit_at_infinity) + " near infinity)");
  }
}

double residual(const MarginalFn& I1, const MarginalFn& I0,
                const PeriodParams& params, double y) {
  return I1(params.a * y) + params.b * I1(y) -
         (1.0 + params.b) * I0(params.c * y);
}

NonUniquePair make_nonunique_pair(const PeriodParams& params) {
  if (params.trivial())
    throw WrongSignRegime("make_nonunique_pair: degenerate market (p = q)");
  const double k = params.log_ratio();
  if (!(k < 0.0))
    throw WrongSignRegime(
        "make_nonunique_pair: requires ln(b)/ln(a) < 0, got " +
        std::to_string(k));
  NonUniquePair out;
  out.exponent = k;
  out.level = (1.0 + params.b) / (2.0 * params.b * std::pow(params.c, -k));
  out.amplitude_bound = out.level * (-k) / (1.0 - k);
  out.amplitude = 0.5 * out.amplitude_bound;
  out.principal = MarginalFn::scaled_power(-k, out.level);
  out.perturbed = MarginalFn::log_periodic(k, out.level, out.amplitude,
                                           std::log(params.a));
  return out;
}

std::pair<double, double> uniqueness_limit(const MarginalFn& I,
                                           const PeriodParams& params,
                                           double y_min, double y_max,
                                           int per_decade) {
  if (!(y_min > 0.0) || !(y_max >= y_min * 100.0) || per_decade < 2)
    throw DomainError("uniqueness_limit: grid must span at least two decades");
  const double k = params.log_ratio();
  double low = 0.0, high = 0.0;
  for (double y : num::logspace(y_min, y_min * 10.0, per_decade))
    low = std::max(low, std::pow(y, -k) * I(y));
  for (double y : num::logspace(y_max / 10.0, y_max, per_decade))
    high = std::max(high, std::pow(y, -k) * I(y));
  return {low, high};
}

}  // namespace fpp
