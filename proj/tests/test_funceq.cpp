#include <cmath>
#include <vector>

#include <doctest.h>

#include "fpp/errors.hpp"
#include "fpp/funceq.hpp"
#include "fpp/numerics.hpp"
#include "helpers.hpp"

using namespace fpp;

namespace {
const PeriodParams kA = derive(1.2, 0.9, 0.6);  // a=1/3, b=2, c=0.6
const PeriodParams kB = derive(1.1, 0.5, 0.2);  // a=20, b=0.2, c=4.8

double rel_residual(const MarginalFn& I1, const MarginalFn& I0,
                    const PeriodParams& m, double y) {
  return std::abs(residual(I1, I0, m, y)) / ((1.0 + m.b) * I0(m.c * y));
}
}  // namespace

TEST_CASE("classify routes a non-unit power to the closed form") {
  const auto rep = classify(MarginalFn::power(2.0), kA);
  CHECK(rep.branch == Branch::PowerClosedForm);
  CHECK(rep.series_branch == Branch::SeriesII);
  CHECK(rep.phi_direction == PhiDirection::StrictlyDecreasing);
  CHECK(rep.psi_vanishes_at_infinity);
  CHECK_FALSE(rep.psi_vanishes_at_zero);
  CHECK(rep.psi_limit_at_infinity < 1e-4);
  CHECK(rep.psi_limit_at_zero > 1.0);
}

TEST_CASE("classify certifies the other series when the exponent is small") {
  // theta = 0.5 < -ln b / ln a on these parameters
  const auto rep = classify(MarginalFn::power(0.5), kA);
  CHECK(rep.branch == Branch::PowerClosedForm);
  CHECK(rep.series_branch == Branch::SeriesI);
  CHECK(rep.phi_direction == PhiDirection::StrictlyIncreasing);
  CHECK(rep.psi_vanishes_at_zero);
  CHECK_FALSE(rep.psi_vanishes_at_infinity);
}

TEST_CASE("classify sends tabulated data to a series") {
  const auto T = MarginalFn::power(2.0).tabulate(512);
  const auto rep = classify(T, kA);
  CHECK(rep.branch == Branch::SeriesII);
  CHECK(rep.series_branch == Branch::SeriesII);
}

TEST_CASE("classify spots the trivial regime") {
  const auto m = derive(1.2, 0.9, 1.0 / 3.0);
  const auto rep = classify(MarginalFn::power(2.0), m);
  CHECK(rep.branch == Branch::TrivialAEq1);
}

TEST_CASE("classify rejects the pathological power exponent") {
  const double k = kA.log_ratio();  // -0.63092975357145744
  CHECK_THROWS_AS(classify(MarginalFn::power(-k), kA), PathologicalTheta);
  CHECK_THROWS_AS(classify(MarginalFn::power(-k + 1e-10), kA),
                  PathologicalTheta);
  CHECK_NOTHROW(classify(MarginalFn::power(-k + 1e-6), kA));
}

TEST_CASE("classify wants a grid spanning several decades") {
  ClassifyConfig cfg;
  cfg.y_min = 1.0;
  cfg.y_max = 100.0;
  CHECK_THROWS_AS(classify(MarginalFn::power(2.0), kA, cfg), DomainError);
}

TEST_CASE("solve_power matches hand-reduced scales") {
  CHECK(solve_power(2.0, kA).power_scale() ==
        approx(25.0 / 33.0, 1e-14).scale(0.0));
  CHECK(solve_power(0.5, kA).power_scale() ==
        approx(1.0377627599154647, 1e-13).scale(0.0));
  CHECK(solve_power(2.0, kB).power_scale() ==
        approx(125.0 / 486.0, 1e-14).scale(0.0));
  CHECK(solve_power(2.0, kA).power_theta() == 2.0);
}

TEST_CASE("solve_power guards its edge cases") {
  CHECK_THROWS_AS(solve_power(1.0, kA), ThetaOne);
  CHECK_THROWS_AS(solve_power(0.0, kA), DomainError);
  CHECK_THROWS_AS(solve_power(-2.0, kA), DomainError);
  CHECK_THROWS_AS(solve_power(-kA.log_ratio(), kA), PathologicalTheta);
  const auto trivial = derive(1.2, 0.9, 1.0 / 3.0);
  CHECK(solve_power(2.0, trivial).power_scale() == approx(1.0, 1e-12));
}

TEST_CASE("series solution matches the closed form where both apply") {
  const auto S = solve_series_ii(MarginalFn::power(2.0), kA);
  CHECK(S.kind() == MarginalFn::Kind::SeriesBacked);
  const double delta = 25.0 / 33.0;
  for (double y : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
    CHECK(S(y) == approx(delta / (y * y), 1e-12).scale(0.0));
  }
  const auto S1 = solve_series_i(MarginalFn::power(2.0), kB);
  const double delta_b = 125.0 / 486.0;
  for (double y : {0.1, 1.0, 10.0}) {
    CHECK(S1(y) == approx(delta_b / (y * y), 1e-12).scale(0.0));
  }
  const auto Shalf = solve_series_i(MarginalFn::power(0.5), kA);
  const double delta_half = 1.0377627599154647;
  CHECK(Shalf(1.0) == approx(delta_half, 1e-11).scale(0.0));
}

TEST_CASE("each series refuses the opposite regime") {
  CHECK_THROWS_AS(solve_series_i(MarginalFn::power(2.0), kA), WrongSignRegime);
  CHECK_THROWS_AS(solve_series_ii(MarginalFn::power(2.0), kB), WrongSignRegime);
  CHECK_THROWS_AS(solve_series_ii(MarginalFn::power(0.5), kA), WrongSignRegime);
}

TEST_CASE("solve dispatches by kind and scale commutes through") {
  const auto closed = solve(MarginalFn::power(2.0), kA);
  CHECK(closed.is_power_form());
  CHECK(closed.power_scale() == approx(25.0 / 33.0, 1e-14).scale(0.0));

  const auto scaled = solve(MarginalFn::scaled_power(2.0, 5.0), kA);
  CHECK(scaled.power_scale() == approx(5.0 * 25.0 / 33.0, 1e-13).scale(0.0));

  const auto trivial = derive(1.2, 0.9, 1.0 / 3.0);
  const auto same = solve(MarginalFn::power(2.0), trivial);
  CHECK(same.is_power_form());
  CHECK(same.power_scale() == approx(1.0, 1e-12));
  CHECK(same.power_theta() == 2.0);

  const auto T = MarginalFn::power(2.0).tabulate(512);
  const auto ST = solve(T, kA);
  CHECK(ST.kind() == MarginalFn::Kind::SeriesBacked);
  for (double y : {0.01, 1.0, 100.0}) {
    CHECK(ST(y) == approx((25.0 / 33.0) / (y * y), 1e-8).scale(0.0));
  }
}

TEST_CASE("the unit exponent runs through the series and lands on scale one") {
  const auto I1 = solve(MarginalFn::power(1.0), kA);
  CHECK(I1.kind() == MarginalFn::Kind::SeriesBacked);
  // the series over a power base collapses to one power law, so the result
  // still reports an exact power view and later periods classify from it
  CHECK(I1.is_power_form());
  CHECK(I1.power_theta() == 1.0);
  CHECK(I1.power_scale() == approx(1.0, 1e-12));
  for (double y : {0.01, 0.5, 1.0, 3.0, 100.0}) {
    CHECK(I1(y) == approx(1.0 / y, 1e-10).scale(0.0));
  }
  const auto I1b = solve(MarginalFn::power(1.0), kB);
  for (double y : {0.1, 1.0, 10.0}) {
    CHECK(I1b(y) == approx(1.0 / y, 1e-10).scale(0.0));
  }
}

TEST_CASE("residual vanishes on solutions and flags non-solutions") {
  const auto I0 = MarginalFn::power(2.0);
  const auto I1 = solve(I0, kA);
  for (double y : num::logspace(1e-4, 1e4, 41)) {
    CHECK(rel_residual(I1, I0, kA, y) < 1e-14);
  }
  CHECK(rel_residual(I0, I0, kA, 1.0) > 1e-2);
}

TEST_CASE("the pathological exponent admits two exact solutions") {
  const auto pair = make_nonunique_pair(kB);
  CHECK(pair.exponent == approx(-0.53724357368048165, 1e-13).scale(0.0));
  CHECK(pair.level == approx(1.2916022051428171, 1e-13).scale(0.0));
  CHECK(pair.amplitude_bound == approx(0.45139559946454316, 1e-13).scale(0.0));
  CHECK(pair.amplitude == approx(0.5 * pair.amplitude_bound, 1e-15).scale(0.0));

  const auto I0 = MarginalFn::power(-pair.exponent);
  for (double y : num::logspace(1e-4, 1e4, 81)) {
    CHECK(rel_residual(pair.principal, I0, kB, y) < 1e-12);
    CHECK(rel_residual(pair.perturbed, I0, kB, y) < 1e-12);
  }
  // genuinely different functions
  bool differ = false;
  for (double y : num::logspace(0.1, 10.0, 21)) {
    if (std::abs(pair.principal(y) - pair.perturbed(y)) >
        1e-3 * pair.principal(y))
      differ = true;
  }
  CHECK(differ);
  // both stay strictly decreasing
  CHECK(check_inada(pair.principal).monotonicity_violations == 0);
  CHECK(check_inada(pair.perturbed).monotonicity_violations == 0);
}

TEST_CASE("neither pathological solution passes the vanishing-limit test") {
  const auto pair = make_nonunique_pair(kB);
  const auto lp = uniqueness_limit(pair.principal, kB);
  CHECK(lp.first == approx(pair.level, 1e-10));
  CHECK(lp.second == approx(pair.level, 1e-10));
  const auto lq = uniqueness_limit(pair.perturbed, kB);
  CHECK(lq.first >= pair.level - pair.amplitude - 1e-9);
  CHECK(lq.first <= pair.level + pair.amplitude + 1e-9);
  CHECK(lq.second >= pair.level - pair.amplitude - 1e-9);
  CHECK(lq.second <= pair.level + pair.amplitude + 1e-9);
  CHECK(lq.first > 0.5);
  CHECK(lq.second > 0.5);
}

TEST_CASE("the demo needs a negative pathological exponent") {
  // u=2, d=0.5, p=0.2 gives a=2, b=2, so ln b / ln a = 1 > 0
  const auto m = derive(2.0, 0.5, 0.2);
  CHECK_THROWS_AS(make_nonunique_pair(m), WrongSignRegime);
  const auto trivial = derive(1.2, 0.9, 1.0 / 3.0);
  CHECK_THROWS_AS(make_nonunique_pair(trivial), WrongSignRegime);
}

TEST_CASE("uniqueness_limit wants at least two decades") {
  CHECK_THROWS_AS(uniqueness_limit(MarginalFn::power(1.0), kB, 1.0, 5.0),
                  DomainError);
}
