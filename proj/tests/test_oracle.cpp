#include <cmath>
#include <vector>

#include <doctest.h>

#include "fpp/forward.hpp"
#include "fpp/oracle.hpp"
#include "helpers.hpp"

using namespace fpp;

namespace {
const PeriodParams kA = derive(1.2, 0.9, 0.6);
const PeriodParams kB = derive(1.1, 0.5, 0.2);
}  // namespace

TEST_CASE("the brute-force maximum agrees with the constructed policy") {
  const auto st = step_policy(power_utility(2.0), kA);
  const auto best = maximize(st.utility, kA, 1.0);
  CHECK(best.argmax == approx(80.0 / 11.0, 1e-6).scale(0.0));
  CHECK(best.value == approx(2.0, 1e-9).scale(0.0));
}

TEST_CASE("the oracle handles a negative optimal allocation near the boundary") {
  // here the optimum sits at about -9.85 against an admissible floor of -10
  const auto st = step_policy(power_utility(2.0), kB);
  const auto best = maximize(st.utility, kB, 1.0);
  CHECK(best.argmax == approx(-266.0 / 27.0, 1e-6).scale(0.0));
  CHECK(best.value == approx(2.0, 1e-9).scale(0.0));
}

TEST_CASE("a wrong successor utility overshoots the current value") {
  // against its own one-period lookahead the current utility is not a
  // martingale: the maximized expectation strictly exceeds U0
  const auto U0 = power_utility(2.0);
  const auto best = maximize(U0, kA, 1.0);
  CHECK(best.value > 2.01);
}

TEST_CASE("verify_pair returns rows in input order with matching columns") {
  const auto st = step_policy(power_utility(2.0), kA);
  const std::vector<double> xs{0.5, 1.0, 2.0, 5.0};
  const auto rows = verify_pair(st.prev_utility, st.utility, kA, xs);
  REQUIRE(rows.size() == xs.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].x == xs[i]);
    CHECK(rows[i].expected_value ==
          approx(2.0 * std::sqrt(xs[i]), 1e-10).scale(0.0));
    CHECK(rows[i].policy_argmax ==
          approx(80.0 / 11.0 * xs[i], 1e-9).scale(0.0));
    CHECK(rows[i].oracle_value ==
          approx(rows[i].expected_value, 1e-8).scale(0.0));
    CHECK(std::abs(rows[i].oracle_argmax - rows[i].policy_argmax) <=
          1e-6 * std::max(1.0, std::abs(rows[i].policy_argmax)));
  }
}

TEST_CASE("allocation scales linearly in wealth for power utilities") {
  const auto st = step_policy(power_utility(2.0), kA);
  for (double x : {0.25, 1.0, 8.0}) {
    CHECK(st.pi_star(x) == approx(80.0 / 11.0 * x, 1e-10).scale(0.0));
  }
}
