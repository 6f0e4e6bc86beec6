#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "fpp/cli_io.hpp"
#include "fpp/errors.hpp"
#include "fpp/numerics.hpp"
#include "helpers.hpp"

using namespace fpp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
  return path;
}

const char* kGoodScenario = R"({
  "initial_utility": {"kind": "power", "theta": 2.0},
  "initial_wealth": 1.0,
  "periods": [{"u": 1.2, "d": 0.9, "p": 0.6, "realized": "up"}]
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("load_scenario reads utilities, wealth and periods") {
  const auto dir = fresh_dir("fpp_cli_load");
  const auto path = write_file(dir / "s.json", kGoodScenario);
  const auto sc = load_scenario(path);
  CHECK(sc.initial_wealth == 1.0);
  REQUIRE(sc.periods.size() == 1);
  CHECK(sc.periods[0].u == 1.2);
  REQUIRE(sc.periods[0].realized.has_value());
  CHECK(*sc.periods[0].realized == Outcome::Up);
  CHECK(sc.initial_utility.value(1.0) == approx(2.0, 1e-12).scale(0.0));
  fs::remove_all(dir);
}

TEST_CASE("load_scenario resolves tabulated files next to the scenario") {
  const auto dir = fresh_dir("fpp_cli_tab");
  save_marginal_csv(MarginalFn::power(2.0), dir / "m.csv",
                    num::logspace(1e-8, 1e8, 128));
  write_file(dir / "s.json", R"({
    "initial_utility": {"kind": "tabulated", "file": "m.csv"},
    "initial_wealth": 2.5,
    "periods": [{"u": 1.2, "d": 0.9, "p": 0.6}]
  })");
  const auto sc = load_scenario(dir / "s.json");
  CHECK(sc.initial_utility.value(1.0) == approx(0.0, 1e-9));
  CHECK(sc.initial_utility.marginal(4.0) == approx(0.5, 1e-8).scale(0.0));
  fs::remove_all(dir);
}

TEST_CASE("load_scenario rejects malformed input") {
  const auto dir = fresh_dir("fpp_cli_bad");
  CHECK_THROWS_AS(load_scenario(dir / "missing.json"), ParseError);
  CHECK_THROWS_AS(load_scenario(write_file(dir / "a.json", "{ not json")),
                  ParseError);
  CHECK_THROWS_AS(load_scenario(write_file(dir / "b.json", R"({
    "initial_utility": {"kind": "power", "theta": 2.0},
    "initial_wealth": 1.0
  })")),
                  ParseError);  // no periods key
  CHECK_THROWS_AS(load_scenario(write_file(dir / "c.json", R"({
    "initial_utility": {"kind": "power", "theta": 2.0},
    "initial_wealth": 1.0,
    "periods": [{"u": 1.2, "d": 0.9, "p": 0.6, "realized": "sideways"}]
  })")),
                  ValidationError);
  CHECK_THROWS_AS(load_scenario(write_file(dir / "d.json", R"({
    "initial_utility": {"kind": "power", "theta": 2.0},
    "initial_wealth": 0.0,
    "periods": [{"u": 1.2, "d": 0.9, "p": 0.6}]
  })")),
                  NonpositiveWealth);
  CHECK_THROWS_AS(load_scenario(write_file(dir / "e.json", R"({
    "initial_utility": {"kind": "power", "theta": 2.0},
    "initial_wealth": 1.0,
    "periods": [{"u": 0.9, "d": 0.8, "p": 0.6}]
  })")),
                  ArbitrageViolation);
  CHECK_THROWS_AS(load_scenario(write_file(dir / "f.json", R"({
    "initial_utility": {"kind": "mystery"},
    "initial_wealth": 1.0,
    "periods": [{"u": 1.2, "d": 0.9, "p": 0.6}]
  })")),
                  ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("solve command exits by error family") {
  CHECK(run_command({"solve", "--u", "1.2", "--d", "0.9", "--p", "0.6",
                     "--theta", "2"}) == 0);
  // pathological exponent: solver family, exit 2
  CHECK(run_command({"solve", "--u", "1.1", "--d", "0.5", "--p", "0.2",
                     "--theta", "0.53724357368048165"}) == 2);
  // arbitrage violation: validation family, exit 1
  CHECK(run_command({"solve", "--u", "0.9", "--d", "0.8", "--p", "0.6",
                     "--theta", "2"}) == 1);
  // flag errors are reported as usage problems, exit 1
  CHECK(run_command({"solve", "--u", "1.2"}) == 1);
  CHECK(run_command({"solve", "--u", "1.2", "--d", "0.9", "--p", "0.6"}) == 1);
  CHECK(run_command({"solve", "--u", "1.2", "--d", "0.9", "--p", "0.6",
                     "--theta", "2", "--log"}) == 1);
  CHECK(run_command({"bogus"}) == 1);
  CHECK(run_command({}) == 1);
  CHECK(run_command({"--help"}) == 0);
  CHECK(run_command({"solve", "--help"}) == 0);
}

TEST_CASE("solve accepts log and tabulated initial utilities") {
  CHECK(run_command({"solve", "--u", "1.2", "--d", "0.9", "--p", "0.6",
                     "--log"}) == 0);
  const auto dir = fresh_dir("fpp_cli_solvetab");
  save_marginal_csv(MarginalFn::power(2.0), dir / "m.csv",
                    num::logspace(1e-8, 1e8, 128));
  CHECK(run_command({"solve", "--u", "1.2", "--d", "0.9", "--p", "0.6",
                     "--tabulated", (dir / "m.csv").string()}) == 0);
  fs::remove_all(dir);
}

TEST_CASE("run command writes grids and the wealth path") {
  const auto dir = fresh_dir("fpp_cli_run");
  write_file(dir / "s.json", kGoodScenario);
  const auto out = dir / "out";
  CHECK(run_command({"run", "--scenario", (dir / "s.json").string(), "--out",
                     out.string(), "--grid-points", "64"}) == 0);
  for (const char* name : {"marginal_0.csv", "marginal_1.csv", "utility_0.csv",
                           "utility_1.csv", "path.csv"}) {
    CHECK(fs::exists(out / name));
  }
  CHECK(count_lines(out / "marginal_1.csv") == 65);  // header + 64 knots
  CHECK(count_lines(out / "utility_1.csv") == 65);
  CHECK(count_lines(out / "path.csv") == 2);
  const auto body = slurp(out / "path.csv");
  CHECK(body.find("n,pi_star,X_star,realized") == 0);
  CHECK(body.find(",up") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run leaves unknown path fields empty") {
  const auto dir = fresh_dir("fpp_cli_run2");
  write_file(dir / "s.json", R"({
    "initial_utility": {"kind": "power", "theta": 2.0},
    "initial_wealth": 1.0,
    "periods": [{"u": 1.2, "d": 0.9, "p": 0.6, "realized": "up"},
                {"u": 1.2, "d": 0.9, "p": 0.6},
                {"u": 1.2, "d": 0.9, "p": 0.6}]
  })");
  const auto out = dir / "out";
  CHECK(run_command({"run", "--scenario", (dir / "s.json").string(), "--out",
                     out.string(), "--grid-points", "32"}) == 0);
  std::ifstream in(out / "path.csv");
  std::string header, r1, r2, r3;
  std::getline(in, header);
  std::getline(in, r1);
  std::getline(in, r2);
  std::getline(in, r3);
  CHECK(r1.substr(0, 2) == "1,");
  CHECK(r1.find(",up") != std::string::npos);
  // period 2: allocation known (wealth still known), no realized wealth
  CHECK(r2.substr(0, 2) == "2,");
  CHECK(r2.find(",,") != std::string::npos);
  // period 3: nothing known
  CHECK(r3 == "3,,,");
  fs::remove_all(dir);
}

TEST_CASE("runs are deterministic byte for byte") {
  const auto dir = fresh_dir("fpp_cli_det");
  write_file(dir / "s.json", kGoodScenario);
  const auto out1 = dir / "out1";
  const auto out2 = dir / "out2";
  REQUIRE(run_command({"run", "--scenario", (dir / "s.json").string(), "--out",
                       out1.string(), "--grid-points", "48"}) == 0);
  REQUIRE(run_command({"run", "--scenario", (dir / "s.json").string(), "--out",
                       out2.string(), "--grid-points", "48"}) == 0);
  for (const char* name : {"marginal_1.csv", "utility_1.csv", "path.csv"}) {
    CHECK(slurp(out1 / name) == slurp(out2 / name));
  }
  fs::remove_all(dir);
}

TEST_CASE("verify passes a sound scenario and run rejects a broken file") {
  const auto dir = fresh_dir("fpp_cli_verify");
  write_file(dir / "s.json", kGoodScenario);
  CHECK(run_command({"verify", "--scenario", (dir / "s.json").string(),
                     "--grid-points", "64"}) == 0);
  CHECK(run_command({"run", "--scenario", (dir / "missing.json").string()}) ==
        1);
  fs::remove_all(dir);
}

TEST_CASE("nonunique-demo writes both solutions") {
  const auto dir = fresh_dir("fpp_cli_nonu");
  CHECK(run_command({"nonunique-demo", "--u", "1.1", "--d", "0.5", "--p",
                     "0.2", "--out", dir.string(), "--grid-points", "32"}) ==
        0);
  CHECK(fs::exists(dir / "nonunique_principal.csv"));
  CHECK(fs::exists(dir / "nonunique_perturbed.csv"));
  CHECK(count_lines(dir / "nonunique_principal.csv") == 33);
  // demo needs a negative pathological exponent: solver family, exit 2
  CHECK(run_command({"nonunique-demo", "--u", "2.0", "--d", "0.5", "--p",
                     "0.2", "--out", dir.string()}) == 2);
  fs::remove_all(dir);
}

TEST_CASE("export-grid writes the before and after grids") {
  const auto dir = fresh_dir("fpp_cli_export");
  CHECK(run_command({"export-grid", "--u", "1.2", "--d", "0.9", "--p", "0.6",
                     "--theta", "2", "--out", dir.string(), "--grid-points",
                     "32"}) == 0);
  for (const char* name : {"marginal_0.csv", "marginal_1.csv", "utility_0.csv",
                           "utility_1.csv"}) {
    CHECK(count_lines(dir / name) == 33);
  }
  fs::remove_all(dir);
}
