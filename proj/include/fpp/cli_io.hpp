#pragma once
// Scenario files, output layout, and the command-line driver.
//
// Scenario JSON:
//   {
//     "initial_utility": {"kind": "power", "theta": 2.0}
//                      | {"kind": "log"}
//                      | {"kind": "tabulated", "file": "marginal.csv"},
//     "initial_wealth": 1.0,
//     "periods": [{"u": 1.2, "d": 0.9, "p": 0.6, "realized": "up"}, ...]
//   }
// "realized" is optional; realized periods must precede unrealized ones.
// A tabulated file is resolved relative to the scenario's directory and is
// anchored at U(1) = 0.

#include <filesystem>
#include <string>
#include <vector>

#include "fpp/forward.hpp"

namespace fpp {

struct RunConfig {
  double tol = 1e-12;  // series truncation tolerance
  int grid_points = 512;
  double y_min = 1e-8;
  double y_max = 1e8;
  std::filesystem::path out_dir = ".";

  StepConfig step_config(bool retabulate) const;
};

Scenario load_scenario(const std::filesystem::path& path);

// Full command-line interface (solve, run, verify, nonunique-demo,
// export-grid). Returns the process exit code: 0 success, 1 invalid input,
// 2 solver failure.
int run_command(const std::vector<std::string>& args);

}  // namespace fpp
