#include "fpp/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpp/errors.hpp"
#include "fpp/numerics.hpp"
#include "fpp/oracle.hpp"

namespace fpp {

StepConfig RunConfig::step_config(bool retabulate) const {
  StepConfig cfg;
  cfg.series_tol = tol;
  cfg.classify.y_min = y_min;
  cfg.classify.y_max = y_max;
  cfg.retabulate_series = retabulate;
  cfg.grid_points = grid_points;
  return cfg;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_scenario: cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("load_scenario: " + path.string() + ": " + e.what());
  }
  try {
    Scenario sc;
    const auto& ju = doc.at("initial_utility");
    const std::string kind = ju.at("kind").get<std::string>();
    if (kind == "power") {
      sc.initial_utility = power_utility(ju.at("theta").get<double>());
    } else if (kind == "log") {
      sc.initial_utility = log_utility();
    } else if (kind == "tabulated") {
      std::filesystem::path file = ju.at("file").get<std::string>();
      if (file.is_relative()) file = path.parent_path() / file;
      sc.initial_utility = UtilityFn(load_marginal_csv(file), 1.0, 0.0);
    } else {
      throw ValidationError("load_scenario: unknown initial_utility.kind \"" +
                            kind + "\"");
    }
    sc.initial_wealth = doc.at("initial_wealth").get<double>();
    if (!(sc.initial_wealth > 0.0) || !std::isfinite(sc.initial_wealth))
      throw NonpositiveWealth("load_scenario: initial_wealth must be positive");
    for (const auto& jp : doc.at("periods")) {
      ScenarioPeriod pd;
      pd.u = jp.at("u").get<double>();
      pd.d = jp.at("d").get<double>();
      pd.p = jp.at("p").get<double>();
      derive(pd.u, pd.d, pd.p);  // eager validation
      if (jp.contains("realized")) {
        const std::string r = jp.at("realized").get<std::string>();
        if (r == "up") pd.realized = Outcome::Up;
        else if (r == "down") pd.realized = Outcome::Down;
        else
          throw ValidationError(
              "load_scenario: realized must be \"up\" or \"down\", got \"" +
              r + "\"");
      }
      sc.periods.push_back(pd);
    }
    if (sc.periods.empty())
      throw ValidationError("load_scenario: scenario needs at least one period");
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("load_scenario: " + path.string() + ": " + e.what());
  }
}

namespace {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::SeriesI: return "series-i";
    case Branch::SeriesII: return "series-ii";
    case Branch::TrivialAEq1: return "trivial";
    case Branch::PowerClosedForm: return "closed-form";
    default: return "none";
  }
}

const char* phi_desc(PhiDirection d) {
  switch (d) {
    case PhiDirection::StrictlyIncreasing: return "strictly increasing";
    case PhiDirection::StrictlyDecreasing: return "strictly decreasing";
    default: return "non-monotone";
  }
}

double max_rel_residual(const MarginalFn& I1, const MarginalFn& I0,
                        const PeriodParams& params, double y_lo, double y_hi,
                        int n) {
  double worst = 0.0;
  for (double y : num::logspace(y_lo, y_hi, n)) {
    const double scale = (1.0 + params.b) * I0(params.c * y);
    worst = std::max(worst,
                     std::abs(residual(I1, I0, params, y)) / scale);
  }
  return worst;
}

UtilityFn initial_utility_from_flags(const CLI::App* cmd, double theta,
                                     bool use_log,
                                     const std::string& tab_file) {
  const int chosen = int(cmd->count("--theta") > 0) + int(use_log) +
                     int(!tab_file.empty());
  if (chosen != 1)
    throw ValidationError(
        "choose exactly one of --theta, --log, --tabulated");
  if (cmd->count("--theta") > 0) return power_utility(theta);
  if (use_log) return log_utility();
  return UtilityFn(load_marginal_csv(tab_file), 1.0, 0.0);
}

std::vector<double> wealth_grid(int n) { return num::logspace(1e-2, 1e2, n); }

int do_solve(const RunConfig& rc, double u, double d, double p,
             const UtilityFn& initial) {
  const auto params = derive(u, d, p);
  const auto cfg = rc.step_config(false);
  const auto& I0 = initial.inv_marginal();
  const auto report = classify(I0, params, cfg.classify);
  const auto I1 = solve(I0, params, rc.tol, cfg.classify);
  std::cout << "branch: " << branch_name(report.branch) << '\n'
            << "phi: " << phi_desc(report.phi_direction) << '\n'
            << "psi decade max near zero: " << report.psi_limit_at_zero
            << ", near infinity: " << report.psi_limit_at_infinity << '\n';
  if (I1.is_power_form() && I0.is_power_form())
    std::cout << "delta: " << fmt_full(I1.power_scale() / I0.power_scale())
              << '\n';
  const double m1 = initial.marginal(1.0);
  const double pi_rate =
      (I1(params.rho_u * m1) - I1(params.rho_d * m1)) / (params.u - params.d);
  std::cout << "pi_star/x: " << fmt_full(pi_rate) << '\n'
            << "max relative residual on [1e-4, 1e4]: "
            << max_rel_residual(I1, I0, params, 1e-4, 1e4, 200) << '\n';
  return 0;
}

int do_run(const RunConfig& rc, const std::filesystem::path& scenario_path) {
  const auto sc = load_scenario(scenario_path);
  const auto steps = run(sc, rc.step_config(true));
  std::filesystem::create_directories(rc.out_dir);
  const auto ygrid = num::logspace(rc.y_min, rc.y_max, rc.grid_points);
  const auto xgrid = wealth_grid(rc.grid_points);
  save_marginal_csv(sc.initial_utility.inv_marginal(),
                    rc.out_dir / "marginal_0.csv", ygrid);
  save_utility_csv(sc.initial_utility, rc.out_dir / "utility_0.csv", xgrid);
  std::ofstream path_csv(rc.out_dir / "path.csv");
  if (!path_csv) throw ParseError("run: cannot write into " + rc.out_dir.string());
  path_csv << "n,pi_star,X_star,realized\n";
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& st = steps[i];
    const std::string n = std::to_string(i + 1);
    save_marginal_csv(st.inv_marginal, rc.out_dir / ("marginal_" + n + ".csv"),
                      ygrid);
    save_utility_csv(st.utility, rc.out_dir / ("utility_" + n + ".csv"), xgrid);
    path_csv << n << ','
             << (st.allocation ? fmt_full(*st.allocation) : std::string{})
             << ','
             << (st.realized_wealth ? fmt_full(*st.realized_wealth)
                                    : std::string{})
             << ','
             << (st.outcome ? (*st.outcome == Outcome::Up ? "up" : "down")
                            : "")
             << '\n';
    std::cout << "period " << n << ": branch=" << branch_name(st.report.branch);
    if (st.allocation) std::cout << " pi*=" << fmt_full(*st.allocation);
    if (st.realized_wealth)
      std::cout << " X*=" << fmt_full(*st.realized_wealth);
    std::cout << '\n';
  }
  std::cout << "wrote " << steps.size() << " period(s) to " << rc.out_dir.string()
            << '\n';
  return 0;
}

struct CheckLine {
  std::string name;
  bool ok = false;
  double err = 0.0;
};

int do_verify(const RunConfig& rc, const std::filesystem::path& scenario_path) {
  const auto sc = load_scenario(scenario_path);
  const auto steps = run(sc, rc.step_config(true));
  bool all_ok = true;
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& st = steps[i];
    const auto& params = st.params;
    const auto& I0 = st.prev_utility.inv_marginal();
    const double x = st.entering_wealth.value_or(1.0);
    const double xu = st.wealth_up(x);
    const double xd = st.wealth_down(x);
    const double u0x = st.prev_utility.value(x);
    const double u_scale = std::max(1.0, std::abs(u0x));
    std::vector<CheckLine> checks;

    {
      const double e = max_rel_residual(st.inv_marginal, I0, params, 1e-4, 1e4, 200);
      checks.push_back({"residual", e <= 1e-8, e});
    }
    {
      const auto rep = check_inada(st.inv_marginal, rc.y_min, rc.y_max);
      checks.push_back({"inada", rep.monotonicity_violations == 0,
                        double(rep.monotonicity_violations)});
    }
    {
      const double e =
          std::abs(params.q * xu + (1.0 - params.q) * xd - x) / x;
      checks.push_back({"budget", e <= 1e-9, e});
    }
    {
      const double ev =
          params.p * st.utility.value(xu) + (1.0 - params.p) * st.utility.value(xd);
      const double e = std::abs(ev - u0x) / u_scale;
      checks.push_back({"martingale", e <= 1e-6, e});
    }
    {
      const auto range = admissible_range(params, x);
      const double w = range.hi - range.lo;
      double excess = -1e300;
      for (int j = 0; j <= 100; ++j) {
        const double pi = range.lo + 1e-6 * w + (w - 2e-6 * w) * j / 100.0;
        const double ev = params.p * st.utility.value(x + pi * (params.u - 1.0)) +
                          (1.0 - params.p) * st.utility.value(x + pi * (params.d - 1.0));
        excess = std::max(excess, ev - u0x);
      }
      checks.push_back({"supermartingale", excess <= 1e-7, excess});
    }
    {
      const double up = params.p * (params.u - 1.0) * st.utility.marginal(xu);
      const double dn =
          (1.0 - params.p) * (params.d - 1.0) * st.utility.marginal(xd);
      const double e = std::abs(up + dn) / up;
      checks.push_back({"first-order", e <= 1e-6, e});
    }
    {
      const auto best = maximize(st.utility, params, x);
      const double ev = std::abs(best.value - u0x) / u_scale;
      const double pi = st.pi_star(x);
      const double ea = std::abs(best.argmax - pi) / std::max(1.0, std::abs(pi));
      const bool ok = ev <= 1e-5 && ea <= 1e-5;
      checks.push_back({"oracle", ok, std::max(ev, ea)});
    }

    for (const auto& ck : checks) {
      all_ok = all_ok && ck.ok;
      std::printf("period %zu  %-16s %s  %.3g\n", i + 1, ck.name.c_str(),
                  ck.ok ? "PASS" : "FAIL", ck.err);
    }
  }
  std::cout << (all_ok ? "all checks passed" : "checks FAILED") << '\n';
  return all_ok ? 0 : 2;
}

int do_nonunique(const RunConfig& rc, double u, double d, double p) {
  const auto params = derive(u, d, p);
  const auto pair = make_nonunique_pair(params);
  const auto I0 = MarginalFn::power(-pair.exponent);
  std::cout << "exponent: " << fmt_full(pair.exponent) << '\n'
            << "level: " << fmt_full(pair.level) << '\n'
            << "amplitude bound: " << fmt_full(pair.amplitude_bound) << '\n'
            << "amplitude used: " << fmt_full(pair.amplitude) << '\n';
  const double rp = max_rel_residual(pair.principal, I0, params, 1e-4, 1e4, 200);
  const double rq = max_rel_residual(pair.perturbed, I0, params, 1e-4, 1e4, 200);
  std::cout << "max relative residual, self-similar: " << rp << '\n'
            << "max relative residual, modulated: " << rq << '\n';
  const auto lim_p = uniqueness_limit(pair.principal, params, rc.y_min, rc.y_max);
  const auto lim_q = uniqueness_limit(pair.perturbed, params, rc.y_min, rc.y_max);
  std::cout << "scaled sups (low decade, high decade), self-similar: "
            << lim_p.first << ", " << lim_p.second << '\n'
            << "scaled sups (low decade, high decade), modulated: "
            << lim_q.first << ", " << lim_q.second << '\n';
  const auto inada_p = check_inada(pair.principal, rc.y_min, rc.y_max);
  const auto inada_q = check_inada(pair.perturbed, rc.y_min, rc.y_max);
  std::cout << "monotonicity violations: " << inada_p.monotonicity_violations
            << ", " << inada_q.monotonicity_violations << '\n';
  bool guard_ok = false;
  try {
    classify(I0, params);
  } catch (const PathologicalTheta&) {
    guard_ok = true;
    std::cout << "classify rejects the matching power input as pathological\n";
  }
  std::filesystem::create_directories(rc.out_dir);
  const auto grid = num::logspace(rc.y_min, rc.y_max, rc.grid_points);
  save_marginal_csv(pair.principal, rc.out_dir / "nonunique_principal.csv", grid);
  save_marginal_csv(pair.perturbed, rc.out_dir / "nonunique_perturbed.csv", grid);
  if (!guard_ok) {
    std::cerr << "error: classify accepted the pathological exponent\n";
    return 2;
  }
  return 0;
}

int do_export(const RunConfig& rc, double u, double d, double p,
              const UtilityFn& initial) {
  const auto params = derive(u, d, p);
  const auto cfg = rc.step_config(true);
  const auto st = step_policy(initial, params, cfg);
  std::filesystem::create_directories(rc.out_dir);
  const auto ygrid = num::logspace(rc.y_min, rc.y_max, rc.grid_points);
  const auto xgrid = wealth_grid(rc.grid_points);
  save_marginal_csv(initial.inv_marginal(), rc.out_dir / "marginal_0.csv", ygrid);
  save_marginal_csv(st.inv_marginal, rc.out_dir / "marginal_1.csv", ygrid);
  save_utility_csv(initial, rc.out_dir / "utility_0.csv", xgrid);
  save_utility_csv(st.utility, rc.out_dir / "utility_1.csv", xgrid);
  std::cout << "branch: " << branch_name(st.report.branch) << '\n'
            << "wrote marginal_0.csv marginal_1.csv utility_0.csv "
               "utility_1.csv to "
            << rc.out_dir.string() << '\n';
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"Forward performance processes in one-period binomial markets",
               "fpp"};
  app.require_subcommand(1);
  RunConfig rc;
  app.add_option("--tol", rc.tol, "Series truncation tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid-points", rc.grid_points,
                 "Knot count for tabulations and exports")
      ->check(CLI::Range(16, 1000000));
  app.add_option("--ymin", rc.y_min, "Lower end of the marginal grid")
      ->check(CLI::PositiveNumber);
  app.add_option("--ymax", rc.y_max, "Upper end of the marginal grid")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", rc.out_dir, "Output directory");

  double u = 0.0, d = 0.0, p = 0.0, theta = 0.0;
  bool use_log = false;
  std::string tab_file, scenario_file;

  const auto add_market = [&](CLI::App* cmd) {
    cmd->add_option("--u", u, "Up gross return")->required();
    cmd->add_option("--d", d, "Down gross return")->required();
    cmd->add_option("--p", p, "Up probability")->required();
  };
  const auto add_utility = [&](CLI::App* cmd) {
    auto* t = cmd->add_option("--theta", theta, "Power utility exponent");
    auto* l = cmd->add_flag("--log", use_log, "Log utility");
    auto* f = cmd->add_option("--tabulated", tab_file,
                              "CSV of the initial inverse marginal");
    t->excludes(l)->excludes(f);
    l->excludes(f);
  };

  // fallthrough so the shared options above may follow the subcommand name
  auto* c_solve =
      app.add_subcommand("solve", "Solve one period and print a summary");
  c_solve->fallthrough();
  add_market(c_solve);
  add_utility(c_solve);
  auto* c_run =
      app.add_subcommand("run", "Run a scenario and write per-period CSVs");
  c_run->fallthrough();
  c_run->add_option("--scenario", scenario_file, "Scenario JSON file")
      ->required();
  auto* c_verify = app.add_subcommand(
      "verify", "Run a scenario and check the construction invariants");
  c_verify->fallthrough();
  c_verify->add_option("--scenario", scenario_file, "Scenario JSON file")
      ->required();
  auto* c_nonu = app.add_subcommand(
      "nonunique-demo",
      "Two distinct exact solutions at the pathological exponent");
  c_nonu->fallthrough();
  add_market(c_nonu);
  auto* c_export = app.add_subcommand(
      "export-grid", "Solve one period and write marginal/utility grids");
  c_export->fallthrough();
  add_market(c_export);
  add_utility(c_export);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_solve->parsed())
      return do_solve(rc, u, d, p,
                      initial_utility_from_flags(c_solve, theta, use_log, tab_file));
    if (c_run->parsed()) return do_run(rc, scenario_file);
    if (c_verify->parsed()) return do_verify(rc, scenario_file);
    if (c_nonu->parsed()) return do_nonunique(rc, u, d, p);
    if (c_export->parsed())
      return do_export(rc, u, d, p,
                       initial_utility_from_flags(c_export, theta, use_log, tab_file));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace fpp
