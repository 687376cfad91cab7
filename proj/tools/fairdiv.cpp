// Command-line front end: simulation runs, one-off LP and transform calls,
// the brute-force verification suites, and the lower-bound demo.
//
// Exit codes: 0 ok, 1 validation error, 2 acceptance/verification failure,
// 3 internal invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairdiv/constraints.hpp"
#include "fairdiv/experiment.hpp"
#include "fairdiv/lp.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/suites.hpp"
#include "fairdiv/transform.hpp"

namespace {

using namespace fairdiv;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitAcceptance = 2;
constexpr int kExitInvariant = 3;

Matrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open matrix file '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ValidationError("matrix file '" + path + "': " + e.what());
  }
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ValidationError("matrix file '" + path + "': expected a 2-D JSON array");
  Matrix m(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(j[i].size()) != m.cols())
      throw ValidationError("matrix file '" + path + "': ragged rows");
    for (int k = 0; k < m.cols(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_simulate(const std::string& config_path) {
  auto config = ExperimentConfig::from_json_file(config_path);
  auto summary = run_config(config);
  std::cout << "wrote " << summary.runs.size() << " trace file(s) to " << config.output_dir
            << " (optimal value " << summary.optimal_value << ")\n";
  if (summary.slope)
    std::cout << "regret slope " << summary.slope->slope << " +/- " << summary.slope->stderr_
              << " over " << summary.slope->points_used << " horizons\n";
  return kExitOk;
}

int cmd_lp(const std::string& mu_path, const std::string& eps_path, const std::string& family_str,
           double a, double b, const std::string& dump_path) {
  Family family = family_from_string(family_str);
  Matrix mu = load_matrix(mu_path);
  if (a <= 0.0) a = mu.min();
  if (b <= 0.0) b = mu.max();

  StandardLP assembled;
  json out;
  if (eps_path.empty()) {
    assembled = assemble_optimal_fair_lp(mu, family);
    auto res = solve_optimal_fair(mu, family);
    out["kind"] = "optimal_fair";
    out["value"] = res.value;
    out["allocation"] = matrix_json(res.allocation);
    out["pivots"] = res.report.pivots;
  } else {
    ConfidenceBox box;
    box.center = mu;
    box.radius = load_matrix(eps_path);
    box.floor_a = a;
    box.ceil_b = b;
    assembled = assemble_robust_fair_lp(box, family);
    auto res = solve_robust_fair(box, family);
    out["kind"] = "robust_fair";
    out["value"] = res.value;
    out["allocation"] = matrix_json(res.allocation);
    out["pivots"] = res.report.pivots;
  }
  if (!dump_path.empty()) {
    std::ofstream os(dump_path);
    if (!os) throw ValidationError("cannot write LP dump '" + dump_path + "'");
    write_lp_format(assembled, os);
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_transform(const std::string& mu_path, const std::string& y_path, double gamma,
                  const std::string& family_str, double a, double b, bool verbose) {
  Family family = family_from_string(family_str);
  Matrix mu = load_matrix(mu_path);
  Matrix y = load_matrix(y_path);
  if (a <= 0.0) a = mu.min();
  if (b <= 0.0) b = mu.max();

  TransformReport rep;
  if (family == Family::Pe) {
    rep = proportional_slack_transform(mu, y, gamma, a, b);
  } else {
    EfeTransformOptions opts;
    if (verbose) opts.verbose = &std::cerr;
    rep = efe_slack_transform(mu, y, gamma, a, b, opts);
  }
  json out;
  out["x_prime"] = matrix_json(rep.x_prime);
  out["iterations"] = rep.iterations;
  out["final_alpha"] = rep.final_alpha;
  out["welfare_loss"] = rep.welfare_loss;
  out["clamp_events"] = rep.clamp_events;
  out["outcomes"] = json::array();
  for (const auto& o : rep.outcomes)
    out["outcomes"].push_back(
        {{"label", o.label}, {"equal_rows", o.equal_rows}, {"slack", o.slack}});
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, uint64_t seed) {
  std::vector<SuiteResult> results;
  if (suite == "all" || suite == "lp") {
    results.push_back(run_lp_grid_suite(100, seed));
    results.push_back(run_robust_lp_suite(200, seed));
  }
  if (suite == "all" || suite == "transform") {
    results.push_back(run_prop_transform_suite(500, seed));
    results.push_back(run_efe_transform_suite(300, seed));
  }
  if (results.empty())
    throw ValidationError("verify: unknown suite '" + suite + "' (expected all|lp|transform)");
  bool ok = true;
  for (const auto& res : results) {
    std::cout << res.line() << "\n";
    for (const auto& msg : res.messages) std::cout << "    " << msg << "\n";
    ok = ok && res.pass;
  }
  return ok ? kExitOk : kExitAcceptance;
}

int cmd_demo_lower_bound(long long T) {
  auto rep = demo_lower_bound(T);
  std::cout << rep.to_json() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online fair division simulator: fairness-constrained LPs, slack transforms, "
               "and the fair explore-then-commit policy"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run the experiment described by a JSON config");
  simulate->add_option("config", config_path, "config file")->required();
  auto* sweep = app.add_subcommand("sweep", "Alias of simulate for grid configs");
  sweep->add_option("config", config_path, "config file")->required();

  std::string mu_path, eps_path, family_str = "efe", dump_path;
  double opt_a = 0.0, opt_b = 0.0;
  auto* lp = app.add_subcommand("lp", "Solve the fairness-constrained welfare LP");
  lp->add_option("--mu", mu_path, "mean matrix (JSON 2-D array)")->required();
  lp->add_option("--eps", eps_path, "radius matrix; solves the robust LP when given");
  lp->add_option("--family", family_str, "efe|pe")->required();
  lp->add_option("--a", opt_a, "lower mean bound (default: min entry)");
  lp->add_option("--b", opt_b, "upper mean bound (default: max entry)");
  lp->add_option("--dump-lp", dump_path, "write the assembled LP in LP format");

  std::string y_path;
  double gamma = 0.0;
  bool verbose = false;
  auto* transform = app.add_subcommand("transform", "Apply the fairness slack transform");
  transform->add_option("--mu", mu_path, "mean matrix")->required();
  transform->add_option("--y", y_path, "starting allocation")->required();
  transform->add_option("--gamma", gamma, "target slack")->required();
  transform->add_option("--family", family_str, "efe|pe")->required();
  transform->add_option("--a", opt_a, "lower mean bound (default: min entry)");
  transform->add_option("--b", opt_b, "upper mean bound (default: max entry)");
  transform->add_flag("--verbose", verbose, "stream one line per outer iteration");

  std::string suite = "all";
  uint64_t verify_seed = 20240801;
  auto* verify = app.add_subcommand("verify", "Run the brute-force cross-check suites");
  verify->add_option("--suite", suite, "all|lp|transform");
  verify->add_option("--seed", verify_seed, "suite RNG seed");

  long long demo_T = 100;
  auto* demo = app.add_subcommand("demo-lower-bound", "Two-instance linear-regret construction");
  demo->add_option("--T", demo_T, "horizon used for the construction")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config_path);
    if (sweep->parsed()) return cmd_simulate(config_path);
    if (lp->parsed()) return cmd_lp(mu_path, eps_path, family_str, opt_a, opt_b, dump_path);
    if (transform->parsed())
      return cmd_transform(mu_path, y_path, gamma, family_str, opt_a, opt_b, verbose);
    if (verify->parsed()) return cmd_verify(suite, verify_seed);
    if (demo->parsed()) return cmd_demo_lower_bound(demo_T);
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}
