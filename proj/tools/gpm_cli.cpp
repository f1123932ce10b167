// gpm: batch front end for the Gaussian perimeter toolkit.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpm/errors.hpp"
#include "gpm/harness/runner.hpp"
#include "gpm/harness/suites.hpp"

namespace {

enum ExitCode : int { kPass = 0, kVerifyFail = 1, kConfigInvalid = 2, kNumericalFailure = 3 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  double budget_scale = 1.0;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* opt = sub->add_option("--config", c.config, "experiment config (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "override the config seed");
  sub->add_option("--out", c.out, "output directory (default: $GPM_OUT_DIR or gpm_results)");
  sub->add_option("--budget-scale", c.budget_scale, "multiply sample budgets")->check(CLI::PositiveNumber);
}

std::string output_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("GPM_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "gpm_results";
}

void print_record(const gpm::harness::ResultRecord& r) {
  std::cout << (r.passed() ? "PASS " : "FAIL ") << r.task << " [" << r.name << "] digest=" << r.config_digest
            << " seed=" << r.seed << " t=" << r.wall_clock_s << "s\n";
  for (const auto& [key, o] : r.outputs) {
    std::cout << "  " << key << " = " << o.value;
    if (o.std_error > 0.0) std::cout << " +- " << o.std_error;
    std::cout << "\n";
  }
  for (const auto& v : r.verdicts) {
    std::cout << "  " << (v.pass ? "ok   " : "FAIL ") << v.name << ": " << v.rule << " (observed " << v.observed
              << ", target " << v.target << ", tolerance " << v.tolerance << ")\n";
  }
}

int report(const std::vector<gpm::harness::ResultRecord>& records, const Common& c) {
  gpm::harness::persist(records, output_dir(c));
  int failed = 0;
  for (const auto& r : records) {
    print_record(r);
    if (!r.passed()) ++failed;
  }
  if (failed > 0) {
    std::cout << failed << " of " << records.size() << " record(s) failed:\n";
    for (const auto& r : records)
      if (!r.passed()) std::cout << "  " << r.task << " [" << r.name << "]\n";
    return kVerifyFail;
  }
  return kPass;
}

int run_config(const Common& c, const std::string& expected_task) {
  gpm::harness::ExperimentConfig cfg = gpm::harness::load_config(c.config);
  if (!expected_task.empty() && cfg.task != expected_task)
    throw gpm::ConfigError("config task '" + cfg.task + "' does not match subcommand '" + expected_task + "'");
  if (c.seed) cfg.seed = *c.seed;
  if (c.budget_scale != 1.0) gpm::harness::scale_budget(cfg, c.budget_scale);
  return report({gpm::harness::run(cfg)}, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian perimeter estimation toolkit", "gpm"};
  app.set_version_flag("--version", std::string(GPM_VERSION));
  app.require_subcommand(1);

  Common common;
  std::string suite;
  std::string chosen_task;

  auto* run_cmd = app.add_subcommand("run", "run any experiment config");
  add_common(run_cmd, common, true);

  const std::vector<std::string> task_commands = {"perimeter", "hausdorff-gauss", "classify",          "rho",
                                                  "slice-identity", "wiener", "verify-main-theorem", "gauss-green",
                                                  "convex-audit"};
  std::vector<CLI::App*> task_subs;
  for (const auto& t : task_commands) {
    auto* sub = app.add_subcommand(t, "run a '" + t + "' config");
    add_common(sub, common, true);
    task_subs.push_back(sub);
  }

  auto* verify_cmd = app.add_subcommand("verify", "run a bundled verification suite");
  verify_cmd->add_option("suite", suite, "suite name, or 'all'")->required();
  add_common(verify_cmd, common, false);

  auto* list_cmd = app.add_subcommand("suites", "list verification suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigInvalid;
  }

  try {
    if (*list_cmd) {
      for (const auto& n : gpm::harness::suite_names()) std::cout << n << "\n";
      std::cout << "all\n";
      return kPass;
    }
    if (*verify_cmd) {
      if (suite.empty()) throw gpm::ConfigError("empty suite name");
      gpm::harness::SuiteOptions opts;
      if (common.seed) opts.seed = *common.seed;
      opts.budget_scale = common.budget_scale;
      return report(gpm::harness::verify_suite(suite, opts), common);
    }
    if (*run_cmd) return run_config(common, "");
    for (std::size_t i = 0; i < task_subs.size(); ++i)
      if (*task_subs[i]) return run_config(common, task_commands[i]);
  } catch (const gpm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigInvalid;
  } catch (const gpm::ContractError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigInvalid;
  } catch (const gpm::UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kConfigInvalid;
  } catch (const gpm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigInvalid;
  }
  return kConfigInvalid;
}
