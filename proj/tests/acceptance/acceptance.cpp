// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Criterion 10 re-runs the configs of criteria 1-9 and requires bit-identical
// outputs.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpm/errors.hpp"
#include "gpm/harness/runner.hpp"
#include "gpm/harness/suites.hpp"

using namespace gpm::harness;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
};

const std::vector<Criterion> kCriteria = {
    {1, "half-space perimeter by the dual method", {"half-space"}},
    {2, "dual, quadrature and covering agree on the unit disk", {"main-theorem"}},
    {3, "Gauss-Green residual within 2 stderr", {"gauss-green"}},
    {4, "slice measures grow monotonically in k", {"monotonicity"}},
    {5, "slice-perimeter identity", {"slice-identity"}},
    {6, "spike lies in the topological but not the measure-theoretic boundary", {"boundary"}},
    {7, "convex sets: boundary points have positive two-sided density", {"convex"}},
    {8, "Wiener path events: finite, growing, exact base case", {"wiener"}},
    {9, "covering estimator calibration", {"hausdorff"}},
};

struct Outcome {
  bool pass = true;
  std::vector<ExperimentConfig> configs;
  std::vector<ResultRecord> records;
  std::string detail;
};

Outcome evaluate(const Criterion& c, const SuiteOptions& opts) {
  Outcome out;
  for (const std::string& s : c.suites) {
    for (ExperimentConfig& cfg : suite_configs(s, opts)) {
      try {
        ResultRecord r = run(cfg);
        if (!r.passed()) {
          out.pass = false;
          for (const Verdict& v : r.verdicts)
            if (!v.pass) out.detail += "\n    [" + r.name + "] " + v.name + ": " + v.rule;
        }
        out.records.push_back(std::move(r));
      } catch (const gpm::Error& e) {
        out.pass = false;
        out.detail += "\n    [" + cfg.name + "] error: " + e.what();
      }
      out.configs.push_back(std::move(cfg));
    }
  }
  return out;
}

bool identical(const ResultRecord& a, const ResultRecord& b, std::string& why) {
  if (a.outputs.size() != b.outputs.size()) {
    why = a.name + ": output count differs";
    return false;
  }
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    const auto& [ka, oa] = a.outputs[i];
    const auto& [kb, ob] = b.outputs[i];
    if (ka != kb || oa.value != ob.value || oa.std_error != ob.std_error) {
      why = a.name + ": " + ka + " differs on re-run";
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  SuiteOptions opts;
  std::string out_dir;
  app.add_option("--seed", opts.seed, "suite seed base");
  app.add_option("--out", out_dir, "also persist records to this directory");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  std::vector<Outcome> outcomes;
  for (const Criterion& c : kCriteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = evaluate(c, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s (%zu records, %.1f s)%s\n", c.id, o.pass ? "PASS" : "FAIL", c.title.c_str(),
                o.records.size(), secs, o.detail.c_str());
    for (const ResultRecord& r : o.records) {
      std::printf("    [%s]", r.name.c_str());
      for (const auto& [key, v] : r.outputs) {
        if (v.std_error > 0.0)
          std::printf(" %s=%.6g+-%.2g", key.c_str(), v.value, v.std_error);
        else
          std::printf(" %s=%.6g", key.c_str(), v.value);
      }
      std::printf("\n");
    }
    std::fflush(stdout);
    if (!o.pass) ++failed;
    if (!out_dir.empty()) persist(o.records, out_dir);
    outcomes.push_back(std::move(o));
  }

  // Criterion 10: same configs, same scalars.
  const auto t0 = std::chrono::steady_clock::now();
  bool repro = true;
  std::string why;
  std::size_t compared = 0;
  for (const Outcome& o : outcomes) {
    for (std::size_t i = 0; i < o.records.size() && repro; ++i) {
      try {
        repro = identical(o.records[i], run(o.configs[i]), why);
      } catch (const gpm::Error& e) {
        repro = false;
        why = o.configs[i].name + ": " + e.what();
      }
      ++compared;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion 10 %s: re-runs reproduce identical scalars (%zu records, %.1f s)%s\n",
              repro ? "PASS" : "FAIL", compared, secs, repro ? "" : ("\n    " + why).c_str());
  if (!repro) ++failed;

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
