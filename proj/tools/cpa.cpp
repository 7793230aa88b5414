// Copyright 2026 The cpa-tlbo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cpa: achievable-variance assessment, controller tuning and Monte-Carlo
// validation from the command line.
//
//   cpa assess problems/benchmark-1.json --runs 5 --seed 7
//   cpa tune problems/air_single.json --rho-sweep 0,1e5,2.5e5,1e6
//   cpa bench --runs 5 --problems 1,3,5
//   cpa validate problems/immersion_cascade.json
//   --params 2.7638,-2.6554,-0.8436
//
// Exit status: 0 success, 1 acceptance or validation failure, 2 usage or
// parse error.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpa/assessment.hpp"
#include "cpa/bench_suite.hpp"
#include "cpa/monte_carlo.hpp"
#include "cpa/parallel.hpp"
#include "cpa/problem_file.hpp"
#include "cpa/report_io.hpp"
#include "cpa/tuning.hpp"

namespace {

namespace fs = std::filesystem;
using cpa::ojson;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Usage problems detected after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::size_t jobs = 1;
  std::string out = "cpa-out";
  std::string format = "text";
};

struct AssessFlags {
  std::string file;
  bool validate = false;
  double tolerance = 0.02;
};

struct TuneFlags {
  std::string file;
  std::optional<double> rho;
  std::vector<double> rho_sweep;
  std::optional<std::size_t> restarts;
  bool multistage = false;
};

struct BenchFlags {
  std::vector<int> problems;
};

struct ValidateFlags {
  std::string file;
  std::vector<double> params;
  std::optional<std::size_t> samples;
  std::optional<std::string> mode;
  double tolerance = 0.02;
};

std::size_t resolve_jobs(std::size_t jobs) {
  return jobs == 0 ? cpa::default_jobs() : jobs;
}

void apply_seed(const GlobalFlags& g, cpa::ProblemFile& file) {
  if (g.seed) {
    file.tlbo.seed = *g.seed;
    file.mc.seed = *g.seed;
  }
}

void emit(const GlobalFlags& g, const ojson& json, const std::string& csv,
          const std::string& text) {
  if (g.format == "json") {
    fmt::print("{}\n", json.dump(2));
  } else if (g.format == "csv") {
    fmt::print("{}", csv);
  } else {
    fmt::print("{}", text);
  }
}

std::string params_text(const std::array<double, 3>& k) {
  return fmt::format("[{:.4f}, {:.4f}, {:.4f}]", k[0], k[1], k[2]);
}

std::string validation_text(const cpa::ValidationBlock& v, double tol) {
  return fmt::format(
      "MC check ({}, N={}): estimate {:.6e} +- {:.2e}, analytic {:.6e}, "
      "rel. error {:.3f}% (limit {:.1f}%) {}\n",
      v.mode, v.samples, v.estimate, v.standard_error, v.analytic,
      100.0 * v.relative_error, 100.0 * tol,
      v.relative_error <= tol ? "ok" : "FAIL");
}

std::array<double, 3> three_params(const std::vector<double>& p) {
  if (p.size() != 3) throw UsageError("--params needs exactly 3 values");
  return {p[0], p[1], p[2]};
}

cpa::ValidationBlock run_validation(const cpa::ProblemFile& file,
                                    const std::array<double, 3>& k) {
  if (const auto* s = std::get_if<cpa::SingleLoopProblem>(&file.loop)) {
    return cpa::validate_single(*s, cpa::ReducedPidParams::from_span(k),
                                file.mc);
  }
  return cpa::validate_cascade(std::get<cpa::CascadeProblem>(file.loop),
                               cpa::CascadeParams::from_span(k), file.mc);
}

int cmd_assess(const GlobalFlags& g, const AssessFlags& f) {
  cpa::ProblemFile file = cpa::load_problem(f.file);
  apply_seed(g, file);
  const std::size_t runs = g.runs.value_or(30);
  const std::size_t jobs = resolve_jobs(g.jobs);

  cpa::AssessmentReport report =
      file.is_cascade()
          ? cpa::assess_cascade(std::get<cpa::CascadeProblem>(file.loop),
                                file.tlbo, runs, jobs)
          : cpa::assess_single(std::get<cpa::SingleLoopProblem>(file.loop),
                               file.tlbo, runs, jobs);
  if (file.noise_defaulted) {
    report.assumptions.push_back(
        "no noise section given; shock variances taken as 1");
  }
  bool ok = true;
  if (f.validate) {
    report.validation = run_validation(file, report.best_params);
    ok = report.validation->relative_error <= f.tolerance;
  }

  ojson json;
  json["problem"] = cpa::to_json(file);
  json["assessment"] = cpa::to_json(report);
  const std::string csv = cpa::assessment_csv(report);
  const fs::path out(g.out);
  cpa::write_text(out / "assess.json", json.dump(2) + "\n");
  cpa::write_text(out / "assess.csv", csv);
  cpa::write_text(out / "assess_runs.csv", cpa::runs_csv(report));

  std::string text = fmt::format(
      "{} ({} loop, p = {}, {} runs)\n"
      "MOV    {:.7g} (mean {:.7g}, std {:.3e}, worst {:.7g})\n",
      file.name.empty() ? f.file : file.name, report.loop, report.truncation,
      report.runs.size(), report.mov_best, report.mov_mean, report.mov_std,
      report.mov_worst);
  if (report.mv) {
    text += fmt::format("MV     {:.7g}\neta    {:.4f}\n", *report.mv,
                        report.eta.value_or(0.0));
  }
  text += fmt::format("params {}\n", params_text(report.best_params));
  if (report.validation)
    text += validation_text(*report.validation, f.tolerance);
  text += fmt::format("reports written to {}\n", out.string());
  emit(g, json, csv, text);
  return ok ? kOk : kFailed;
}

int cmd_tune(const GlobalFlags& g, const TuneFlags& f) {
  cpa::ProblemFile file = cpa::load_problem(f.file);
  apply_seed(g, file);
  if (f.rho) {
    if (*f.rho < 0.0) throw UsageError("--rho must be >= 0");
    file.tuning.rho = *f.rho;
    file.tuning.rho_sweep.clear();
  }
  if (!f.rho_sweep.empty()) {
    for (double r : f.rho_sweep) {
      if (r < 0.0) throw UsageError("--rho-sweep weights must be >= 0");
    }
    file.tuning.rho_sweep = f.rho_sweep;
  }
  if (f.restarts) file.tuning.restarts = *f.restarts;
  if (g.runs) file.tuning.restarts = *g.runs;

  const std::vector<double> weights = file.weights();
  const cpa::TuningProblem base = file.tuning_problem(weights.front());
  const auto reports = cpa::tune_sweep(
      base, weights, file.tlbo, file.tuning.restarts, resolve_jobs(g.jobs));
  const fs::path out(g.out);
  ojson json;
  json["problem"] = cpa::to_json(file);
  json["sweep"] = ojson::array();
  for (const auto& r : reports) {
    json["sweep"].push_back(cpa::to_json(r));
    cpa::write_text(out / fmt::format("step_rho_{:g}.csv", r.weight),
                    cpa::step_response_csv(r.response));
  }

  std::string text = fmt::format(
      "{} ({} loop, horizon {} samples, Ts {:g} s)\n",
      file.name.empty() ? f.file : file.name,
      file.is_cascade() ? "cascade" : "single", base.horizon, base.sample_time);
  text += fmt::format("{:>10}  {:<32}  {:>12}  {:>10}  {:>9}  {:>10}\n", "rho",
                      "params", "variance", "IAE", "overshoot", "ss error");
  for (const auto& r : reports) {
    text += fmt::format(
        "{:>10g}  {:<32}  {:>12.5e}  {:>10.4f}  {:>8.1f}%  {:>10.2e}\n",
        r.weight, params_text(r.params), r.variance, r.iae,
        r.response.overshoot_percent, r.steady_state_error);
  }

  if (f.multistage) {
    std::vector<cpa::Stage> stages = file.tuning.multistage;
    if (stages.empty()) {
      // Tracking-oriented parameters until the first response settles, then
      // the most variance-oriented ones.
      if (reports.size() < 2) {
        throw UsageError(
            "--multistage needs tuning.multistage stages or at "
            "least two sweep weights");
      }
      const auto& first = reports.front();
      const double settle = first.response.settling_time.value_or(
          base.horizon * base.sample_time / 2.0);
      const int switch_at =
          std::max(1, static_cast<int>(std::ceil(settle / base.sample_time)));
      stages = {{first.params, 0}, {reports.back().params, switch_at}};
    }
    const auto rec = cpa::simulate_multistage(base, stages);
    ojson ms;
    ms["stages"] = ojson::array();
    for (const auto& s : stages) {
      ms["stages"].push_back({{"params", s.params}, {"start", s.start}});
    }
    ms["response"] = cpa::to_json(rec);
    json["multistage"] = ms;
    cpa::write_text(out / "step_multistage.csv", cpa::step_response_csv(rec));
    text +=
        fmt::format("multistage: {} stages, IAE {:.4f}, overshoot {:.1f}%\n",
                    stages.size(), rec.iae, rec.overshoot_percent);
  }
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) text += fmt::format("warning: {}\n", w);
    if (!r.warnings.empty()) break;
  }

  const std::string csv = cpa::tuning_csv(reports);
  cpa::write_text(out / "tune.json", json.dump(2) + "\n");
  cpa::write_text(out / "tune.csv", csv);
  text += fmt::format("reports written to {}\n", out.string());
  emit(g, json, csv, text);
  return kOk;
}

int cmd_bench(const GlobalFlags& g, const BenchFlags& f) {
  cpa::TlboConfig cfg;
  cfg.seed = g.seed.value_or(0);
  for (int id : f.problems) {
    if (id < 1 || id > cpa::kBenchmarkCount) {
      throw UsageError(fmt::format("unknown benchmark id {} (expected 1..{})",
                                   id, cpa::kBenchmarkCount));
    }
  }
  const auto suite = cpa::run_benchmark_suite(cfg, g.runs.value_or(30),
                                              f.problems, resolve_jobs(g.jobs));
  const fs::path out(g.out);
  const ojson json = cpa::to_json(suite);
  const std::string csv = cpa::to_csv(suite);
  const std::string md = cpa::to_markdown(suite);
  cpa::write_text(out / "bench.json", json.dump(2) + "\n");
  cpa::write_text(out / "bench.csv", csv);
  cpa::write_text(out / "bench.md", md);
  emit(g, json, csv, md);
  return suite.passed() ? kOk : kFailed;
}

int cmd_validate(const GlobalFlags& g, const ValidateFlags& f) {
  cpa::ProblemFile file = cpa::load_problem(f.file);
  apply_seed(g, file);
  if (f.samples) file.mc.samples = *f.samples;
  if (f.mode) file.mc.mode = cpa::shock_correlation_from_string(*f.mode);
  file.mc.validate();

  std::array<double, 3> k{};
  if (!f.params.empty()) {
    k = three_params(f.params);
  } else {
    const std::size_t runs = g.runs.value_or(1);
    const auto rep =
        file.is_cascade()
            ? cpa::assess_cascade(std::get<cpa::CascadeProblem>(file.loop),
                                  file.tlbo, runs, resolve_jobs(g.jobs))
            : cpa::assess_single(std::get<cpa::SingleLoopProblem>(file.loop),
                                 file.tlbo, runs, resolve_jobs(g.jobs));
    k = rep.best_params;
  }
  const cpa::ValidationBlock v = run_validation(file, k);
  const bool ok = v.relative_error <= f.tolerance;

  ojson json;
  json["problem"] = cpa::to_json(file);
  json["params"] = k;
  json["validation"] = cpa::to_json(v);
  json["tolerance"] = f.tolerance;
  json["passed"] = ok;
  const std::string csv = fmt::format(
      "mode,samples,estimate,standard_error,analytic,relative_error,passed\n"
      "{},{},{:.10g},{:.6e},{:.10g},{:.6e},{}\n",
      v.mode, v.samples, v.estimate, v.standard_error, v.analytic,
      v.relative_error, ok);
  const fs::path out(g.out);
  cpa::write_text(out / "validate.json", json.dump(2) + "\n");
  cpa::write_text(out / "validate.csv", csv);
  emit(g, json, csv,
       fmt::format("params {}\n{}", params_text(k),
                   validation_text(v, f.tolerance)));
  return ok ? kOk : kFailed;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const cpa::ProblemFileError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const UsageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::out_of_range& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Achievable output variance, controller tuning and Monte-Carlo "
      "validation for PID and PI/P cascade loops"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed,
                 "Base RNG seed (overrides the problem file)");
  app.add_option("--runs", g.runs,
                 "Independent runs (assess/bench: default 30; tune: restarts)")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads, 0 = all cores")
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--format", g.format, "Standard output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();

  AssessFlags af;
  auto* assess =
      app.add_subcommand("assess", "Minimum output variance of a loop");
  assess->add_option("file", af.file, "Problem file (JSON)")->required();
  assess->add_flag("--validate", af.validate,
                   "Attach a Monte-Carlo check at the best parameters");
  assess
      ->add_option("--tolerance", af.tolerance,
                   "Relative error allowed by --validate")
      ->capture_default_str();

  TuneFlags tf;
  auto* tune = app.add_subcommand("tune", "Tune against IAE + rho * variance");
  tune->add_option("file", tf.file, "Problem file (JSON)")->required();
  auto* rho = tune->add_option("--rho", tf.rho, "Single weight");
  tune->add_option("--rho-sweep", tf.rho_sweep, "Comma-separated weights")
      ->delimiter(',')
      ->excludes(rho);
  tune->add_option("--restarts", tf.restarts, "Optimizer restarts per weight")
      ->check(CLI::PositiveNumber);
  tune->add_flag("--multistage", tf.multistage,
                 "Also simulate the staged parameter schedule");

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Run the embedded benchmark suite");
  bench->add_option("--problems", bf.problems, "Comma-separated ids (1..10)")
      ->delimiter(',');

  ValidateFlags vf;
  auto* validate = app.add_subcommand(
      "validate", "Monte-Carlo check of the analytic variance");
  validate->add_option("file", vf.file, "Problem file (JSON)")->required();
  validate
      ->add_option("--params", vf.params,
                   "Controller parameters k (default: assessed optimum)")
      ->delimiter(',');
  validate->add_option("--samples", vf.samples, "Simulated samples")
      ->check(CLI::PositiveNumber);
  validate->add_option("--mode", vf.mode, "Cascade shock correlation")
      ->check(CLI::IsMember({"independent", "fully_correlated"}));
  validate->add_option("--tolerance", vf.tolerance, "Allowed relative error")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*assess) return guarded([&] { return cmd_assess(g, af); });
  if (*tune) return guarded([&] { return cmd_tune(g, tf); });
  if (*bench) return guarded([&] { return cmd_bench(g, bf); });
  return guarded([&] { return cmd_validate(g, vf); });
}
