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

#include "cpa/report_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace cpa {
namespace {

ojson optional_number(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? fmt::format("{:.10g}", *v) : std::string();
}

}  // namespace

ojson to_json(const TransferFunction& tf) {
  return {{"num", tf.numerator()},
          {"den", tf.denominator()},
          {"delay", tf.delay()}};
}

ojson to_json(const LoopModel& loop) {
  if (const auto* s = std::get_if<SingleLoopProblem>(&loop)) {
    return {{"kind", "single"},
            {"process", to_json(s->process)},
            {"disturbance", to_json(s->disturbance)},
            {"noise_variance", s->noise_variance},
            {"truncation", s->truncation}};
  }
  const auto& c = std::get<CascadeProblem>(loop);
  return {{"kind", "cascade"},
          {"outer", to_json(c.outer)},
          {"inner", to_json(c.inner)},
          {"outer_disturbance", to_json(c.outer_disturbance)},
          {"inner_disturbance", to_json(c.inner_disturbance)},
          {"outer_noise_variance", c.outer_noise_variance},
          {"inner_noise_variance", c.inner_noise_variance},
          {"truncation", c.truncation}};
}

ojson to_json(const TlboConfig& cfg) {
  return {{"np", cfg.population},
          {"lower", cfg.lower},
          {"upper", cfg.upper},
          {"window", cfg.termination_window},
          {"tol", cfg.termination_tol},
          {"max_iters", cfg.max_iterations},
          {"seed", cfg.seed},
          {"per_dimension_rand", cfg.per_dimension_rand}};
}

ojson to_json(const McConfig& cfg) {
  return {{"samples", cfg.samples},
          {"burn_in", cfg.resolved_burn_in()},
          {"seed", cfg.seed},
          {"mode", to_string(cfg.mode)},
          {"batches", cfg.batches}};
}

ojson to_json(const ValidationBlock& v) {
  return {{"mode", v.mode},         {"samples", v.samples},
          {"burn_in", v.burn_in},   {"seed", v.seed},
          {"estimate", v.estimate}, {"standard_error", v.standard_error},
          {"analytic", v.analytic}, {"relative_error", v.relative_error}};
}

ojson to_json(const StepResponseRecord& rec) {
  ojson stages = ojson::array();
  for (const auto& s : rec.stages) {
    stages.push_back({{"start", s.start},
                      {"end", s.end},
                      {"iae", s.iae},
                      {"overshoot_percent", s.overshoot_percent}});
  }
  return {
      {"samples", rec.output.size()},
      {"sample_time", rec.sample_time},
      {"iae", rec.iae},
      {"iae_seconds", rec.iae_seconds()},
      {"overshoot_percent", rec.overshoot_percent},
      {"settling_time", optional_number(rec.settling_time)},
      {"final_error", rec.error.empty() ? 0.0 : rec.error.back()},
      {"unstable", rec.unstable},
      {"divergence_sample",
       rec.divergence_sample ? ojson(*rec.divergence_sample) : ojson(nullptr)},
      {"stages", stages}};
}

ojson to_json(const AssessmentReport& r) {
  ojson runs = ojson::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"seed", run.seed},
                    {"mov", run.mov},
                    {"params", run.params},
                    {"iterations", run.iterations},
                    {"evaluations", run.evaluations},
                    {"converged", run.converged},
                    {"seconds", run.seconds}});
  }
  ojson j;
  j["loop"] = r.loop;
  j["truncation"] = r.truncation;
  j["mov"] = {{"best", r.mov_best},
              {"mean", r.mov_mean},
              {"std", r.mov_std},
              {"worst", r.mov_worst}};
  j["best_params"] = r.best_params;
  j["params_mean"] = r.params_mean;
  j["params_std"] = r.params_std;
  j["mv"] = optional_number(r.mv);
  j["eta"] = optional_number(r.eta);
  j["mean_seconds"] = r.mean_seconds;
  j["repetitions"] = r.runs.size();
  j["config"] = to_json(r.config);
  j["assumptions"] = r.assumptions;
  j["validation"] = r.validation ? to_json(*r.validation) : ojson(nullptr);
  j["runs"] = runs;
  return j;
}

ojson to_json(const TuningReport& r) {
  const auto& o = r.optimizer;
  return {{"rho", r.weight},
          {"params", r.params},
          {"variance", r.variance},
          {"iae", r.iae},
          {"objective", r.objective},
          {"steady_state_error", r.steady_state_error},
          {"response", to_json(r.response)},
          {"optimizer",
           {{"restarts", r.restarts},
            {"iterations", o.iterations},
            {"evaluations", o.evaluations},
            {"nan_evaluations", o.nan_evaluations},
            {"converged", o.converged},
            {"elapsed_seconds", o.elapsed_seconds}}},
          {"warnings", r.warnings}};
}

ojson to_json(const SuiteReport& s) {
  ojson results = ojson::array();
  for (const auto& r : s.results) {
    const auto& ref = r.reference;
    ojson j;
    j["example"] = r.id;
    j["mv"] = r.mv;
    j["mv_matches"] = r.mv_matches;
    j["reference"] = {{"mv", ref.mv},
                      {"bkmov", ref.bkmov},
                      {"mean", ref.mean},
                      {"std", ref.std},
                      {"worst", ref.worst},
                      {"seconds", ref.seconds},
                      {"params_mean", ref.params_mean},
                      {"params_std", ref.params_std}};
    j["mean_rel_delta"] = r.mean_rel_delta;
    j["mean_matches"] = r.mean_matches;
    j["std_ok"] = r.std_ok;
    j["within_bkmov"] = r.within_bkmov;
    j["params_rel_delta"] = r.params_rel_delta;
    j["passed"] = r.passed();
    j["error"] = r.error.empty() ? ojson(nullptr) : ojson(r.error);
    j["assessment"] = r.report ? to_json(*r.report) : ojson(nullptr);
    results.push_back(std::move(j));
  }
  return {{"repetitions", s.repetitions},
          {"config", to_json(s.config)},
          {"passed", s.passed()},
          {"seconds", s.seconds},
          {"results", results}};
}

std::string assessment_csv(const AssessmentReport& r) {
  std::string out =
      "loop,truncation,mv,mov_best,mov_mean,mov_std,mov_worst,eta,"
      "mean_seconds,runs,p1_mean,p2_mean,p3_mean,p1_std,p2_std,p3_std\n";
  out += fmt::format(
      "{},{},{},{:.10g},{:.10g},{:.6e},{:.10g},{},{:.6f},{},{:.10g},{:.10g},"
      "{:.10g},{:.6e},{:.6e},{:.6e}\n",
      r.loop, r.truncation, csv_optional(r.mv), r.mov_best, r.mov_mean,
      r.mov_std, r.mov_worst, csv_optional(r.eta), r.mean_seconds,
      r.runs.size(), r.params_mean[0], r.params_mean[1], r.params_mean[2],
      r.params_std[0], r.params_std[1], r.params_std[2]);
  return out;
}

std::string runs_csv(const AssessmentReport& r) {
  std::string out =
      "run,seed,mov,p1,p2,p3,iterations,evaluations,converged,seconds\n";
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const auto& x = r.runs[i];
    out +=
        fmt::format("{},{},{:.12g},{:.10g},{:.10g},{:.10g},{},{},{},{:.6f}\n",
                    i, x.seed, x.mov, x.params[0], x.params[1], x.params[2],
                    x.iterations, x.evaluations, x.converged, x.seconds);
  }
  return out;
}

std::string tuning_csv(std::span<const TuningReport> reports) {
  std::string out =
      "rho,p1,p2,p3,variance,iae,iae_seconds,overshoot_percent,"
      "settling_time,steady_state_error,objective\n";
  for (const auto& r : reports) {
    out += fmt::format(
        "{},{:.6f},{:.6f},{:.6f},{:.6e},{:.8g},{:.8g},{:.4f},{},{:.3e},{:.10g}"
        "\n",
        r.weight, r.params[0], r.params[1], r.params[2], r.variance, r.iae,
        r.response.iae_seconds(), r.response.overshoot_percent,
        csv_optional(r.response.settling_time), r.steady_state_error,
        r.objective);
  }
  return out;
}

std::string step_response_csv(const StepResponseRecord& rec) {
  std::string out = "time,setpoint,output,error\n";
  for (std::size_t t = 0; t < rec.output.size(); ++t) {
    out += fmt::format("{:.10g},{:.10g},{:.12g},{:.12g}\n", rec.time[t],
                       rec.setpoint[t], rec.output[t], rec.error[t]);
  }
  return out;
}

std::string fitness_history_csv(const OptResult& result) {
  std::string out = "phase,teacher_fitness\n";
  for (std::size_t g = 0; g < result.fitness_history.size(); ++g) {
    out += fmt::format("{},{:.15g}\n", g, result.fitness_history[g]);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out)
    throw std::runtime_error(fmt::format("error writing {}", path.string()));
}

}  // namespace cpa
