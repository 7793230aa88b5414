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

#include "cpa/tuning.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpa/parallel.hpp"

namespace cpa {
namespace {

// Output beyond this multiple of the setpoint counts as divergence.
constexpr double kDivergenceRatio = 1e6;
constexpr double kSettlingBand = 0.02;

std::vector<Stage> validated_stages(std::span<const Stage> stages) {
  if (stages.empty())
    throw std::invalid_argument("at least one stage required");
  if (stages.front().start != 0) {
    throw std::invalid_argument("the first stage must start at t = 0");
  }
  for (std::size_t i = 1; i < stages.size(); ++i) {
    if (stages[i].start < stages[i - 1].start) {
      throw std::invalid_argument("stage switch samples must not decrease");
    }
  }
  return {stages.begin(), stages.end()};
}

// Fills the summary criteria once the output series is complete.
void summarise(StepResponseRecord& rec, double amplitude,
               std::span<const Stage> stages) {
  const int n = static_cast<int>(rec.output.size());
  double iae = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  int last_outside = -1;
  for (int t = 0; t < n; ++t) {
    iae += std::abs(rec.error[t]);
    peak = std::max(peak, rec.output[t]);
    if (std::abs(rec.error[t]) > kSettlingBand * std::abs(amplitude))
      last_outside = t;
  }
  rec.iae = iae;
  rec.overshoot_percent =
      n > 0 ? std::max(0.0, (peak - amplitude) / amplitude * 100.0) : 0.0;
  if (last_outside < 0) {
    rec.settling_time = 0.0;
  } else if (last_outside < n - 1) {
    rec.settling_time = (last_outside + 1) * rec.sample_time;
  }

  for (std::size_t s = 0; s < stages.size(); ++s) {
    StageCriteria c;
    c.start = std::min(stages[s].start, n);
    c.end = s + 1 < stages.size() ? std::min(stages[s + 1].start, n) : n;
    double stage_peak = -std::numeric_limits<double>::infinity();
    for (int t = c.start; t < c.end; ++t) {
      c.iae += std::abs(rec.error[t]);
      stage_peak = std::max(stage_peak, rec.output[t]);
    }
    if (c.end > c.start) {
      c.overshoot_percent =
          std::max(0.0, (stage_peak - amplitude) / amplitude * 100.0);
    }
    rec.stages.push_back(c);
  }
  if (rec.unstable) rec.iae = kDivergedCost;
}

StepResponseRecord start_record(int horizon, double sample_time) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(sample_time > 0.0)) {
    throw std::invalid_argument("sample time must be > 0");
  }
  StepResponseRecord rec;
  rec.sample_time = sample_time;
  rec.time.reserve(horizon);
  rec.setpoint.reserve(horizon);
  rec.output.reserve(horizon);
  rec.error.reserve(horizon);
  return rec;
}

// Appends sample t; returns false once the output has diverged.
bool record_sample(StepResponseRecord& rec, int t, double amplitude, double y) {
  if (!std::isfinite(y) ||
      std::abs(y) > kDivergenceRatio * std::abs(amplitude)) {
    rec.unstable = true;
    rec.divergence_sample = t;
    return false;
  }
  rec.time.push_back(t * rec.sample_time);
  rec.setpoint.push_back(amplitude);
  rec.output.push_back(y);
  rec.error.push_back(amplitude - y);
  return true;
}

StepResponseRecord run_single(const SingleLoopProblem& plant,
                              std::span<const Stage> stages, int horizon,
                              double sample_time, double amplitude) {
  plant.validate();
  StepResponseRecord rec = start_record(horizon, sample_time);
  // y(t) depends on u(t-d) at the latest; feeding u(t-1) into a model with
  // dead time d-1 keeps the loop causal.
  DifferenceEquation process(
      plant.process.with_delay(plant.process.delay() - 1));
  double u_prev = 0.0, e1 = 0.0, e2 = 0.0;
  std::size_t stage = 0;
  for (int t = 0; t < horizon; ++t) {
    while (stage + 1 < stages.size() && stages[stage + 1].start <= t) ++stage;
    const auto& k = stages[stage].params;
    const double y = process.step(u_prev);
    if (!record_sample(rec, t, amplitude, y)) break;
    const double e = amplitude - y;
    const double u = u_prev + k[0] * e + k[1] * e1 + k[2] * e2;
    e2 = e1;
    e1 = e;
    u_prev = u;
  }
  summarise(rec, amplitude, stages);
  return rec;
}

StepResponseRecord run_cascade(const CascadeProblem& plant,
                               std::span<const Stage> stages, int horizon,
                               double sample_time, double amplitude) {
  plant.validate();
  StepResponseRecord rec = start_record(horizon, sample_time);
  DifferenceEquation outer(plant.outer.with_delay(plant.outer.delay() - 1));
  DifferenceEquation inner(plant.inner.with_delay(plant.inner.delay() - 1));
  double u2_prev = 0.0, y2_prev = 0.0, r2 = 0.0, e1_prev = 0.0;
  std::size_t stage = 0;
  for (int t = 0; t < horizon; ++t) {
    while (stage + 1 < stages.size() && stages[stage + 1].start <= t) ++stage;
    const auto& k = stages[stage].params;
    const double y2 = inner.step(u2_prev);
    const double y1 = outer.step(y2_prev);
    if (!record_sample(rec, t, amplitude, y1)) break;
    const double e1 = amplitude - y1;
    r2 += k[0] * e1 + k[1] * e1_prev;  // PI outer controller, incremental
    const double u2 = k[2] * (r2 - y2);
    e1_prev = e1;
    u2_prev = u2;
    y2_prev = y2;
  }
  summarise(rec, amplitude, stages);
  return rec;
}

}  // namespace

void TuningProblem::validate() const {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("weight rho must be finite and >= 0");
  }
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(sample_time > 0.0)) {
    throw std::invalid_argument("sample time must be > 0");
  }
  if (setpoint == 0.0 || !std::isfinite(setpoint)) {
    throw std::invalid_argument(
        "setpoint amplitude must be finite and non-zero");
  }
  std::visit([](const auto& p) { p.validate(); }, loop);
}

std::vector<std::string> TuningProblem::warnings() const {
  std::vector<std::string> out;
  const auto check = [&](const TransferFunction& tf, const char* name) {
    const double tau = dominant_time_constant(tf, sample_time);
    const double span = horizon * sample_time;
    if (!(span >= 10.0 * tau)) {
      out.push_back(
          fmt::format("horizon {:.6g} s is shorter than 10x the {} time "
                      "constant ({:.6g} s)",
                      span, name, tau));
    }
  };
  if (const auto* s = std::get_if<SingleLoopProblem>(&loop)) {
    check(s->process, "process");
  } else {
    const auto& c = std::get<CascadeProblem>(loop);
    check(c.outer, "outer process");
    check(c.inner, "inner process");
  }
  return out;
}

StepResponseRecord simulate_step_single(const SingleLoopProblem& plant,
                                        const ReducedPidParams& k, int horizon,
                                        double sample_time, double amplitude) {
  const Stage stage{k.as_array(), 0};
  return run_single(plant, {&stage, 1}, horizon, sample_time, amplitude);
}

StepResponseRecord simulate_step_cascade(const CascadeProblem& plant,
                                         const CascadeParams& k, int horizon,
                                         double sample_time, double amplitude) {
  const Stage stage{k.as_array(), 0};
  return run_cascade(plant, {&stage, 1}, horizon, sample_time, amplitude);
}

StepResponseRecord simulate_multistage(const TuningProblem& problem,
                                       std::span<const Stage> stages) {
  problem.validate();
  const auto checked = validated_stages(stages);
  if (const auto* s = std::get_if<SingleLoopProblem>(&problem.loop)) {
    return run_single(*s, checked, problem.horizon, problem.sample_time,
                      problem.setpoint);
  }
  return run_cascade(std::get<CascadeProblem>(problem.loop), checked,
                     problem.horizon, problem.sample_time, problem.setpoint);
}

StepResponseRecord simulate_step(const TuningProblem& problem,
                                 const ControllerParams& k) {
  const Stage stage{k, 0};
  return simulate_multistage(problem, {&stage, 1});
}

double steady_state_error(const TuningProblem& problem,
                          const ControllerParams& k) {
  constexpr double kMaxSamples = 1e6;
  const double radius = closed_loop_radius(problem.loop, k);
  if (!(radius < 1.0)) return std::numeric_limits<double>::infinity();
  double samples = problem.horizon;
  if (radius > 0.0) samples = std::max(samples, 30.0 / -std::log(radius));
  TuningProblem settled = problem;
  settled.horizon = static_cast<int>(std::ceil(std::min(samples, kMaxSamples)));
  const StepResponseRecord rec = simulate_step(settled, k);
  if (rec.unstable) return std::numeric_limits<double>::infinity();
  return std::abs(rec.error.back() / problem.setpoint);
}

double loop_variance(const LoopModel& loop, const ControllerParams& k) {
  if (const auto* s = std::get_if<SingleLoopProblem>(&loop)) {
    return SingleLoopObjective(*s)(k);
  }
  return CascadeObjective(std::get<CascadeProblem>(loop))(k);
}

double closed_loop_radius(const LoopModel& loop, const ControllerParams& k) {
  if (const auto* s = std::get_if<SingleLoopProblem>(&loop)) {
    return spectral_radius(
        closed_loop_characteristic(*s, ReducedPidParams::from_span(k)));
  }
  return spectral_radius(cascade_characteristic(std::get<CascadeProblem>(loop),
                                                CascadeParams::from_span(k)));
}

bool is_stabilizing(const LoopModel& loop, const ControllerParams& k) {
  if (const auto* s = std::get_if<SingleLoopProblem>(&loop)) {
    return is_stabilizing(*s, ReducedPidParams::from_span(k));
  }
  return is_stabilizing(std::get<CascadeProblem>(loop),
                        CascadeParams::from_span(k));
}

namespace {

std::variant<SingleLoopObjective, CascadeObjective> make_variance(
    const LoopModel& loop) {
  if (const auto* s = std::get_if<SingleLoopProblem>(&loop)) {
    return SingleLoopObjective(*s);
  }
  return CascadeObjective(std::get<CascadeProblem>(loop));
}

}  // namespace

TuningObjective::TuningObjective(TuningProblem problem)
    : problem_(std::move(problem)), variance_(make_variance(problem_.loop)) {
  problem_.validate();
}

double TuningObjective::operator()(std::span<const double> k) const {
  if (k.size() != 3) {
    throw std::invalid_argument(
        "controller parameter vector must have 3 entries");
  }
  const ControllerParams params{k[0], k[1], k[2]};
  // Unstable designs are ranked by how far the closed-loop poles sit outside
  // the unit circle so the search can still move toward stability.
  const double radius = closed_loop_radius(problem_.loop, params);
  if (!(radius < 1.0)) {
    return std::isfinite(radius) ? kDivergedCost * (1.0 + radius)
                                 : std::numeric_limits<double>::max();
  }
  const StepResponseRecord rec = simulate_step(problem_, params);
  if (rec.unstable) return kDivergedCost;
  double cost = rec.iae;
  if (problem_.weight > 0.0) {
    cost += problem_.weight *
            std::visit([&](const auto& f) { return f(k); }, variance_);
  }
  return cost;
}

TuningObjective tuning_objective(const TuningProblem& problem) {
  return TuningObjective(problem);
}

TuningReport tune(const TuningProblem& problem, const TlboConfig& cfg,
                  std::size_t restarts) {
  const TuningObjective objective(problem);
  if (cfg.dimensions() != 3) {
    throw std::invalid_argument("tuning needs a 3-dimensional search box");
  }
  restarts = std::max<std::size_t>(restarts, 1);
  TuningReport report;
  report.weight = problem.weight;
  report.restarts = restarts;
  for (std::size_t r = 0; r < restarts; ++r) {
    TlboConfig run_cfg = cfg;
    if (restarts > 1) run_cfg.seed = derive_seed(cfg.seed, r);
    OptResult res = minimize(objective, run_cfg);
    if (r == 0 || res.best_fitness < report.optimizer.best_fitness) {
      report.optimizer = std::move(res);
    }
  }
  const auto& x = report.optimizer.best_point;
  report.params = {x[0], x[1], x[2]};
  report.objective = report.optimizer.best_fitness;
  report.variance = loop_variance(problem.loop, report.params);
  report.response = simulate_step(problem, report.params);
  report.iae = report.response.iae;
  report.steady_state_error = steady_state_error(problem, report.params);
  report.warnings = problem.warnings();
  return report;
}

std::vector<TuningReport> tune_sweep(const TuningProblem& problem,
                                     std::span<const double> weights,
                                     const TlboConfig& cfg,
                                     std::size_t restarts, std::size_t jobs) {
  std::vector<TuningReport> out(weights.size());
  parallel_for(weights.size(), jobs, [&](std::size_t i) {
    TuningProblem p = problem;
    p.weight = weights[i];
    out[i] = tune(p, cfg, restarts);
  });
  return out;
}

double dominant_time_constant(const TransferFunction& tf, double sample_time) {
  const double r = spectral_radius(tf.denominator());
  if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
  if (r <= 0.0) return 0.0;
  return -sample_time / std::log(r);
}

}  // namespace cpa
