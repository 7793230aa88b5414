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

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cpa/cascade.hpp"
#include "cpa/single_loop.hpp"
#include "cpa/tlbo.hpp"

namespace cpa {

/// (k1, k2, k3) for a single loop, (k4, k5, k6) for a cascade.
using ControllerParams = std::array<double, 3>;

using LoopModel = std::variant<SingleLoopProblem, CascadeProblem>;

/// Fitness floor of a non-stabilising design, above any finite
/// IAE + rho * variance of a stable one. Unstable designs score
/// kDivergedCost * (1 + closed-loop spectral radius).
inline constexpr double kDivergedCost = 1e12;

struct TuningProblem {
  LoopModel loop;
  double weight = 0.0;  ///< rho
  int horizon = 200;    ///< simulated samples
  double sample_time = 1.0;
  double setpoint = 1.0;

  bool is_cascade() const {
    return std::holds_alternative<CascadeProblem>(loop);
  }

  /// Throws std::invalid_argument for rho < 0, horizon < 1, T_s <= 0 or a
  /// zero setpoint.
  void validate() const;

  /// Non-fatal issues, e.g. a horizon shorter than ten dominant time
  /// constants of the process.
  std::vector<std::string> warnings() const;
};

/// Controller parameters in force from sample `start` onwards.
struct Stage {
  ControllerParams params{};
  int start = 0;
};

struct StageCriteria {
  int start = 0;
  int end = 0;  ///< one past the last sample of the stage
  double iae = 0.0;
  double overshoot_percent = 0.0;
};

/// Noise-free response to a setpoint step at t = 0 from rest.
///
/// The time axis of the error integral is the sample index, so
/// iae = sum |e(t)|; iae_seconds() rescales by the sample time.
struct StepResponseRecord {
  std::vector<double> time;
  std::vector<double> setpoint;
  std::vector<double> output;
  std::vector<double> error;
  double sample_time = 1.0;
  double overshoot_percent = 0.0;
  std::optional<double> settling_time;  ///< 2 % band; empty if never settles
  double iae = 0.0;
  bool unstable = false;
  std::optional<int> divergence_sample;
  std::vector<StageCriteria> stages;

  double iae_seconds() const { return iae * sample_time; }
};

StepResponseRecord simulate_step_single(const SingleLoopProblem& plant,
                                        const ReducedPidParams& k, int horizon,
                                        double sample_time, double amplitude);

StepResponseRecord simulate_step_cascade(const CascadeProblem& plant,
                                         const CascadeParams& k, int horizon,
                                         double sample_time, double amplitude);

/// Step response with controller parameters switched at the stage starts.
/// The incremental control law keeps its state across a switch. Starts must
/// not decrease and the first must be 0; of several stages sharing a start
/// the last one applies.
StepResponseRecord simulate_multistage(const TuningProblem& problem,
                                       std::span<const Stage> stages);

StepResponseRecord simulate_step(const TuningProblem& problem,
                                 const ControllerParams& k);

/// |e| / |setpoint| once the loop has settled: the step response is run for
/// max(horizon, 30 closed-loop time constants) samples, capped at 10^6.
/// Infinite for a non-stabilising design.
double steady_state_error(const TuningProblem& problem,
                          const ControllerParams& k);

/// Analytic output variance of the loop with the setpoint held at zero.
double loop_variance(const LoopModel& loop, const ControllerParams& k);

bool is_stabilizing(const LoopModel& loop, const ControllerParams& k);

/// Largest closed-loop pole modulus; below 1 for a stabilising design.
double closed_loop_radius(const LoopModel& loop, const ControllerParams& k);

/// k -> IAE(k) + rho * variance(k). IAE comes from the noise-free step
/// response and the variance from the disturbance-only loop. Parameters that
/// do not stabilise the loop score kDivergedCost or more.
class TuningObjective {
 public:
  explicit TuningObjective(TuningProblem problem);

  double operator()(std::span<const double> k) const;

  const TuningProblem& problem() const { return problem_; }

 private:
  TuningProblem problem_;
  std::variant<SingleLoopObjective, CascadeObjective> variance_;
};

TuningObjective tuning_objective(const TuningProblem& problem);

struct TuningReport {
  double weight = 0.0;
  ControllerParams params{};
  double variance = 0.0;
  double iae = 0.0;
  double objective = 0.0;
  double steady_state_error = 0.0;
  StepResponseRecord response;
  OptResult optimizer;
  std::size_t restarts = 1;
  std::vector<std::string> warnings;
};

/// Best of `restarts` seeded TLBO runs (seeds derived from cfg.seed).
TuningReport tune(const TuningProblem& problem, const TlboConfig& cfg,
                  std::size_t restarts = 1);

/// One tune() per weight; points run concurrently on up to `jobs` threads.
std::vector<TuningReport> tune_sweep(const TuningProblem& problem,
                                     std::span<const double> weights,
                                     const TlboConfig& cfg,
                                     std::size_t restarts = 1,
                                     std::size_t jobs = 1);

/// Time constant of the slowest process pole in seconds (infinity for an
/// integrating or unstable process).
double dominant_time_constant(const TransferFunction& tf, double sample_time);

}  // namespace cpa
