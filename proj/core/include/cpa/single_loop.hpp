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
#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cpa/lti.hpp"

namespace cpa {

/// Parallel-form PID gains.
struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

/// Incremental PID coefficients of
///   Gc(q^-1) = (k1 + k2 q^-1 + k3 q^-2) / (1 - q^-1)
/// with k1 = kp + ki + kd, k2 = -(kp + 2 kd), k3 = kd.
struct ReducedPidParams {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  static ReducedPidParams from_gains(const PidGains& g);
  static ReducedPidParams from_span(std::span<const double> k);
  PidGains to_gains() const;
  std::array<double, 3> as_array() const { return {k1, k2, k3}; }
};

struct SingleLoopProblem {
  TransferFunction process;
  TransferFunction disturbance;
  double noise_variance = 1.0;
  int truncation = 0;  ///< p, number of closed-loop impulse coefficients

  /// Problem with truncation p = p_multiplier * d.
  static SingleLoopProblem make(TransferFunction process,
                                TransferFunction disturbance,
                                double noise_variance, int p_multiplier = 8);

  /// Throws std::invalid_argument on d < 1, p < d or negative variance.
  void validate() const;
};

/// Closed-loop response of the output to a unit disturbance shock, p values.
ImpulseSeq closed_loop_impulse(const SingleLoopProblem& problem,
                               const ReducedPidParams& k);

/// phi' phi sigma^2.
double output_variance(const ImpulseSeq& phi, double noise_variance);

/// Minimum-variance floor: sigma^2 times the energy of the first d disturbance
/// impulse coefficients (the feedback-invariant part).
double mv_benchmark(const SingleLoopProblem& problem);

/// Characteristic polynomial of the loop in q^-1:
///   (1 - q^-1) A(q^-1) + (k1 + k2 q^-1 + k3 q^-2) B(q^-1) q^-d
std::vector<double> closed_loop_characteristic(const SingleLoopProblem& problem,
                                               const ReducedPidParams& k);

bool is_stabilizing(const SingleLoopProblem& problem,
                    const ReducedPidParams& k);

/// Truncated output variance as a function of (k1, k2, k3). Holds the
/// precomputed operator series; safe to call from several threads.
class SingleLoopObjective {
 public:
  explicit SingleLoopObjective(const SingleLoopProblem& problem);

  double operator()(std::span<const double> k) const;

  /// Closed-loop impulse response for the given parameters.
  void impulse(const ReducedPidParams& k, std::span<double> phi) const;

  std::uint64_t evaluations() const { return count_->load(); }
  std::size_t length() const { return disturbance_.size(); }

 private:
  // First column of I_m: the process step response with a zero diagonal.
  // The 1/(1 - q^-1) of the incremental PID is carried by this series.
  std::vector<double> loop_;
  std::vector<double> disturbance_;
  double noise_variance_;
  std::shared_ptr<std::atomic<std::uint64_t>> count_;
};

SingleLoopObjective cpa_objective(const SingleLoopProblem& problem);

}  // namespace cpa
