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

#include "cpa/single_loop.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpa {

ReducedPidParams ReducedPidParams::from_gains(const PidGains& g) {
  return {g.kp + g.ki + g.kd, -(g.kp + 2.0 * g.kd), g.kd};
}

ReducedPidParams ReducedPidParams::from_span(std::span<const double> k) {
  if (k.size() != 3) {
    throw std::invalid_argument("PID parameter vector must have 3 entries");
  }
  return {k[0], k[1], k[2]};
}

PidGains ReducedPidParams::to_gains() const {
  const double kd = k3;
  const double kp = -k2 - 2.0 * kd;
  return {kp, k1 - kp - kd, kd};
}

SingleLoopProblem SingleLoopProblem::make(TransferFunction process,
                                          TransferFunction disturbance,
                                          double noise_variance,
                                          int p_multiplier) {
  if (p_multiplier < 1) {
    throw std::invalid_argument("p_multiplier must be >= 1");
  }
  const int p = p_multiplier * process.delay();
  SingleLoopProblem problem{std::move(process), std::move(disturbance),
                            noise_variance, p};
  problem.validate();
  return problem;
}

void SingleLoopProblem::validate() const {
  if (process.delay() < 1) {
    throw std::invalid_argument(
        "process dead time must be at least one sample (d >= 1)");
  }
  if (truncation < process.delay()) {
    throw std::invalid_argument(
        "truncation p=" + std::to_string(truncation) +
        " is shorter than the dead time d=" + std::to_string(process.delay()));
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("noise variance must be finite and >= 0");
  }
}

SingleLoopObjective::SingleLoopObjective(const SingleLoopProblem& problem)
    : noise_variance_(problem.noise_variance),
      count_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  problem.validate();
  const int n = problem.truncation - 1;
  loop_ = step_response(problem.process, n).coeffs;
  loop_.front() = 0.0;
  disturbance_ = impulse_response(problem.disturbance, n).coeffs;
}

void SingleLoopObjective::impulse(const ReducedPidParams& k,
                                  std::span<double> phi) const {
  // denom = I + k1 I_m + k2 F I_m + k3 F^2 I_m, as a first column.
  const std::size_t n = loop_.size();
  std::vector<double> denom(n, 0.0);
  denom[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double v = k.k1 * loop_[i];
    if (i >= 1) v += k.k2 * loop_[i - 1];
    if (i >= 2) v += k.k3 * loop_[i - 2];
    denom[i] += v;
  }
  kernel::solve_unit_lower(denom, disturbance_, phi);
}

double SingleLoopObjective::operator()(std::span<const double> k) const {
  count_->fetch_add(1, std::memory_order_relaxed);
  std::vector<double> phi(disturbance_.size());
  impulse(ReducedPidParams::from_span(k), phi);
  return kernel::dot(phi, phi) * noise_variance_;
}

SingleLoopObjective cpa_objective(const SingleLoopProblem& problem) {
  return SingleLoopObjective(problem);
}

ImpulseSeq closed_loop_impulse(const SingleLoopProblem& problem,
                               const ReducedPidParams& k) {
  const SingleLoopObjective objective(problem);
  ImpulseSeq phi{std::vector<double>(objective.length()), SeriesKind::impulse};
  objective.impulse(k, phi.coeffs);
  return phi;
}

double output_variance(const ImpulseSeq& phi, double noise_variance) {
  if (noise_variance < 0.0) {
    throw std::invalid_argument("noise variance must be >= 0");
  }
  return series_dot(phi, phi) * noise_variance;
}

double mv_benchmark(const SingleLoopProblem& problem) {
  problem.validate();
  const int d = problem.process.delay();
  const ImpulseSeq g = impulse_response(problem.disturbance, d - 1);
  return series_dot(g, g) * problem.noise_variance;
}

std::vector<double> closed_loop_characteristic(const SingleLoopProblem& problem,
                                               const ReducedPidParams& k) {
  const std::vector<double> integrator{1.0, -1.0};
  const std::vector<double> controller{k.k1, k.k2, k.k3};
  std::vector<double> delayed(static_cast<std::size_t>(problem.process.delay()),
                              0.0);
  const auto& b = problem.process.numerator();
  delayed.insert(delayed.end(), b.begin(), b.end());
  return poly_add(poly_mul(integrator, problem.process.denominator()),
                  poly_mul(controller, delayed));
}

bool is_stabilizing(const SingleLoopProblem& problem,
                    const ReducedPidParams& k) {
  return is_schur_stable(closed_loop_characteristic(problem, k));
}

}  // namespace cpa
