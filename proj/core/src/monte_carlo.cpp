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

#include "cpa/monte_carlo.hpp"

#include <fmt/format.h>

#include <cmath>
#include <random>
#include <vector>

namespace cpa {
namespace {

// Divergence threshold on |y|; far beyond any stationary output.
constexpr double kBlowUp = 1e100;

// Welford accumulator for the whole run plus one per batch.
class BatchedVariance {
 public:
  BatchedVariance(std::size_t count, std::size_t batches)
      : batch_len_(std::max<std::size_t>(
            1, count / std::max<std::size_t>(batches, 1))) {}

  void add(double y) {
    total_.add(y);
    current_.add(y);
    if (current_.n == batch_len_) {
      batch_vars_.push_back(current_.variance());
      current_ = {};
    }
  }

  McEstimate finish() const {
    McEstimate out;
    out.variance = total_.variance();
    out.samples_used = total_.n;
    const std::size_t b = batch_vars_.size();
    if (b >= 2) {
      Welford spread;
      for (double v : batch_vars_) spread.add(v);
      out.standard_error = std::sqrt(spread.variance() * b / (b - 1) / b);
    }
    return out;
  }

 private:
  struct Welford {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
      ++n;
      const double d = x - mean;
      mean += d / static_cast<double>(n);
      m2 += d * (x - mean);
    }
    double variance() const {
      return n > 0 ? m2 / static_cast<double>(n) : 0.0;
    }
  };

  std::size_t batch_len_;
  Welford total_;
  Welford current_;
  std::vector<double> batch_vars_;
};

[[noreturn]] void diverged(std::size_t t) {
  throw UnstableLoopError(fmt::format("closed loop diverged at sample {}", t),
                          t);
}

double relative(double estimate, double analytic) {
  if (analytic == 0.0) return estimate == 0.0 ? 0.0 : std::abs(estimate);
  return std::abs(estimate - analytic) / std::abs(analytic);
}

}  // namespace

const char* to_string(ShockCorrelation mode) {
  return mode == ShockCorrelation::independent ? "independent"
                                               : "fully_correlated";
}

ShockCorrelation shock_correlation_from_string(const std::string& name) {
  if (name == "independent") return ShockCorrelation::independent;
  if (name == "fully_correlated") return ShockCorrelation::fully_correlated;
  throw std::invalid_argument(fmt::format(
      "unknown shock mode '{}' (expected independent or fully_correlated)",
      name));
}

void McConfig::validate() const {
  if (samples == 0) throw std::invalid_argument("mc samples must be > 0");
  if (resolved_burn_in() >= samples) {
    throw std::invalid_argument("mc burn_in must be smaller than samples");
  }
  if (batches < 2) throw std::invalid_argument("mc batches must be >= 2");
}

McEstimate mc_variance_single(const SingleLoopProblem& problem,
                              const ReducedPidParams& k, const McConfig& cfg) {
  problem.validate();
  cfg.validate();
  if (!is_stabilizing(problem, k)) {
    throw UnstableLoopError("controller does not stabilise the loop",
                            std::nullopt);
  }
  const int d = problem.process.delay();
  DifferenceEquation process(problem.process.with_delay(d - 1));
  DifferenceEquation disturbance(problem.disturbance);
  std::mt19937_64 engine(cfg.seed);
  std::normal_distribution<double> shock(0.0,
                                         std::sqrt(problem.noise_variance));

  const std::size_t burn = cfg.resolved_burn_in();
  BatchedVariance acc(cfg.samples - burn, cfg.batches);
  double u_prev = 0.0, e1 = 0.0, e2 = 0.0;
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    const double y = process.step(u_prev) + disturbance.step(shock(engine));
    if (!(std::abs(y) < kBlowUp)) diverged(t);
    const double e = -y;
    u_prev += k.k1 * e + k.k2 * e1 + k.k3 * e2;
    e2 = e1;
    e1 = e;
    if (t >= burn) acc.add(y);
  }
  return acc.finish();
}

McEstimate mc_variance_cascade(const CascadeProblem& problem,
                               const CascadeParams& k, const McConfig& cfg) {
  problem.validate();
  cfg.validate();
  if (!is_stabilizing(problem, k)) {
    throw UnstableLoopError("controller does not stabilise the loop",
                            std::nullopt);
  }
  DifferenceEquation outer(problem.outer.with_delay(problem.outer.delay() - 1));
  DifferenceEquation inner(problem.inner.with_delay(problem.inner.delay() - 1));
  DifferenceEquation outer_dist(problem.outer_disturbance);
  DifferenceEquation inner_dist(problem.inner_disturbance);
  const double s1 = std::sqrt(problem.outer_noise_variance);
  const double s2 = std::sqrt(problem.inner_noise_variance);
  std::mt19937_64 engine(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  const std::size_t burn = cfg.resolved_burn_in();
  BatchedVariance acc(cfg.samples - burn, cfg.batches);
  double u2_prev = 0.0, y2_prev = 0.0, r2 = 0.0, e1_prev = 0.0;
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    const double z1 = unit(engine);
    const double z2 =
        cfg.mode == ShockCorrelation::fully_correlated ? z1 : unit(engine);
    const double y2 = inner.step(u2_prev) + inner_dist.step(s2 * z2);
    const double y1 = outer.step(y2_prev) + outer_dist.step(s1 * z1);
    if (!(std::abs(y1) < kBlowUp) || !(std::abs(y2) < kBlowUp)) diverged(t);
    const double e1 = -y1;
    r2 += k.k4 * e1 + k.k5 * e1_prev;
    u2_prev = k.k6 * (r2 - y2);
    e1_prev = e1;
    y2_prev = y2;
    if (t >= burn) acc.add(y1);
  }
  return acc.finish();
}

ValidationBlock validate_single(const SingleLoopProblem& problem,
                                const ReducedPidParams& k,
                                const McConfig& cfg) {
  const McEstimate est = mc_variance_single(problem, k, cfg);
  ValidationBlock v;
  v.mode = "single";
  v.samples = cfg.samples;
  v.burn_in = cfg.resolved_burn_in();
  v.seed = cfg.seed;
  v.estimate = est.variance;
  v.standard_error = est.standard_error;
  v.analytic =
      output_variance(closed_loop_impulse(problem, k), problem.noise_variance);
  v.relative_error = relative(v.estimate, v.analytic);
  return v;
}

ValidationBlock validate_cascade(const CascadeProblem& problem,
                                 const CascadeParams& k, const McConfig& cfg) {
  const McEstimate est = mc_variance_cascade(problem, k, cfg);
  const CascadeImpulse phi = cascade_impulse(problem, k);
  const double s1 = std::sqrt(problem.outer_noise_variance);
  const double s2 = std::sqrt(problem.inner_noise_variance);
  ValidationBlock v;
  v.mode = to_string(cfg.mode);
  v.samples = cfg.samples;
  v.burn_in = cfg.resolved_burn_in();
  v.seed = cfg.seed;
  v.estimate = est.variance;
  v.standard_error = est.standard_error;
  v.analytic = cfg.mode == ShockCorrelation::fully_correlated
                   ? cascade_variance(phi.outer_shock, phi.inner_shock, s1, s2)
                   : cascade_variance_independent(phi.outer_shock,
                                                  phi.inner_shock, s1, s2);
  v.relative_error = relative(v.estimate, v.analytic);
  return v;
}

}  // namespace cpa
