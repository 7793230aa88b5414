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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "cpa/bench_suite.hpp"

namespace cpa {
namespace {

CascadeProblem immersion() {
  return std::get<CascadeProblem>(load_case_study("immersion_cascade").loop);
}

constexpr CascadeParams kCascadeRow0{2.7638, -2.6554, -0.8436};

TEST(McConfig, Validation) {
  McConfig cfg;
  EXPECT_EQ(cfg.resolved_burn_in(), 100'000u);
  cfg.samples = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.samples = 100;
  cfg.burn_in = 100;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.burn_in = 0;
  cfg.batches = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(ShockCorrelation, NamesRoundTrip) {
  for (auto m :
       {ShockCorrelation::independent, ShockCorrelation::fully_correlated})
    EXPECT_EQ(shock_correlation_from_string(to_string(m)), m);
  EXPECT_THROW(shock_correlation_from_string("partial"), std::invalid_argument);
}

TEST(McVariance, StaticDisturbanceGain) {
  // Pure-gain plant and disturbance, so the loop is short-memory and the
  // truncated analytic value is exact to rounding.
  auto p = SingleLoopProblem::make(TransferFunction({0.5}, {1.0}, 1),
                                   TransferFunction::gain(3.0), 2.0);
  p.truncation = 400;
  const ReducedPidParams k{1.0, -0.9, 0.0};
  const double analytic = output_variance(closed_loop_impulse(p, k), 2.0);
  EXPECT_GT(analytic, 18.0);
  McConfig cfg;
  cfg.samples = 200'000;
  cfg.seed = 5;
  const auto est = mc_variance_single(p, k, cfg);
  EXPECT_EQ(est.samples_used, 180'000u);
  EXPECT_GT(est.standard_error, 0.0);
  EXPECT_NEAR(est.variance, analytic, 3.0 * est.standard_error);
}

TEST(McVariance, ReproducibleForSeed) {
  const auto p = load_benchmark(1);
  const auto k =
      ReducedPidParams::from_span(benchmark_reference(1).params_mean);
  McConfig cfg;
  cfg.samples = 20'000;
  cfg.seed = 77;
  const auto a = mc_variance_single(p, k, cfg);
  const auto b = mc_variance_single(p, k, cfg);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.standard_error, b.standard_error);
  cfg.seed = 78;
  EXPECT_NE(mc_variance_single(p, k, cfg).variance, a.variance);
}

TEST(McVariance, AgreesWithAnalyticSingle) {
  const auto p = load_benchmark(1);
  const auto k =
      ReducedPidParams::from_span(benchmark_reference(1).params_mean);
  McConfig cfg;
  cfg.samples = 400'000;
  cfg.seed = 3;
  const auto v = validate_single(p, k, cfg);
  EXPECT_EQ(v.mode, "single");
  EXPECT_LT(v.relative_error, 0.02);
  EXPECT_NEAR(v.estimate, v.analytic, 4.0 * v.standard_error);
}

TEST(McVariance, StandardErrorShrinksWithSamples) {
  const auto p = load_benchmark(1);
  const auto k =
      ReducedPidParams::from_span(benchmark_reference(1).params_mean);
  double ratio = 0.0;
  const int seeds = 8;
  for (int s = 0; s < seeds; ++s) {
    McConfig small;
    small.samples = 50'000;
    small.seed = 100 + s;
    McConfig large = small;
    large.samples = 200'000;
    ratio += mc_variance_single(p, k, small).standard_error /
             mc_variance_single(p, k, large).standard_error;
  }
  EXPECT_NEAR(ratio / seeds, 2.0, 0.4);
}

TEST(McVariance, CascadeModesMatchTheirFormulas) {
  const auto p = immersion();
  McConfig cfg;
  cfg.samples = 400'000;
  cfg.seed = 9;
  for (auto mode :
       {ShockCorrelation::fully_correlated, ShockCorrelation::independent}) {
    cfg.mode = mode;
    const auto v = validate_cascade(p, kCascadeRow0, cfg);
    EXPECT_EQ(v.mode, to_string(mode));
    EXPECT_LT(v.relative_error, 0.02) << v.mode;
  }
}

TEST(McVariance, ModesCoincideWithoutInnerNoise) {
  auto p = immersion();
  p.inner_noise_variance = 0.0;
  const auto phi = cascade_impulse(p, kCascadeRow0);
  EXPECT_EQ(
      cascade_variance(phi.outer_shock, phi.inner_shock, 1.0, 0.0),
      cascade_variance_independent(phi.outer_shock, phi.inner_shock, 1.0, 0.0));
  McConfig cfg;
  cfg.samples = 200'000;
  cfg.seed = 4;
  const auto a = validate_cascade(p, kCascadeRow0, cfg);
  cfg.mode = ShockCorrelation::independent;
  const auto b = validate_cascade(p, kCascadeRow0, cfg);
  EXPECT_EQ(a.analytic, b.analytic);
  EXPECT_NEAR(a.estimate, b.estimate,
              4.0 * std::hypot(a.standard_error, b.standard_error));
}

TEST(McVariance, UnstableDesignIsRejected) {
  const auto p = load_benchmark(1);
  McConfig cfg;
  cfg.samples = 1000;
  try {
    mc_variance_single(p, {40.0, 0.0, 0.0}, cfg);
    FAIL() << "expected UnstableLoopError";
  } catch (const UnstableLoopError& e) {
    EXPECT_FALSE(e.divergence_sample().has_value());
  }
  EXPECT_THROW(mc_variance_cascade(immersion(), {0, 0, 5.0}, cfg),
               UnstableLoopError);
}

}  // namespace
}  // namespace cpa
