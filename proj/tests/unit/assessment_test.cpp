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

#include "cpa/assessment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cpa/bench_suite.hpp"
#include "cpa/parallel.hpp"

namespace cpa {
namespace {

TEST(Assessment, SummaryStatisticsMatchRuns) {
  const auto p = load_benchmark(8);
  TlboConfig cfg;
  cfg.seed = 3;
  const auto rep = assess_single(p, cfg, 5);
  ASSERT_EQ(rep.runs.size(), 5u);
  EXPECT_EQ(rep.loop, "single");
  EXPECT_EQ(rep.truncation, 24);

  std::vector<double> movs;
  for (const auto& r : rep.runs) movs.push_back(r.mov);
  const double mean = std::accumulate(movs.begin(), movs.end(), 0.0) / 5.0;
  double ss = 0.0;
  for (double m : movs) ss += (m - mean) * (m - mean);
  EXPECT_NEAR(rep.mov_mean, mean, 1e-15);
  EXPECT_NEAR(rep.mov_std, std::sqrt(ss / 4.0), 1e-15);
  EXPECT_EQ(rep.mov_worst, *std::max_element(movs.begin(), movs.end()));
  EXPECT_EQ(rep.mov_best, *std::min_element(movs.begin(), movs.end()));
  ASSERT_TRUE(rep.mv && rep.eta);
  EXPECT_DOUBLE_EQ(*rep.eta, *rep.mv / rep.mov_best);
  EXPECT_LE(*rep.eta, 1.0);
  EXPECT_EQ(rep.runs[2].seed, derive_seed(3, 2));
  EXPECT_FALSE(rep.assumptions.empty());
}

TEST(Assessment, ReproducibleAndJobInvariant) {
  const auto p = load_benchmark(1);
  TlboConfig cfg;
  cfg.seed = 12;
  const auto a = assess_single(p, cfg, 4, 1);
  const auto b = assess_single(p, cfg, 4, 3);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.runs[i].mov, b.runs[i].mov);
    EXPECT_EQ(a.runs[i].params, b.runs[i].params);
  }
  EXPECT_EQ(a.mov_mean, b.mov_mean);
}

TEST(Assessment, CascadeHasNoMinimumVarianceBound) {
  const auto c =
      std::get<CascadeProblem>(load_case_study("immersion_cascade").loop);
  TlboConfig cfg;
  cfg.seed = 1;
  const auto rep = assess_cascade(c, cfg, 2);
  EXPECT_EQ(rep.loop, "cascade");
  EXPECT_EQ(rep.truncation, 80);
  EXPECT_FALSE(rep.mv.has_value());
  EXPECT_FALSE(rep.eta.has_value());
  EXPECT_GT(rep.mov_best, 0.0);
}

TEST(Assessment, RejectsZeroRuns) {
  EXPECT_THROW(assess_single(load_benchmark(1), TlboConfig{}, 0),
               std::invalid_argument);
}

}  // namespace
}  // namespace cpa
