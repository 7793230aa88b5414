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

#include "cpa/bench_suite.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

namespace cpa {
namespace {

TEST(Benchmarks, LoadsAllTen) {
  for (int id = 1; id <= kBenchmarkCount; ++id) {
    const auto p = load_benchmark(id);
    EXPECT_EQ(p.truncation, 8 * p.process.delay()) << id;
    EXPECT_EQ(p.noise_variance, 1.0);
    EXPECT_EQ(benchmark_reference(id).id, id);
  }
  EXPECT_THROW(load_benchmark(0), std::out_of_range);
  EXPECT_THROW(load_benchmark(11), std::out_of_range);
  EXPECT_THROW(benchmark_reference(11), std::out_of_range);
}

TEST(Benchmarks, SpotChecks) {
  const auto p1 = load_benchmark(1);
  EXPECT_EQ(p1.process.delay(), 5);
  EXPECT_EQ(p1.truncation, 40);
  EXPECT_EQ(load_benchmark(3).truncation, 224);
  const auto p10 = load_benchmark(10);
  const auto g = impulse_response(p10.disturbance, 3);
  EXPECT_NEAR(g[0], std::sqrt(0.001), 1e-15);
  EXPECT_NEAR(g[1], 0.8 * g[0], 1e-15);
}

TEST(Benchmarks, ReferenceOrdering) {
  for (int id = 1; id <= kBenchmarkCount; ++id) {
    const auto& ref = benchmark_reference(id);
    if (id != 2) {
      EXPECT_LE(ref.mv, ref.mean) << id;
    }
    // Reference TLBO means match or improve on the best known values.
    EXPECT_LE(ref.mean, ref.bkmov + 5e-5) << id;
    EXPECT_LE(ref.mean, ref.worst + 5e-5) << id;
  }
}

TEST(Benchmarks, MvColumnMatchesExceptExampleTwo) {
  for (int id = 1; id <= kBenchmarkCount; ++id) {
    const double mv = mv_benchmark(load_benchmark(id));
    if (id == 2) {
      EXPECT_FALSE(matches_printed(mv, benchmark_reference(id).mv));
    } else {
      EXPECT_TRUE(matches_printed(mv, benchmark_reference(id).mv))
          << id << ": " << mv;
    }
  }
}

TEST(MatchesPrinted, RoundsHalfAway) {
  EXPECT_TRUE(matches_printed(2.94272, 2.9427));
  EXPECT_FALSE(matches_printed(2.94276, 2.9427));
  EXPECT_TRUE(matches_printed(0.00244, 0.0024));
  EXPECT_TRUE(matches_printed(1.25, 1.3, 1));
}

TEST(CaseStudies, Facts) {
  const auto names = case_study_names();
  ASSERT_EQ(names.size(), 2u);
  const auto air = load_case_study("air_single");
  EXPECT_FALSE(air.is_cascade());
  EXPECT_EQ(air.horizon, 200);
  EXPECT_EQ(air.sample_time, 10.0);
  const auto& air_loop = std::get<SingleLoopProblem>(air.loop);
  EXPECT_EQ(air_loop.noise_variance, 1e-5);
  EXPECT_EQ(air_loop.process.delay(), 4);

  const auto imm = load_case_study("immersion_cascade");
  EXPECT_TRUE(imm.is_cascade());
  const auto& c = std::get<CascadeProblem>(imm.loop);
  EXPECT_EQ(c.truncation, 80);
  EXPECT_EQ(c.outer_noise_variance, 5e-5);
  EXPECT_EQ(c.inner_noise_variance, 5e-4);

  for (const auto& n : names) {
    const auto& rows = case_study_reference(n);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows.front().weight, 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i)
      EXPECT_GT(rows[i].weight, rows[i - 1].weight);
  }
  EXPECT_THROW(load_case_study("boiler"), std::out_of_range);
}

TEST(Suite, SmallRunIsDeterministicAndReported) {
  TlboConfig cfg;
  cfg.seed = 21;
  const int ids[] = {1, 8};
  const auto a = run_benchmark_suite(cfg, 3, ids, 2);
  const auto b = run_benchmark_suite(cfg, 3, ids, 1);
  ASSERT_EQ(a.results.size(), 2u);
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    const auto& r = a.results[i];
    ASSERT_TRUE(r.report.has_value()) << r.error;
    EXPECT_EQ(r.report->mov_mean, b.results[i].report->mov_mean);
    EXPECT_TRUE(r.mv_matches);
    EXPECT_TRUE(r.within_bkmov);
    EXPECT_EQ(r.report->runs.size(), 3u);
  }
  EXPECT_EQ(a.results[0].id, 1);

  const auto md = to_markdown(a);
  EXPECT_NE(md.find("| 1 |"), std::string::npos);
  const auto csv = to_csv(a);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

  const int bad[] = {42};
  EXPECT_THROW(run_benchmark_suite(cfg, 1, bad), std::out_of_range);
}

}  // namespace
}  // namespace cpa
