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

#include <benchmark/benchmark.h>

#include "cpa/bench_suite.hpp"
#include "cpa/monte_carlo.hpp"
#include "cpa/tuning.hpp"

namespace {

using namespace cpa;

// One analytic variance evaluation per iteration; Example 3 has the longest
// series (p = 224).
void BM_SingleLoopObjective(benchmark::State& state) {
  const int id = static_cast<int>(state.range(0));
  const auto f = cpa_objective(load_benchmark(id));
  const auto k = benchmark_reference(id).params_mean;
  for (auto _ : state) benchmark::DoNotOptimize(f(k));
  state.counters["p"] = static_cast<double>(f.length());
}
BENCHMARK(BM_SingleLoopObjective)->Arg(1)->Arg(3)->Arg(8);

void BM_CascadeObjective(benchmark::State& state) {
  const auto loop =
      std::get<CascadeProblem>(load_case_study("immersion_cascade").loop);
  const auto f = cascade_objective(loop);
  const std::array<double, 3> k{2.7638, -2.6554, -0.8436};
  for (auto _ : state) benchmark::DoNotOptimize(f(k));
}
BENCHMARK(BM_CascadeObjective);

void BM_TuningObjective(benchmark::State& state) {
  auto problem =
      load_case_study(state.range(0) == 0 ? "air_single" : "immersion_cascade");
  problem.weight = 1e6;
  const auto f = tuning_objective(problem);
  const auto k =
      case_study_reference(state.range(0) == 0 ? "air_single"
                                               : "immersion_cascade")[1]
          .params;
  for (auto _ : state) benchmark::DoNotOptimize(f(k));
}
BENCHMARK(BM_TuningObjective)->Arg(0)->Arg(1);

// A complete optimisation run with the default configuration.
void BM_TlboRun(benchmark::State& state) {
  const int id = static_cast<int>(state.range(0));
  const auto problem = load_benchmark(id);
  TlboConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    const auto r = minimize(cpa_objective(problem), cfg);
    benchmark::DoNotOptimize(r.best_fitness);
  }
  state.SetLabel("Example " + std::to_string(id));
}
BENCHMARK(BM_TlboRun)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto problem = load_benchmark(1);
  const auto k =
      ReducedPidParams::from_span(benchmark_reference(1).params_mean);
  McConfig cfg;
  cfg.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_variance_single(problem, k, cfg).variance);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
