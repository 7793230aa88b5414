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

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cpa/parallel.hpp"

namespace cpa {
namespace {

using Poly = std::vector<double>;

Poly product(std::initializer_list<Poly> factors) {
  Poly out{1.0};
  for (const auto& f : factors) out = poly_mul(out, f);
  return out;
}

struct BenchmarkModel {
  TransferFunction process;
  TransferFunction disturbance;
};

BenchmarkModel benchmark_model(int id) {
  const Poly lag{1.0, -0.8};
  const Poly integ{1.0, -1.0};
  switch (id) {
    case 1:
      return {{{0.2}, lag, 5}, {{1.0}, product({integ, {1.0, 0.4}})}};
    case 2:
      return {{{0.08919}, {1.0, -0.8669}, 12}, {{0.08919}, {1.0, -0.8669}}};
    case 3:
      return {{{0.5108}, {1.0, -0.9604}, 28}, {{0.5108}, {1.0, -0.9604}}};
    case 4:
      return {{{1.0}, lag, 6},
              {{1.0, 0.6}, product({{1.0, -0.5}, {1.0, -0.6}, {1.0, 0.7}})}};
    case 5:
      return {{{1.0}, lag, 6},
              {{1.0, -0.2},
               product({integ, {1.0, -0.3}, {1.0, 0.4}, {1.0, -0.5}})}};
    case 6:
      return {
          {{1.0}, lag, 6},
          {{1.0, 0.6}, product({integ, {1.0, -0.5}, {1.0, -0.6}, {1.0, 0.7}})}};
    case 7:
      return {{{0.1}, lag, 5},
              {{0.1}, product({integ, {1.0, -0.3}, {1.0, -0.6}})}};
    case 8:
      return {{{0.1}, lag, 3}, {{1.0}, integ}};
    case 9:
      return {{{0.1}, lag, 6}, {{0.1}, product({integ, {1.0, -0.7}})}};
    case 10:
      return {{{0.1}, lag, 3},
              {{std::sqrt(0.001)}, product({integ, {1.0, 0.2}})}};
    default:
      throw std::out_of_range(
          fmt::format("unknown benchmark id {} (expected 1..10)", id));
  }
}

// clang-format off
const std::array<ReferenceEntry, kBenchmarkCount> kReference{{
  {1, 2.9427, 3.0728, 3.0728, 3.36e-10, 3.0728, 0.3106,
   {2.8408, -4.4059, 1.7486}, {1.51e-05, 9.22e-05, 4.53e-05}},
  {2, 0.0306, 0.0310, 0.0310, 2.15e-11, 0.0310, 0.7524,
   {1.8236, -3.3531, 1.5299}, {1.31e-04, 6.84e-04, 3.12e-04}},
  {3, 3.0112, 3.0238, 3.0232, 5.16e-10, 3.0232, 3.6852,
   {0.4989, -0.9663, 0.4674}, {1.17e-05, 3.71e-05, 2.03e-05}},
  {4, 3.4004, 3.4065, 3.4064, 4.94e-09, 3.4064, 0.3624,
   {0.1354, -0.2523, 0.1170}, {8.00e-06, 1.47e-05, 7.19e-06}},
  {5, 11.9528, 13.8076, 13.8068, 5.18e-07, 13.8068, 0.3800,
   {0.7241, -1.2058, 0.5178}, {1.25e-05, 3.34e-06, 1.82e-06}},
  {6, 58.3406, 87.7377, 87.7069, 7.88e-10, 87.7069, 0.4128,
   {0.8327, -1.4003, 0.6094}, {5.00e-07, 7.67e-06, 4.33e-06}},
  {7, 0.2978, 0.4246, 0.4246, 5.36e-08, 0.4246, 0.2691,
   {8.0941, -13.1891, 5.5927}, {7.27e-04, 4.69e-04, 2.55e-04}},
  {8, 3.0000, 3.2032, 3.2032, 3.40e-08, 3.2032, 0.1900,
   {6.5338, -9.2379, 3.3583}, {3.74e-05, 1.79e-04, 1.16e-04}},
  {9, 0.3144, 0.4268, 0.4267, 2.50e-09, 0.4267, 0.3395,
   {8.2318, -13.7793, 5.9701}, {1.00e-04, 2.51e-04, 1.45e-04}},
  {10, 0.0023, 0.0024, 0.0024, 2.41e-10, 0.0024, 0.1436,
   {6.1676, -8.5741, 3.0332}, {5.73e-04, 1.35e-03, 7.63e-04}},
}};

const std::vector<CaseStudyRow> kAirSingleRows{
  {0.0,   {5.3333, -6.8756, 1.8693},    7.7624e-5},
  {1e5,   {7.9520, -10.2099, 2.8804},   4.0747e-5},
  {2.5e5, {9.5647, -12.4166, 3.6362},   3.2726e-5},
  {1e6,   {23.1165, -35.5929, 14.4531}, 2.6432e-5},
};

const std::vector<CaseStudyRow> kImmersionRows{
  {0.0, {2.7638, -2.6554, -0.8436}, 6.0551e-4},
  {1e6, {3.0563, -2.9922, -0.9631}, 5.3566e-4},
  {1e7, {2.8715, -2.8482, -1.0054}, 4.9421e-4},
  {1e8, {2.9088, -2.8420, -0.9538}, 4.8117e-4},
};
// clang-format on

std::string fmt_params(const std::array<double, 3>& p) {
  return fmt::format("[{:.4f}, {:.4f}, {:.4f}]", p[0], p[1], p[2]);
}

}  // namespace

SingleLoopProblem load_benchmark(int id) {
  BenchmarkModel m = benchmark_model(id);
  return SingleLoopProblem::make(std::move(m.process), std::move(m.disturbance),
                                 1.0);
}

const ReferenceEntry& benchmark_reference(int id) {
  if (id < 1 || id > kBenchmarkCount) {
    throw std::out_of_range(
        fmt::format("unknown benchmark id {} (expected 1..10)", id));
  }
  return kReference[static_cast<std::size_t>(id - 1)];
}

TuningProblem load_case_study(const std::string& name) {
  if (name == "air_single") {
    auto loop = SingleLoopProblem::make(
        TransferFunction({0.0413}, {1.0, -0.8952}, 4),
        TransferFunction({0.2}, product({{1.0, -1.0}, {1.0, -0.8952}})), 1e-5);
    return TuningProblem{std::move(loop), 0.0, 200, 10.0, 1.0};
  }
  if (name == "immersion_cascade") {
    auto loop = CascadeProblem::make(
        TransferFunction({0.04292}, {1.0, -0.9575}, 7),
        TransferFunction({-0.5314}, {1.0, -0.6023}, 3),
        TransferFunction({1.0}, {1.0, -0.9575}),
        TransferFunction({1.0}, {1.0, -0.6023}), 5e-5, 5e-4);
    return TuningProblem{std::move(loop), 0.0, 300, 6.0, 1.0};
  }
  throw std::out_of_range(fmt::format(
      "unknown case study '{}' (expected air_single or immersion_cascade)",
      name));
}

const std::vector<CaseStudyRow>& case_study_reference(const std::string& name) {
  if (name == "air_single") return kAirSingleRows;
  if (name == "immersion_cascade") return kImmersionRows;
  throw std::out_of_range(fmt::format("unknown case study '{}'", name));
}

std::vector<std::string> case_study_names() {
  return {"air_single", "immersion_cascade"};
}

bool matches_printed(double value, double printed, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) == std::round(printed * scale);
}

bool SuiteReport::passed() const {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(),
                     [](const BenchmarkResult& r) { return r.passed(); });
}

SuiteReport run_benchmark_suite(const TlboConfig& cfg, std::size_t repetitions,
                                std::span<const int> ids, std::size_t jobs) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  cfg.validate();
  std::vector<int> list(ids.begin(), ids.end());
  if (list.empty()) {
    list.resize(kBenchmarkCount);
    std::iota(list.begin(), list.end(), 1);
  }
  for (int id : list) benchmark_reference(id);  // reject unknown ids up front

  const auto start = std::chrono::steady_clock::now();
  SuiteReport suite;
  suite.config = cfg;
  suite.repetitions = repetitions;
  suite.results.resize(list.size());
  parallel_for(list.size(), jobs, [&](std::size_t i) {
    BenchmarkResult& r = suite.results[i];
    r.id = list[i];
    r.reference = benchmark_reference(r.id);
    try {
      const SingleLoopProblem problem = load_benchmark(r.id);
      r.mv = mv_benchmark(problem);
      r.mv_matches = matches_printed(r.mv, r.reference.mv);
      TlboConfig run_cfg = cfg;
      run_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r.id));
      AssessmentReport rep = assess_single(problem, run_cfg, repetitions, 1);
      rep.assumptions.push_back(
          "noise variance sigma_a^2 = 1 (not stated with the benchmark "
          "models; consistent with the reference MV column)");
      const ReferenceEntry& ref = r.reference;
      r.mean_rel_delta = (rep.mov_mean - ref.mean) / ref.mean;
      r.mean_matches = std::abs(r.mean_rel_delta) <= 1e-3 ||
                       matches_printed(rep.mov_mean, ref.mean);
      r.std_ok = rep.mov_std <= 1e-4 * std::abs(rep.mov_mean);
      r.within_bkmov = rep.mov_best <= ref.bkmov * (1.0 + 1e-3);
      for (std::size_t j = 0; j < 3; ++j) {
        r.params_rel_delta[j] = (rep.params_mean[j] - ref.params_mean[j]) /
                                std::abs(ref.params_mean[j]);
      }
      r.report = std::move(rep);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  suite.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return suite;
}

std::string to_markdown(const SuiteReport& report) {
  std::string out =
      fmt::format("# Benchmark suite ({} runs per problem, seed {})\n\n",
                  report.repetitions, report.config.seed);
  out +=
      "| Example | MV | MV ref | BKMOV | Mean | Mean ref | Rel. delta | Std | "
      "Worst | Time (s) | Time ref (s) | Status |\n"
      "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.results) {
    const auto& ref = r.reference;
    if (!r.report) {
      out += fmt::format(
          "| {} | {:.4f} | {:.4f} | {:.4f} | - | {:.4f} | - | - "
          "| - | - | {:.4f} | error: {} |\n",
          r.id, r.mv, ref.mv, ref.bkmov, ref.mean, ref.seconds, r.error);
      continue;
    }
    const auto& a = *r.report;
    out += fmt::format(
        "| {} | {:.4f} | {:.4f} | {:.4f} | {:.7f} | {:.4f} | {:+.2e} | {:.2e} "
        "| {:.7f} | {:.4f} | {:.4f} | {} |\n",
        r.id, r.mv, ref.mv, ref.bkmov, a.mov_mean, ref.mean, r.mean_rel_delta,
        a.mov_std, a.mov_worst, a.mean_seconds, ref.seconds,
        r.passed() ? "pass" : "FAIL");
  }
  out +=
      "\n| Example | Params mean | Params std | Reference mean | Max rel. "
      "delta |\n|---|---|---|---|---|\n";
  for (const auto& r : report.results) {
    if (!r.report) continue;
    double worst = 0.0;
    for (double d : r.params_rel_delta) worst = std::max(worst, std::abs(d));
    out += fmt::format("| {} | {} | [{:.2e}, {:.2e}, {:.2e}] | {} | {:.2e} |\n",
                       r.id, fmt_params(r.report->params_mean),
                       r.report->params_std[0], r.report->params_std[1],
                       r.report->params_std[2],
                       fmt_params(r.reference.params_mean), worst);
  }
  out += fmt::format("\nOverall: {} ({:.2f} s)\n",
                     report.passed() ? "pass" : "FAIL", report.seconds);
  return out;
}

std::string to_csv(const SuiteReport& report) {
  std::string out =
      "example,mv,mv_ref,bkmov,mov_mean,mov_mean_ref,mean_rel_delta,mov_std,"
      "mov_worst,mov_best,mean_seconds,seconds_ref,k1_mean,k2_mean,k3_mean,"
      "k1_std,k2_std,k3_std,k1_ref,k2_ref,k3_ref,passed,error\n";
  for (const auto& r : report.results) {
    const auto& ref = r.reference;
    if (!r.report) {
      out += fmt::format(
          "{},{:.10g},{},{},,{},,,,,,{},,,,,,,{},{},{},false,\"{}\"\n", r.id,
          r.mv, ref.mv, ref.bkmov, ref.mean, ref.seconds, ref.params_mean[0],
          ref.params_mean[1], ref.params_mean[2], r.error);
      continue;
    }
    const auto& a = *r.report;
    out += fmt::format(
        "{},{:.10g},{},{},{:.10g},{},{:.6e},{:.6e},{:.10g},{:.10g},{:.6f},{},"
        "{:.10g},{:.10g},{:.10g},{:.6e},{:.6e},{:.6e},{},{},{},{},\n",
        r.id, r.mv, ref.mv, ref.bkmov, a.mov_mean, ref.mean, r.mean_rel_delta,
        a.mov_std, a.mov_worst, a.mov_best, a.mean_seconds, ref.seconds,
        a.params_mean[0], a.params_mean[1], a.params_mean[2], a.params_std[0],
        a.params_std[1], a.params_std[2], ref.params_mean[0],
        ref.params_mean[1], ref.params_mean[2], r.passed() ? "true" : "false");
  }
  return out;
}

}  // namespace cpa
