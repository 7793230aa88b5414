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
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpa/assessment.hpp"
#include "cpa/tuning.hpp"

namespace cpa {

inline constexpr int kBenchmarkCount = 10;

/// Reference results for one benchmark, stored at printed precision.
struct ReferenceEntry {
  int id = 0;
  double mv = 0.0;
  double bkmov = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double worst = 0.0;
  double seconds = 0.0;
  std::array<double, 3> params_mean{};
  std::array<double, 3> params_std{};
};

/// Benchmark `id` (1..10) with sigma_a^2 = 1 and p = 8d.
/// Throws std::out_of_range for an unknown id.
SingleLoopProblem load_benchmark(int id);

const ReferenceEntry& benchmark_reference(int id);

/// One reference row of a tuning case study.
struct CaseStudyRow {
  double weight = 0.0;
  ControllerParams params{};
  double variance = 0.0;
};

/// "air_single" or "immersion_cascade"; throws std::out_of_range otherwise.
TuningProblem load_case_study(const std::string& name);

const std::vector<CaseStudyRow>& case_study_reference(const std::string& name);

std::vector<std::string> case_study_names();

/// True when `value` equals `printed` after rounding to `decimals` places.
bool matches_printed(double value, double printed, int decimals = 4);

struct BenchmarkResult {
  int id = 0;
  ReferenceEntry reference;
  double mv = 0.0;
  std::optional<AssessmentReport> report;
  std::string error;  ///< non-empty if the run failed

  bool mv_matches = false;
  double mean_rel_delta = 0.0;
  bool mean_matches = false;  ///< within 0.1 % or equal at printed precision
  bool std_ok = false;        ///< std / mean <= 1e-4
  bool within_bkmov = false;  ///< best <= BKMOV * (1 + 1e-3)
  std::array<double, 3> params_rel_delta{};

  /// MOV agreement; the MV column and parameter distance are reported only.
  bool passed() const {
    return error.empty() && mean_matches && std_ok && within_bkmov;
  }
};

struct SuiteReport {
  TlboConfig config;
  std::size_t repetitions = 0;
  std::vector<BenchmarkResult> results;
  double seconds = 0.0;

  bool passed() const;
};

/// Assesses each listed benchmark `repetitions` times. Problems run
/// concurrently on up to `jobs` threads; a failing problem is recorded in its
/// result and does not stop the others.
SuiteReport run_benchmark_suite(const TlboConfig& cfg, std::size_t repetitions,
                                std::span<const int> ids = {},
                                std::size_t jobs = 1);

std::string to_markdown(const SuiteReport& report);
std::string to_csv(const SuiteReport& report);

}  // namespace cpa
