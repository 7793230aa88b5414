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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpa/cascade.hpp"
#include "cpa/monte_carlo.hpp"
#include "cpa/single_loop.hpp"
#include "cpa/tlbo.hpp"

namespace cpa {

/// One seeded optimizer run.
struct RunRecord {
  std::uint64_t seed = 0;
  double mov = 0.0;
  std::array<double, 3> params{};
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  double seconds = 0.0;
};

/// Statistics over repeated runs of the minimum output variance search.
struct AssessmentReport {
  std::string loop;  ///< "single" or "cascade"
  int truncation = 0;
  double mov_mean = 0.0;
  double mov_std = 0.0;  ///< sample standard deviation (n - 1)
  double mov_worst = 0.0;
  double mov_best = 0.0;
  std::array<double, 3> best_params{};
  std::array<double, 3> params_mean{};
  std::array<double, 3> params_std{};
  std::optional<double> mv;   ///< single loop only
  std::optional<double> eta;  ///< mv / mov_best
  double mean_seconds = 0.0;
  TlboConfig config;
  std::vector<RunRecord> runs;
  std::vector<std::string> assumptions;
  std::optional<ValidationBlock> validation;
};

/// Runs TLBO `runs` times on the variance objective with seeds derived from
/// cfg.seed, spread over up to `jobs` threads. Throws std::runtime_error if a
/// run ends without a finite variance.
AssessmentReport assess_single(const SingleLoopProblem& problem,
                               const TlboConfig& cfg, std::size_t runs = 30,
                               std::size_t jobs = 1);

AssessmentReport assess_cascade(const CascadeProblem& problem,
                                const TlboConfig& cfg, std::size_t runs = 30,
                                std::size_t jobs = 1);

}  // namespace cpa
