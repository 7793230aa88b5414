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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpa/parallel.hpp"

namespace cpa {
namespace {

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

template <class Objective>
AssessmentReport run_assessment(const Objective& objective,
                                const TlboConfig& cfg, std::size_t runs,
                                std::size_t jobs) {
  cfg.validate();
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (cfg.dimensions() != 3) {
    throw std::invalid_argument("assessment needs a 3-dimensional search box");
  }
  AssessmentReport report;
  report.config = cfg;
  report.runs.resize(runs);
  parallel_for(runs, jobs, [&](std::size_t i) {
    TlboConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(cfg.seed, i);
    const OptResult res = minimize(objective, run_cfg);
    if (!std::isfinite(res.best_fitness)) {
      throw std::runtime_error(fmt::format(
          "run {} (seed {}) ended without a finite variance", i, run_cfg.seed));
    }
    RunRecord& r = report.runs[i];
    r.seed = run_cfg.seed;
    r.mov = res.best_fitness;
    std::copy_n(res.best_point.begin(), 3, r.params.begin());
    r.iterations = res.iterations;
    r.evaluations = res.evaluations;
    r.converged = res.converged;
    r.seconds = res.elapsed_seconds;
  });

  std::vector<double> movs, secs;
  for (const auto& r : report.runs) {
    movs.push_back(r.mov);
    secs.push_back(r.seconds);
  }
  report.mov_mean = mean_of(movs);
  report.mov_std = sample_std(movs, report.mov_mean);
  report.mov_worst = *std::max_element(movs.begin(), movs.end());
  const auto best = std::min_element(movs.begin(), movs.end()) - movs.begin();
  report.mov_best = movs[best];
  report.best_params = report.runs[best].params;
  report.mean_seconds = mean_of(secs);
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<double> col;
    for (const auto& r : report.runs) col.push_back(r.params[j]);
    report.params_mean[j] = mean_of(col);
    report.params_std[j] = sample_std(col, report.params_mean[j]);
  }
  return report;
}

}  // namespace

AssessmentReport assess_single(const SingleLoopProblem& problem,
                               const TlboConfig& cfg, std::size_t runs,
                               std::size_t jobs) {
  problem.validate();
  AssessmentReport report =
      run_assessment(cpa_objective(problem), cfg, runs, jobs);
  report.loop = "single";
  report.truncation = problem.truncation;
  report.mv = mv_benchmark(problem);
  if (report.mov_best > 0.0) report.eta = *report.mv / report.mov_best;
  report.assumptions.push_back(fmt::format(
      "variance truncated to p = {} closed-loop impulse coefficients",
      problem.truncation));
  return report;
}

AssessmentReport assess_cascade(const CascadeProblem& problem,
                                const TlboConfig& cfg, std::size_t runs,
                                std::size_t jobs) {
  problem.validate();
  AssessmentReport report =
      run_assessment(cascade_objective(problem), cfg, runs, jobs);
  report.loop = "cascade";
  report.truncation = problem.truncation;
  report.assumptions.push_back(fmt::format(
      "variance truncated to p = {} closed-loop impulse coefficients",
      problem.truncation));
  report.assumptions.push_back(
      "variance includes the cross term 2*phi1'phi2*sigma1*sigma2, which "
      "holds for fully correlated outer and inner shocks");
  return report;
}

}  // namespace cpa
