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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cpa {

using Objective = std::function<double(std::span<const double>)>;

/// Settings of a teaching-learning-based optimisation run.
///
/// `max_iterations` and `termination_window` count phases: one teacher phase
/// and one learner phase each advance the iteration counter by one.
struct TlboConfig {
  std::size_t population = 20;
  std::vector<double> lower{-50.0, -50.0, -50.0};
  std::vector<double> upper{50.0, 50.0, 50.0};
  std::size_t termination_window = 20;
  double termination_tol = 1e-7;
  std::size_t max_iterations = 2000;
  std::uint64_t seed = 0;
  /// Draw r_i / r_m per learner and dimension (true) or once per learner.
  bool per_dimension_rand = false;

  std::size_t dimensions() const { return lower.size(); }

  /// Same box [lo, hi] on every one of `dims` dimensions.
  static TlboConfig with_box(std::size_t dims, double lo, double hi);

  void validate() const;
};

struct OptResult {
  std::vector<double> best_point;
  double best_fitness = 0.0;
  std::size_t iterations = 0;  ///< phases executed
  std::size_t evaluations = 0;
  std::size_t nan_evaluations = 0;
  bool converged = false;  ///< stopped by the window criterion
  std::vector<double>
      fitness_history;  ///< teacher fitness, initial + per phase
  double elapsed_seconds = 0.0;
};

/// Learner positions (row-major, population x dimensions) and their fitness.
struct Population {
  std::size_t dimensions = 0;
  std::vector<double> positions;
  std::vector<double> fitness;

  std::size_t size() const { return fitness.size(); }
  std::span<const double> learner(std::size_t i) const {
    return {positions.data() + i * dimensions, dimensions};
  }
  std::span<double> learner(std::size_t i) {
    return {positions.data() + i * dimensions, dimensions};
  }
  /// Index of the best learner; ties go to the lowest index.
  std::size_t best() const;
};

enum class Phase { teacher, learner };

/// Called after every phase with the accepted population.
using PhaseObserver = std::function<void(Phase, const Population&)>;

/// Minimises `objective` over the configured box. NaN fitness is treated as
/// worse than any number and counted in OptResult::nan_evaluations.
/// Deterministic for a given config (including seed).
OptResult minimize(const Objective& objective, const TlboConfig& cfg,
                   const PhaseObserver& observer = {});

}  // namespace cpa
