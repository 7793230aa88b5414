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

#include "cpa/tlbo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace cpa {
namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
class UnitRandom {
 public:
  explicit UnitRandom(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(next() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 engine_;
};

class Evaluator {
 public:
  explicit Evaluator(const Objective& f) : f_(f) {}

  double operator()(std::span<const double> x) {
    ++count_;
    const double v = f_(x);
    if (std::isnan(v)) {
      ++nan_count_;
      return std::numeric_limits<double>::infinity();
    }
    return v;
  }

  std::size_t count() const { return count_; }
  std::size_t nan_count() const { return nan_count_; }

 private:
  const Objective& f_;
  std::size_t count_ = 0;
  std::size_t nan_count_ = 0;
};

}  // namespace

TlboConfig TlboConfig::with_box(std::size_t dims, double lo, double hi) {
  TlboConfig cfg;
  cfg.lower.assign(dims, lo);
  cfg.upper.assign(dims, hi);
  return cfg;
}

void TlboConfig::validate() const {
  if (population < 2) throw std::invalid_argument("population must be >= 2");
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("bounds must be non-empty and equally sized");
  }
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(lower[j] < upper[j])) {
      throw std::invalid_argument("lower bound must be below upper bound");
    }
  }
  if (!(termination_tol > 0.0)) {
    throw std::invalid_argument("termination_tol must be > 0");
  }
  if (termination_window < 1) {
    throw std::invalid_argument("termination_window must be >= 1");
  }
}

std::size_t Population::best() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < fitness.size(); ++i)
    if (fitness[i] < fitness[best]) best = i;
  return best;
}

OptResult minimize(const Objective& objective, const TlboConfig& cfg,
                   const PhaseObserver& observer) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t np = cfg.population;
  const std::size_t dims = cfg.dimensions();

  UnitRandom rng(cfg.seed);
  Evaluator evaluate(objective);

  const auto clamp = [&](std::span<double> x) {
    for (std::size_t j = 0; j < dims; ++j)
      x[j] = std::clamp(x[j], cfg.lower[j], cfg.upper[j]);
  };

  Population pop{dims, std::vector<double>(np * dims), std::vector<double>(np)};
  for (std::size_t i = 0; i < np; ++i) {
    auto x = pop.learner(i);
    for (std::size_t j = 0; j < dims; ++j)
      x[j] = cfg.lower[j] + rng.next() * (cfg.upper[j] - cfg.lower[j]);
    pop.fitness[i] = evaluate(x);
  }

  OptResult result;
  result.fitness_history.push_back(pop.fitness[pop.best()]);

  std::vector<double> candidates(np * dims);
  std::vector<double> mean(dims);

  const auto accept = [&](Phase phase) {
    for (std::size_t i = 0; i < np; ++i) {
      std::span<const double> cand(candidates.data() + i * dims, dims);
      const double f = evaluate(cand);
      if (f < pop.fitness[i]) {
        std::copy(cand.begin(), cand.end(), pop.learner(i).begin());
        pop.fitness[i] = f;
      }
    }
    ++result.iterations;
    result.fitness_history.push_back(pop.fitness[pop.best()]);
    if (observer) observer(phase, pop);
  };

  const auto window_closed = [&] {
    const std::size_t g = result.iterations;
    if (g < cfg.termination_window) return false;
    const auto& h = result.fitness_history;
    return h[g - cfg.termination_window] - h[g] < cfg.termination_tol;
  };

  while (result.iterations + 2 <= cfg.max_iterations) {
    if (window_closed()) {
      result.converged = true;
      break;
    }

    // Teacher phase: move every learner toward the teacher and away from the
    // (teaching-factor scaled) class mean. Teacher and mean are taken from the
    // population as it stood before the phase.
    const std::size_t teacher = pop.best();
    std::fill(mean.begin(), mean.end(), 0.0);
    for (std::size_t i = 0; i < np; ++i) {
      const auto x = pop.learner(i);
      for (std::size_t j = 0; j < dims; ++j) mean[j] += x[j];
    }
    for (double& m : mean) m /= static_cast<double>(np);
    const auto t = pop.learner(teacher);
    for (std::size_t i = 0; i < np; ++i) {
      const double tf = std::round(1.0 + rng.next());
      double r = rng.next();
      const auto x = pop.learner(i);
      std::span<double> cand(candidates.data() + i * dims, dims);
      for (std::size_t j = 0; j < dims; ++j) {
        if (cfg.per_dimension_rand && j > 0) r = rng.next();
        cand[j] = x[j] + r * (t[j] - tf * mean[j]);
      }
      clamp(cand);
    }
    accept(Phase::teacher);

    // Learner phase: pairwise moves against a random distinct partner.
    for (std::size_t m = 0; m < np; ++m) {
      std::size_t l = rng.index(np);
      while (l == m) l = rng.index(np);
      double r = rng.next();
      const auto xm = pop.learner(m);
      const auto xl = pop.learner(l);
      const bool better = pop.fitness[m] < pop.fitness[l];
      std::span<double> cand(candidates.data() + m * dims, dims);
      for (std::size_t j = 0; j < dims; ++j) {
        if (cfg.per_dimension_rand && j > 0) r = rng.next();
        cand[j] =
            better ? xm[j] + r * (xm[j] - xl[j]) : xm[j] + r * (xl[j] - xm[j]);
      }
      clamp(cand);
    }
    accept(Phase::learner);
  }

  const std::size_t best = pop.best();
  const auto bx = pop.learner(best);
  result.best_point.assign(bx.begin(), bx.end());
  result.best_fitness = pop.fitness[best];
  result.evaluations = evaluate.count();
  result.nan_evaluations = evaluate.nan_count();
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace cpa
