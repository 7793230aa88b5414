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
#include <optional>
#include <stdexcept>
#include <string>

#include "cpa/cascade.hpp"
#include "cpa/single_loop.hpp"

namespace cpa {

/// How the two cascade shocks relate. fully_correlated drives both from one
/// standard normal draw, a2 = (sigma2 / sigma1) * a1.
enum class ShockCorrelation { independent, fully_correlated };

const char* to_string(ShockCorrelation mode);
ShockCorrelation shock_correlation_from_string(const std::string& name);

struct McConfig {
  std::size_t samples = 1'000'000;
  std::optional<std::size_t> burn_in;  ///< defaults to samples / 10
  std::uint64_t seed = 0;
  ShockCorrelation mode = ShockCorrelation::fully_correlated;
  std::size_t batches = 100;  ///< batch means for the standard error

  std::size_t resolved_burn_in() const {
    return burn_in.value_or(samples / 10);
  }
  void validate() const;
};

struct McEstimate {
  double variance = 0.0;
  double standard_error = 0.0;
  std::size_t samples_used = 0;
};

/// Thrown when the simulated loop blows up or is not stabilising.
class UnstableLoopError : public std::runtime_error {
 public:
  UnstableLoopError(const std::string& what, std::optional<std::size_t> sample)
      : std::runtime_error(what), sample_(sample) {}
  std::optional<std::size_t> divergence_sample() const { return sample_; }

 private:
  std::optional<std::size_t> sample_;
};

/// Empirical variance of y under Gaussian white noise of variance sigma_a^2.
McEstimate mc_variance_single(const SingleLoopProblem& problem,
                              const ReducedPidParams& k, const McConfig& cfg);

/// Empirical variance of the outer output y1.
McEstimate mc_variance_cascade(const CascadeProblem& problem,
                               const CascadeParams& k, const McConfig& cfg);

/// Analytic value against a simulated estimate.
struct ValidationBlock {
  std::string mode;  ///< "single", "fully_correlated" or "independent"
  std::size_t samples = 0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double analytic = 0.0;
  double relative_error = 0.0;
};

ValidationBlock validate_single(const SingleLoopProblem& problem,
                                const ReducedPidParams& k, const McConfig& cfg);

/// The analytic side includes the cross term in fully_correlated mode and
/// omits it in independent mode.
ValidationBlock validate_cascade(const CascadeProblem& problem,
                                 const CascadeParams& k, const McConfig& cfg);

}  // namespace cpa
