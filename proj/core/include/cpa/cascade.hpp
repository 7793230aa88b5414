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
#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cpa/lti.hpp"

namespace cpa {

/// PI outer controller (k4 + k5 q^-1) / (1 - q^-1) and P inner controller k6.
struct CascadeParams {
  double k4 = 0.0;
  double k5 = 0.0;
  double k6 = 0.0;

  static CascadeParams from_span(std::span<const double> k);
  std::array<double, 3> as_array() const { return {k4, k5, k6}; }
};

struct CascadeProblem {
  TransferFunction outer;              // G1
  TransferFunction inner;              // G2
  TransferFunction outer_disturbance;  // Gd1
  TransferFunction inner_disturbance;  // Gd2
  double outer_noise_variance = 1.0;
  double inner_noise_variance = 1.0;
  int truncation = 0;

  /// Problem with truncation p = p_multiplier * (d1 + d2).
  static CascadeProblem make(TransferFunction outer, TransferFunction inner,
                             TransferFunction outer_disturbance,
                             TransferFunction inner_disturbance,
                             double outer_noise_variance,
                             double inner_noise_variance, int p_multiplier = 8);

  void validate() const;
};

/// Outer-output responses to unit shocks in a1 (outer_shock, phi1) and
/// a2 (inner_shock, phi2).
struct CascadeImpulse {
  ImpulseSeq outer_shock;
  ImpulseSeq inner_shock;
};

CascadeImpulse cascade_impulse(const CascadeProblem& problem,
                               const CascadeParams& k);

/// phi1'phi1 s1^2 + phi2'phi2 s2^2 + 2 phi1'phi2 s1 s2, with s1, s2 the shock
/// standard deviations. The cross term assumes fully correlated shocks.
double cascade_variance(const ImpulseSeq& phi1, const ImpulseSeq& phi2,
                        double sigma1, double sigma2);

/// Same formula without the cross term (independent shocks).
double cascade_variance_independent(const ImpulseSeq& phi1,
                                    const ImpulseSeq& phi2, double sigma1,
                                    double sigma2);

/// Characteristic polynomial of the two-level loop in q^-1:
///   (1 - q^-1) A1 (A2 + k6 B2 q^-d2) + (k4 + k5 q^-1) k6 B1 B2 q^-(d1+d2)
std::vector<double> cascade_characteristic(const CascadeProblem& problem,
                                           const CascadeParams& k);

bool is_stabilizing(const CascadeProblem& problem, const CascadeParams& k);

class CascadeObjective {
 public:
  explicit CascadeObjective(const CascadeProblem& problem);

  double operator()(std::span<const double> k) const;

  void impulse(const CascadeParams& k, std::span<double> phi1,
               std::span<double> phi2) const;

  std::uint64_t evaluations() const { return count_->load(); }
  std::size_t length() const { return outer_dist_.size(); }

 private:
  std::vector<double> outer_;       // I_m1 first column
  std::vector<double> inner_;       // I_m2 first column
  std::vector<double> inner_step_;  // S2 first column
  std::vector<double> outer_dist_;  // n1
  std::vector<double> inner_dist_;  // n2
  double sigma1_;
  double sigma2_;
  std::shared_ptr<std::atomic<std::uint64_t>> count_;
};

CascadeObjective cascade_objective(const CascadeProblem& problem);

}  // namespace cpa
