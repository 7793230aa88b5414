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

#include "cpa/cascade.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpa {
namespace {

std::vector<double> strictly_lower(ImpulseSeq s) {
  s.coeffs.front() = 0.0;
  return std::move(s.coeffs);
}

std::vector<double> delayed_numerator(const TransferFunction& tf) {
  std::vector<double> out(static_cast<std::size_t>(tf.delay()), 0.0);
  out.insert(out.end(), tf.numerator().begin(), tf.numerator().end());
  return out;
}

}  // namespace

CascadeParams CascadeParams::from_span(std::span<const double> k) {
  if (k.size() != 3) {
    throw std::invalid_argument("cascade parameter vector must have 3 entries");
  }
  return {k[0], k[1], k[2]};
}

CascadeProblem CascadeProblem::make(TransferFunction outer,
                                    TransferFunction inner,
                                    TransferFunction outer_disturbance,
                                    TransferFunction inner_disturbance,
                                    double outer_noise_variance,
                                    double inner_noise_variance,
                                    int p_multiplier) {
  if (p_multiplier < 1) {
    throw std::invalid_argument("p_multiplier must be >= 1");
  }
  const int p = p_multiplier * (outer.delay() + inner.delay());
  CascadeProblem problem{std::move(outer),
                         std::move(inner),
                         std::move(outer_disturbance),
                         std::move(inner_disturbance),
                         outer_noise_variance,
                         inner_noise_variance,
                         p};
  problem.validate();
  return problem;
}

void CascadeProblem::validate() const {
  if (outer.delay() < 1 || inner.delay() < 1) {
    throw std::invalid_argument(
        "outer and inner dead times must both be at least one sample");
  }
  const int d = outer.delay() + inner.delay();
  if (truncation < d) {
    throw std::invalid_argument(
        "truncation p=" + std::to_string(truncation) +
        " is shorter than d1 + d2 = " + std::to_string(d));
  }
  for (double v : {outer_noise_variance, inner_noise_variance}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("noise variances must be finite and >= 0");
    }
  }
}

CascadeObjective::CascadeObjective(const CascadeProblem& problem)
    : sigma1_(std::sqrt(problem.outer_noise_variance)),
      sigma2_(std::sqrt(problem.inner_noise_variance)),
      count_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  problem.validate();
  const int n = problem.truncation - 1;
  outer_ = strictly_lower(impulse_response(problem.outer, n));
  inner_ = strictly_lower(impulse_response(problem.inner, n));
  inner_step_ = strictly_lower(step_response(problem.inner, n));
  outer_dist_ = impulse_response(problem.outer_disturbance, n).coeffs;
  inner_dist_ = impulse_response(problem.inner_disturbance, n).coeffs;
}

void CascadeObjective::impulse(const CascadeParams& k, std::span<double> phi1,
                               std::span<double> phi2) const {
  const std::size_t n = outer_.size();

  // A = I + k6 I_m2
  std::vector<double> a(n);
  a[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) a[i] = k.k6 * inner_[i];

  // A^-1 S2, and A^-1 n2 pushed through I_m1.
  std::vector<double> a_inv_s2(n);
  kernel::solve_unit_lower(a, inner_step_, a_inv_s2);
  std::vector<double> a_inv_n2(n);
  kernel::solve_unit_lower(a, inner_dist_, a_inv_n2);

  // W = k6 I_m1 A^-1 (k4 I + k5 F) S2
  std::vector<double> pi_s2(n);
  pi_s2[0] = k.k4 * a_inv_s2[0];
  for (std::size_t i = 1; i < n; ++i)
    pi_s2[i] = k.k4 * a_inv_s2[i] + k.k5 * a_inv_s2[i - 1];
  std::vector<double> w(n);
  kernel::convolve(outer_, pi_s2, w);
  for (double& c : w) c *= k.k6;
  w[0] += 1.0;  // I + W; w[0] was zero because I_m1 is strictly lower

  std::vector<double> rhs2(n);
  kernel::convolve(outer_, a_inv_n2, rhs2);

  kernel::solve_unit_lower(w, outer_dist_, phi1);
  kernel::solve_unit_lower(w, rhs2, phi2);
}

double CascadeObjective::operator()(std::span<const double> k) const {
  count_->fetch_add(1, std::memory_order_relaxed);
  const std::size_t n = length();
  std::vector<double> phi1(n), phi2(n);
  impulse(CascadeParams::from_span(k), phi1, phi2);
  return kernel::dot(phi1, phi1) * sigma1_ * sigma1_ +
         kernel::dot(phi2, phi2) * sigma2_ * sigma2_ +
         2.0 * kernel::dot(phi1, phi2) * sigma1_ * sigma2_;
}

CascadeObjective cascade_objective(const CascadeProblem& problem) {
  return CascadeObjective(problem);
}

CascadeImpulse cascade_impulse(const CascadeProblem& problem,
                               const CascadeParams& k) {
  const CascadeObjective objective(problem);
  const std::size_t n = objective.length();
  CascadeImpulse out{{std::vector<double>(n), SeriesKind::impulse},
                     {std::vector<double>(n), SeriesKind::impulse}};
  objective.impulse(k, out.outer_shock.coeffs, out.inner_shock.coeffs);
  return out;
}

double cascade_variance(const ImpulseSeq& phi1, const ImpulseSeq& phi2,
                        double sigma1, double sigma2) {
  if (sigma1 < 0.0 || sigma2 < 0.0) {
    throw std::invalid_argument("shock standard deviations must be >= 0");
  }
  return series_dot(phi1, phi1) * sigma1 * sigma1 +
         series_dot(phi2, phi2) * sigma2 * sigma2 +
         2.0 * series_dot(phi1, phi2) * sigma1 * sigma2;
}

double cascade_variance_independent(const ImpulseSeq& phi1,
                                    const ImpulseSeq& phi2, double sigma1,
                                    double sigma2) {
  if (sigma1 < 0.0 || sigma2 < 0.0) {
    throw std::invalid_argument("shock standard deviations must be >= 0");
  }
  return series_dot(phi1, phi1) * sigma1 * sigma1 +
         series_dot(phi2, phi2) * sigma2 * sigma2;
}

std::vector<double> cascade_characteristic(const CascadeProblem& problem,
                                           const CascadeParams& k) {
  const std::vector<double> integrator{1.0, -1.0};
  std::vector<double> b2 = delayed_numerator(problem.inner);
  std::vector<double> k6b2 = b2;
  for (double& c : k6b2) c *= k.k6;
  const auto inner_loop = poly_add(problem.inner.denominator(), k6b2);
  const auto lhs =
      poly_mul(poly_mul(integrator, problem.outer.denominator()), inner_loop);
  const std::vector<double> pi{k.k4 * k.k6, k.k5 * k.k6};
  const auto rhs = poly_mul(poly_mul(pi, delayed_numerator(problem.outer)), b2);
  return poly_add(lhs, rhs);
}

bool is_stabilizing(const CascadeProblem& problem, const CascadeParams& k) {
  return is_schur_stable(cascade_characteristic(problem, k));
}

}  // namespace cpa
