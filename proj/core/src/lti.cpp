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

#include "cpa/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cpa {
namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  if (v.empty()) {
    throw std::invalid_argument(std::string(what) + " must not be empty");
  }
  for (double c : v) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument(std::string(what) +
                                  " contains a non-finite coefficient");
    }
  }
}

void require_same_length(const ImpulseSeq& a, const ImpulseSeq& b,
                         const char* op) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(op) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

}  // namespace

TransferFunction::TransferFunction(std::vector<double> numerator,
                                   std::vector<double> denominator, int delay)
    : num_(std::move(numerator)), den_(std::move(denominator)), delay_(delay) {
  require_finite(num_, "numerator");
  require_finite(den_, "denominator");
  if (delay_ < 0) {
    throw std::invalid_argument("delay must be non-negative");
  }
  const double a0 = den_.front();
  if (a0 == 0.0) {
    throw std::invalid_argument("leading denominator coefficient is zero");
  }
  if (a0 != 1.0) {
    for (double& c : num_) c /= a0;
    for (double& c : den_) c /= a0;
    den_.front() = 1.0;
  }
}

TransferFunction TransferFunction::gain(double k) {
  return TransferFunction({k}, {1.0}, 0);
}

TransferFunction TransferFunction::with_delay(int delay) const {
  return TransferFunction(num_, den_, delay);
}

ImpulseSeq impulse_response(const TransferFunction& tf, int n) {
  if (n < 0) {
    throw std::invalid_argument("impulse_response: n must be >= 0");
  }
  const auto& b = tf.numerator();
  const auto& a = tf.denominator();
  const int d = tf.delay();
  std::vector<double> g(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const int bi = k - d;
    double acc = (bi >= 0 && bi < static_cast<int>(b.size())) ? b[bi] : 0.0;
    const int na = std::min<int>(static_cast<int>(a.size()) - 1, k);
    for (int i = 1; i <= na; ++i) acc -= a[i] * g[k - i];
    g[k] = acc;
  }
  return {std::move(g), SeriesKind::impulse};
}

ImpulseSeq step_response(const TransferFunction& tf, int n) {
  ImpulseSeq s = impulse_response(tf, n);
  double run = 0.0;
  for (double& c : s.coeffs) {
    run += c;
    c = run;
  }
  s.kind = SeriesKind::step;
  return s;
}

namespace kernel {

void convolve(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= k; ++i) acc += a[i] * b[k - i];
    out[k] = acc;
  }
}

void solve_unit_lower(std::span<const double> denom,
                      std::span<const double> rhs, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < n; ++k) {
    double acc = rhs[k];
    for (std::size_t i = 1; i <= k; ++i) acc -= denom[i] * out[k - i];
    out[k] = acc;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace kernel

ImpulseSeq series_mul(const ImpulseSeq& a, const ImpulseSeq& b) {
  require_same_length(a, b, "series_mul");
  ImpulseSeq c{std::vector<double>(a.size()), SeriesKind::impulse};
  kernel::convolve(a.coeffs, b.coeffs, c.coeffs);
  return c;
}

ImpulseSeq series_solve(const ImpulseSeq& denom, const ImpulseSeq& rhs) {
  require_same_length(denom, rhs, "series_solve");
  if (denom.size() > 0 && denom[0] != 1.0) {
    throw std::invalid_argument(
        "series_solve: leading coefficient must be 1 (unit lower triangular)");
  }
  ImpulseSeq x{std::vector<double>(rhs.size()), SeriesKind::impulse};
  kernel::solve_unit_lower(denom.coeffs, rhs.coeffs, x.coeffs);
  return x;
}

ImpulseSeq series_shift(const ImpulseSeq& a, std::size_t steps) {
  ImpulseSeq out{std::vector<double>(a.size(), 0.0), a.kind};
  for (std::size_t k = steps; k < a.size(); ++k) out.coeffs[k] = a[k - steps];
  return out;
}

double series_dot(const ImpulseSeq& a, const ImpulseSeq& b) {
  require_same_length(a, b, "series_dot");
  return kernel::dot(a.coeffs, b.coeffs);
}

std::vector<double> poly_mul(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> poly_add(std::span<const double> a,
                             std::span<const double> b) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

bool is_schur_stable(std::span<const double> poly) {
  std::vector<double> p(poly.begin(), poly.end());
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  if (p.empty() || p.front() == 0.0) return false;
  while (p.size() > 1) {
    const std::size_t n = p.size() - 1;
    const double k = p[n] / p[0];
    if (!std::isfinite(k) || std::abs(k) >= 1.0) return false;
    std::vector<double> next(n);
    const double scale = 1.0 - k * k;
    for (std::size_t i = 0; i < n; ++i) next[i] = (p[i] - k * p[n - i]) / scale;
    p = std::move(next);
  }
  return true;
}

double spectral_radius(std::span<const double> poly) {
  std::vector<double> p(poly.begin(), poly.end());
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  if (p.empty() || p.front() == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  if (p.size() == 1) return 0.0;
  // Roots of a(z) scaled by 1/r are those of sum a_i r^-i z^(n-i); the
  // scaled polynomial is Schur stable exactly when every root is below r.
  std::vector<double> scaled(p.size());
  const auto inside = [&](double r) {
    double f = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i, f /= r) scaled[i] = p[i] * f;
    return is_schur_stable(scaled);
  };
  double bound = 0.0;  // Cauchy bound on the root moduli
  for (std::size_t i = 1; i < p.size(); ++i)
    bound = std::max(bound, std::abs(p[i] / p[0]));
  double lo = 0.0, hi = 1.0 + bound;
  while (hi - lo > 1e-12 * std::max(hi, 1e-3)) {
    const double mid = 0.5 * (lo + hi);
    if (mid > 0.0 && inside(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

DifferenceEquation::DifferenceEquation(const TransferFunction& tf)
    : b_(tf.numerator()), a_(tf.denominator()), delay_(tf.delay()) {
  inputs_.assign(static_cast<std::size_t>(delay_) + b_.size(), 0.0);
  outputs_.assign(a_.size() - 1, 0.0);
}

double DifferenceEquation::step(double input) {
  std::copy_backward(inputs_.begin(), inputs_.end() - 1, inputs_.end());
  inputs_.front() = input;
  double y = 0.0;
  for (std::size_t i = 0; i < b_.size(); ++i) y += b_[i] * inputs_[delay_ + i];
  for (std::size_t i = 1; i < a_.size(); ++i) y -= a_[i] * outputs_[i - 1];
  if (!outputs_.empty()) {
    std::copy_backward(outputs_.begin(), outputs_.end() - 1, outputs_.end());
    outputs_.front() = y;
  }
  return y;
}

void DifferenceEquation::reset() {
  std::fill(inputs_.begin(), inputs_.end(), 0.0);
  std::fill(outputs_.begin(), outputs_.end(), 0.0);
}

}  // namespace cpa
