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
#include <span>
#include <vector>

namespace cpa {

/// Discrete-time rational transfer function in the backward-shift operator:
///
///   G(q^-1) = q^-d * (b0 + b1 q^-1 + ... + bm q^-m) / (1 + a1 q^-1 + ... + ar
///   q^-r)
///
/// Coefficients are listed in ascending powers of q^-1. The dead time d is
/// kept separate from the numerator. The denominator is normalised on
/// construction so that a0 == 1 exactly.
class TransferFunction {
 public:
  TransferFunction(std::vector<double> numerator,
                   std::vector<double> denominator, int delay = 0);

  /// Static gain with no dynamics.
  static TransferFunction gain(double k);

  const std::vector<double>& numerator() const noexcept { return num_; }
  const std::vector<double>& denominator() const noexcept { return den_; }
  int delay() const noexcept { return delay_; }

  /// The same dynamics with the dead time replaced.
  TransferFunction with_delay(int delay) const;

  bool operator==(const TransferFunction&) const = default;

 private:
  std::vector<double> num_;
  std::vector<double> den_;
  int delay_ = 0;
};

enum class SeriesKind { impulse, step };

/// Finite prefix of an impulse (or step) response. Also serves as the first
/// column of a lower-triangular Toeplitz operator: products of such operators
/// are truncated convolutions and inverses are forward substitutions.
struct ImpulseSeq {
  std::vector<double> coeffs;
  SeriesKind kind = SeriesKind::impulse;

  std::size_t size() const noexcept { return coeffs.size(); }
  double operator[](std::size_t i) const { return coeffs[i]; }

  bool operator==(const ImpulseSeq&) const = default;
};

/// Coefficients g(0..n) of the impulse response, n + 1 values.
ImpulseSeq impulse_response(const TransferFunction& tf, int n);

/// Running sum of the impulse response, n + 1 values.
ImpulseSeq step_response(const TransferFunction& tf, int n);

/// Truncated convolution c(k) = sum_{i<=k} a(i) b(k-i).
ImpulseSeq series_mul(const ImpulseSeq& a, const ImpulseSeq& b);

/// Solves series_mul(denom, x) == rhs by forward substitution. denom must
/// have a unit leading coefficient.
ImpulseSeq series_solve(const ImpulseSeq& denom, const ImpulseSeq& rhs);

/// Applies the forward-shift matrix `steps` times (prepends zeros, keeps
/// length).
ImpulseSeq series_shift(const ImpulseSeq& a, std::size_t steps = 1);

double series_dot(const ImpulseSeq& a, const ImpulseSeq& b);

// Span kernels behind the ImpulseSeq operations. `out` must be pre-sized to
// the common length; for solve it must not alias `rhs`.
namespace kernel {
void convolve(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
void solve_unit_lower(std::span<const double> denom,
                      std::span<const double> rhs, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace kernel

/// Full polynomial product in q^-1.
std::vector<double> poly_mul(std::span<const double> a,
                             std::span<const double> b);

/// Coefficient-wise sum, shorter operand zero-padded.
std::vector<double> poly_add(std::span<const double> a,
                             std::span<const double> b);

/// True when every root of a0 z^n + a1 z^(n-1) + ... + an lies strictly inside
/// the unit circle (Schur-Cohn recursion on the reflection coefficients).
bool is_schur_stable(std::span<const double> poly);

/// Largest root modulus of the same polynomial, to about 1e-12 relative.
/// Infinite when a0 == 0.
double spectral_radius(std::span<const double> poly);

/// Streaming realisation of a transfer function as a difference equation.
/// Each call to step() consumes x(t) and returns y(t).
class DifferenceEquation {
 public:
  explicit DifferenceEquation(const TransferFunction& tf);

  double step(double input);
  void reset();

 private:
  std::vector<double> b_;
  std::vector<double> a_;
  std::vector<double> inputs_;   // x(t), x(t-1), ..., x(t-d-m)
  std::vector<double> outputs_;  // y(t-1), ..., y(t-r)
  int delay_ = 0;
};

}  // namespace cpa
