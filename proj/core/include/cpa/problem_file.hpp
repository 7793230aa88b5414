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
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpa/monte_carlo.hpp"
#include "cpa/tlbo.hpp"
#include "cpa/tuning.hpp"

namespace cpa {

/// Malformed problem file. `field` is a dotted path such as "process.den";
/// `line` and `column` are set for syntax errors.
class ProblemFileError : public std::runtime_error {
 public:
  ProblemFileError(const std::string& what, std::string field,
                   std::optional<std::size_t> line = std::nullopt,
                   std::optional<std::size_t> column = std::nullopt)
      : std::runtime_error(what),
        field_(std::move(field)),
        line_(line),
        column_(column) {}

  const std::string& field() const { return field_; }
  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

struct TuningSettings {
  double rho = 0.0;
  std::vector<double> rho_sweep;  ///< overrides rho when non-empty
  int horizon = 0;                ///< 0 picks 200 (single) or 300 (cascade)
  double sample_time = 1.0;
  double setpoint = 1.0;
  std::size_t restarts = 3;
  std::vector<Stage> multistage;
};

/// A parsed problem document.
///
/// Coefficients are listed in ascending powers of q^-1 and the dead time is
/// a separate integer. `num` and `den` accept a flat coefficient list or a
/// list of factors that are multiplied out:
///
///   {"num": [0.2], "den": [1, -0.8], "delay": 5}
///   {"num": [1], "den": [[1, -1], [1, 0.4]]}
struct ProblemFile {
  std::string name;
  LoopModel loop;
  bool noise_defaulted = false;  ///< no `noise` section; variances are 1
  int p_multiplier = 8;
  TuningSettings tuning;
  TlboConfig tlbo;
  McConfig mc;

  bool is_cascade() const {
    return std::holds_alternative<CascadeProblem>(loop);
  }
  /// Weights to tune for: the sweep, or the single rho.
  std::vector<double> weights() const;
  TuningProblem tuning_problem(double rho) const;
};

/// Parses a JSON problem document. Unknown keys are rejected so that typos do
/// not silently fall back to defaults.
ProblemFile parse_problem(const std::string& text);

/// Throws ProblemFileError when the file cannot be read or parsed.
ProblemFile load_problem(const std::filesystem::path& path);

/// The fully resolved document, defaults materialised.
nlohmann::ordered_json to_json(const ProblemFile& file);

}  // namespace cpa
