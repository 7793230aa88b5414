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

#include <filesystem>
#include <nlohmann/json.hpp>
#include <span>
#include <string>

#include "cpa/assessment.hpp"
#include "cpa/bench_suite.hpp"
#include "cpa/monte_carlo.hpp"
#include "cpa/tlbo.hpp"
#include "cpa/tuning.hpp"

namespace cpa {

using ojson = nlohmann::ordered_json;

ojson to_json(const TransferFunction& tf);
ojson to_json(const LoopModel& loop);
ojson to_json(const TlboConfig& cfg);
ojson to_json(const McConfig& cfg);
ojson to_json(const ValidationBlock& v);
/// Summary criteria only; the series go to step_response_csv.
ojson to_json(const StepResponseRecord& rec);
ojson to_json(const AssessmentReport& report);
ojson to_json(const TuningReport& report);
ojson to_json(const SuiteReport& report);

/// Header plus one row in the layout of the reference results table.
std::string assessment_csv(const AssessmentReport& report);
/// One row per seeded run.
std::string runs_csv(const AssessmentReport& report);
/// weight, params, variance, IAE, overshoot, settling time per sweep point.
std::string tuning_csv(std::span<const TuningReport> reports);
/// time, setpoint, output, error.
std::string step_response_csv(const StepResponseRecord& rec);
/// phase, teacher fitness.
std::string fitness_history_csv(const OptResult& result);

/// Writes `content` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace cpa
