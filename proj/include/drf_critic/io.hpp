// Copyright 2026 The DRF Critic Authors
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
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "drf_critic/scenario.hpp"
#include "drf_critic/scenario_gen.hpp"
#include "drf_critic/simulator.hpp"

namespace drf::io {

using Json = nlohmann::ordered_json;

/// Rounds to 9 significant digits so reports print identically on every platform.
double round9(double v);

/// Scenario file format version 1. Data values keep full round-trip precision.
Json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& j);
/// Throws DataError naming the file on any problem.
Scenario read_scenario(const std::filesystem::path& path);
void write_scenario(const std::filesystem::path& path, const Scenario& scenario);
/// All *.json files of a directory, sorted by file name.
std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir);

Json metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const Json& j);

/// One line per step; a trailing {"error": ...} line marks an aborted rollout.
void write_rollout_jsonl(std::ostream& out, const RolloutLog& log);

Json search_result_to_json(const SearchResult& result);
Json calibration_to_json(const CalibrationResult& result);

Json driver_params_to_json(const DriverParams& params);
/// All ten parameter names are mandatory; `v_max` is optional.
DriverParams driver_params_from_json(const Json& j);
StyleLibrary read_style_library(const std::filesystem::path& path);

/// `name -> [lo, hi]`; parameters not listed stay frozen at `initial`.
Bounds bounds_from_json(const Json& j, const DriverParams& initial);

/// JSON, or a small TOML subset (tables, string/number/boolean values, flat arrays),
/// chosen by file extension.
Json read_config(const std::filesystem::path& path);
Json parse_toml_subset(const std::string& text);

/// Lines carry n, d, horizon, action (row-major) and a step index under `step` or
/// `t`; lines whose `scenario_id` differs from `scenario_id` are ignored.
std::unique_ptr<ExternalActions> read_external_actions(const std::filesystem::path& path,
                                                       const std::string& scenario_id);

void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace drf::io
