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

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drf_critic/simulator.hpp"

namespace drf {

struct DriverParams {
  DrfParams drf;
  ControllerParams controller;

  friend bool operator==(const DriverParams&, const DriverParams&) = default;
};

enum class Style { Cautious, Aggressive };

struct StyleLibrary {
  DriverParams cautious;
  DriverParams aggressive;

  /// Cautious = identified values; aggressive doubles R_t, raises v_des by 30 %
  /// and halves d_s.
  static StyleLibrary defaults();
  void validate() const;
  const DriverParams& operator[](Style s) const {
    return s == Style::Aggressive ? aggressive : cautious;
  }
};

inline constexpr double kAccidentWeight = 1e6;

/// J = sum over steps and the listed agents of the L1 ego-agent distance, minus
/// accident_weight per collision and off-road event in the log.
double cost_to_go(const RolloutLog& log, const std::vector<std::string>& agents,
                  double accident_weight = kAccidentWeight);

/// Agents the search controls: the scenario's flagged list (first `m`), or the `m`
/// nearest agents at t = 0 when nothing is flagged.
std::vector<std::string> search_agents(const Scenario& scenario, std::optional<std::size_t> m);

/// Bit i of `mask` set means agent i drives aggressively; other agents replay their log.
std::vector<AgentConfig> assignment_configs(const std::vector<std::string>& agents,
                                            std::uint32_t mask, const StyleLibrary& styles);

struct SearchOptions {
  std::optional<std::size_t> agents;  // M; all flagged agents when unset
  std::size_t max_agents{12};
  unsigned workers{1};
  double accident_weight{kAccidentWeight};
  SimOptions sim;
};

struct AssignmentResult {
  std::uint32_t mask{0};
  double cost{0.0};
  MetricsReport metrics;
  long accidents{0};  // collisions + off-road events
};

struct SearchResult {
  std::string scenario_id;
  std::vector<std::string> agents;
  std::vector<AssignmentResult> table;  // indexed by mask
  std::uint32_t best{0};

  const AssignmentResult& best_result() const { return table[best]; }
};

/// Evaluates all 2^M style assignments and returns the one minimising J; ties go
/// to the lowest mask. Results do not depend on the worker count.
SearchResult find_critical(const Scenario& scenario, const EgoPolicy& ego_policy,
                           const StyleLibrary& styles, const SearchOptions& options = {});

/// Runs fn(0..count-1) on up to `workers` threads. The first exception thrown by any
/// task is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Mean Euclidean distance between simulated ego positions and the logged samples.
double ape(const RolloutLog& simulated, const Track& logged);
double ape(const std::vector<Vec2>& simulated, const std::vector<Vec2>& logged);

inline constexpr std::size_t kParameterCount = 10;
/// Report names of the tunable parameters, in vector order.
const std::array<std::string_view, kParameterCount>& parameter_names();
std::array<double, kParameterCount> to_vector(const DriverParams& params);
DriverParams from_vector(const std::array<double, kParameterCount>& values);

struct Bound {
  double lo{0.0};
  double hi{0.0};
  bool frozen() const { return lo == hi; }
};

using Bounds = std::array<Bound, kParameterCount>;

/// Every parameter frozen at its initial value.
Bounds frozen_bounds(const DriverParams& initial);

struct CoordinateDescentOptions {
  int max_sweeps{50};
  double min_improvement{1e-3};
  /// Golden-section search stops once the bracket is this fraction of the range.
  double line_tolerance{1e-4};
};

struct OptimResult {
  std::array<double, kParameterCount> x{};
  double value{0.0};
  std::vector<double> history;  // incumbent value after every accepted move, starting value first
  int sweeps{0};
  int evaluations{0};
};

using Objective = std::function<double(const std::array<double, kParameterCount>&)>;

/// Box-constrained coordinate descent with a golden-section search per free
/// coordinate. A move is accepted only when it strictly lowers the objective.
OptimResult coordinate_descent(const Objective& objective,
                               const std::array<double, kParameterCount>& initial,
                               const Bounds& bounds, const CoordinateDescentOptions& options = {});

struct CalibrationResult {
  DriverParams params;
  double initial_ape{0.0};
  double final_ape{0.0};
  std::vector<double> history;
  int sweeps{0};
  int evaluations{0};
};

/// Mean APE of DRF ego rollouts (agents replay their logs) against the logged ego
/// tracks. Scenarios with a non-finite APE are left out with a warning.
double mean_ape(const std::vector<Scenario>& scenarios, const DriverParams& params,
                const SimOptions& sim = {});

CalibrationResult calibrate(const std::vector<Scenario>& scenarios, const DriverParams& initial,
                            const Bounds& bounds, const CoordinateDescentOptions& options = {},
                            const SimOptions& sim = {});

}  // namespace drf
