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
#include <string>
#include <vector>

#include "drf_critic/scenario.hpp"
#include "drf_critic/spline.hpp"

namespace drf {

/// Action label layout: n control points of degree d over `horizon` seconds.
struct ActionSpec {
  int n{3};
  int d{2};
  double horizon{0.2};
};

/// Layout: ego speed, ego steering, ego (x, y, theta) at t, t-1, t-2 in the ego
/// frame at t (earlier steps clamp to 0), then (x, y, theta, speed) of the M nearest
/// agents in the same frame, nearest first, zero-padded.
using FeatureVector = std::vector<double>;

inline constexpr std::size_t feature_length(std::size_t m) { return 11 + 4 * m; }

FeatureVector extract_features(const Scenario& scenario, int step, std::size_t m);

struct TrainingPair {
  std::string scenario_id;
  int t{0};
  FeatureVector features;
  spline::CoefficientMatrix action{3};
  ActionSpec spec;
};

/// Spline fitted to the ground-truth ego poses at t, t+1, ... (t + horizon/dt),
/// expressed in the ego frame at t.
spline::CoefficientMatrix fit_action(const Scenario& scenario, int step,
                                     const ActionSpec& spec = {});

/// Pairs for t = K .. T-2 of one scenario.
std::vector<TrainingPair> make_pairs(const Scenario& scenario, int k, std::size_t m,
                                     const ActionSpec& spec = {});

/// One JSON object per line with keys scenario_id, t, features, action (row-major),
/// n, d, horizon. Doubles are written with round-trip precision.
void write_pair(std::ostream& out, const TrainingPair& pair);
TrainingPair parse_pair(const std::string& line);

/// Writes every pair, sorted by scenario id then t, and returns the count. Scenarios
/// that fail validation or are too short for K are skipped with a warning.
std::size_t export_pairs(const std::vector<Scenario>& scenarios, int k, std::size_t m,
                         const std::filesystem::path& output, const ActionSpec& spec = {});

}  // namespace drf
