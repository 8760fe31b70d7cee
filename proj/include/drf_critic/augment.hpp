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

#include <optional>
#include <string>
#include <vector>

#include "drf_critic/scenario_gen.hpp"

namespace drf {

struct AugmentPolicy {
  DriverParams aggressive{StyleLibrary::defaults().aggressive};
  double longitudinal_window{30.0};  // m behind the ego
  double lateral_window{2.0};        // m either side
  double min_closing_speed{0.5};     // m/s
  SimOptions sim;

  void validate() const;
};

inline constexpr const char* kAugmentSuffix = "#aug1";

/// True when some agent is behind the ego (ego frame) inside both windows and
/// closing in faster than the threshold.
bool detect_rear_vehicle(const Scenario& scenario, int step, const AugmentPolicy& policy = {});

/// Re-times the ego along its recorded path with an aggressive DRF rollout when any
/// step has a rear vehicle; nullopt means the scenario is left unchanged.
std::optional<Scenario> augment_scenario(const Scenario& scenario,
                                         const AugmentPolicy& policy = {});

/// Originals followed by the augmented variants; duplicate ids are rejected.
std::vector<Scenario> aggregate(const std::vector<Scenario>& dataset,
                                const std::vector<Scenario>& augmented);

}  // namespace drf
