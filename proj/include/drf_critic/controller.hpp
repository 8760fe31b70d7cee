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

#include <functional>

namespace drf {

struct ControllerParams {
  double risk_threshold{9000.0};  // R_t
  double gain{0.025};             // k_v, per step
  double desired_speed{13.5};     // v_des [m/s]
  double max_speed{20.0};         // v_max [m/s]

  void validate() const;

  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

/// One proportional speed update: relax toward v_des while perceived risk is at or
/// below R_t, otherwise brake in proportion to the excess. Result lies in [0, v_max].
double step(double speed, double risk, const ControllerParams& params);

/// Predicted perceived risk when the next step is driven at the given speed.
using RiskAtSpeed = std::function<double(double)>;

/// Caps a proposed speed so the predicted risk of the next state stays at or below
/// R_t: keeps v_prop when that is already the case, returns 0 when even standing
/// still exceeds R_t, and otherwise bisects for the largest admissible speed.
double limit_speed_by_risk(double proposed, const ControllerParams& params,
                           const RiskAtSpeed& predicted_risk, int iterations = 24);

}  // namespace drf
