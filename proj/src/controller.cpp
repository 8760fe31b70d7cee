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

#include "drf_critic/controller.hpp"

#include <algorithm>
#include <cmath>

#include "drf_critic/common.hpp"

namespace drf {

void ControllerParams::validate() const {
  require(std::isfinite(risk_threshold) && risk_threshold > 0.0, "risk threshold must be > 0");
  require(std::isfinite(gain) && gain > 0.0 && gain <= 1.0, "controller gain must be in (0, 1]");
  require(std::isfinite(max_speed) && max_speed > 0.0, "max speed must be > 0");
  require(std::isfinite(desired_speed) && desired_speed >= 0.0 && desired_speed <= max_speed,
          "desired speed must be in [0, max speed]");
}

double step(double speed, double risk, const ControllerParams& params) {
  require(std::isfinite(speed) && speed >= 0.0, "speed must be finite and non-negative");
  require(std::isfinite(risk) && risk >= 0.0, "risk must be finite and non-negative");
  const double rt = params.risk_threshold;
  double next;
  if (risk <= rt) {
    next = speed + params.gain * (params.desired_speed - speed);
  } else {
    next = speed - params.gain * speed * std::min(1.0, (risk - rt) / rt);
  }
  return std::clamp(next, 0.0, params.max_speed);
}

double limit_speed_by_risk(double proposed, const ControllerParams& params,
                           const RiskAtSpeed& predicted_risk, int iterations) {
  const double rt = params.risk_threshold;
  if (proposed <= 0.0 || predicted_risk(proposed) <= rt) return proposed;
  if (predicted_risk(0.0) > rt) return 0.0;
  double lo = 0.0;  // admissible
  double hi = proposed;
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (predicted_risk(mid) <= rt) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace drf
