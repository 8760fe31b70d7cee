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

#include "drf_critic/augment.hpp"

#include <cmath>
#include <set>

namespace drf {

void AugmentPolicy::validate() const {
  require(longitudinal_window > 0.0 && lateral_window > 0.0,
          "rear-detection windows must be positive");
  require(min_closing_speed >= 0.0, "closing-speed threshold must be non-negative");
  aggressive.drf.validate();
  aggressive.controller.validate();
  sim.validate();
}

namespace {

// Velocity by central difference where possible, one-sided at the ends of the horizon.
Vec2 velocity(const Track& track, const Scenario& scenario, int step) {
  const int lo = std::max(step - 1, 0);
  const int hi = std::min(step + 1, scenario.horizon);
  if (hi == lo) return {0.0, 0.0};
  const Pose2 a = track.pose_at_time(scenario.time_at(lo));
  const Pose2 b = track.pose_at_time(scenario.time_at(hi));
  const double span = scenario.time_at(hi) - scenario.time_at(lo);
  return {(b.x - a.x) / span, (b.y - a.y) / span};
}

}  // namespace

bool detect_rear_vehicle(const Scenario& scenario, int step, const AugmentPolicy& policy) {
  require(step >= 0 && step <= scenario.horizon, "step outside the scenario horizon");
  const double t = scenario.time_at(step);
  const Pose2 ego = scenario.ego.pose_at_time(t);
  const Vec2 ve = velocity(scenario.ego, scenario, step);
  for (const Track& agent : scenario.agents) {
    const Pose2 p = agent.pose_at_time(t);
    const Vec2 rel = to_frame(ego, p.x, p.y);
    if (!(rel.x < 0.0 && -rel.x <= policy.longitudinal_window &&
          std::abs(rel.y) <= policy.lateral_window)) {
      continue;
    }
    const Vec2 va = velocity(agent, scenario, step);
    const double dx = ego.x - p.x;
    const double dy = ego.y - p.y;
    const double dist = std::hypot(dx, dy);
    if (dist <= 0.0) continue;
    const double closing = ((va.x - ve.x) * dx + (va.y - ve.y) * dy) / dist;
    if (closing > policy.min_closing_speed) return true;
  }
  return false;
}

std::optional<Scenario> augment_scenario(const Scenario& scenario, const AugmentPolicy& policy) {
  policy.validate();
  bool rear = false;
  for (int k = 0; k <= scenario.horizon && !rear; ++k) rear = detect_rear_vehicle(scenario, k, policy);
  if (!rear) return std::nullopt;

  const DrfEgo ego(policy.aggressive.drf, policy.aggressive.controller);
  const RolloutLog log = rollout(scenario, ego, {}, policy.sim);
  if (log.error) throw std::runtime_error(*log.error);

  const Track& original = scenario.ego;
  std::vector<TrackSample> samples;
  samples.reserve(log.steps.size());
  for (const StepRecord& s : log.steps) {
    samples.push_back({s.t, original.path().pose_at(s.ego.arc), s.ego.speed});
  }
  Scenario out = scenario;
  out.id = scenario.id + kAugmentSuffix;
  out.ego = Track(original.id(), original.length(), original.width(), std::move(samples),
                  original.path().points(), original.wheelbase());
  out.augmented = true;
  return out;
}

std::vector<Scenario> aggregate(const std::vector<Scenario>& dataset,
                                const std::vector<Scenario>& augmented) {
  std::set<std::string> ids;
  std::vector<Scenario> merged;
  merged.reserve(dataset.size() + augmented.size());
  for (const auto* part : {&dataset, &augmented}) {
    for (const Scenario& s : *part) {
      if (!ids.insert(s.id).second) throw InvalidArgument("duplicate scenario id '" + s.id + "'");
      merged.push_back(s);
    }
  }
  return merged;
}

}  // namespace drf
