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

#include "drf_critic/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace drf::synthetic {

Track straight_track(const std::string& id, const Pose2& start, double speed, double dt,
                     int horizon, double run_out, double lead_in) {
  const double c = std::cos(start.heading);
  const double s = std::sin(start.heading);
  std::vector<TrackSample> samples;
  samples.reserve(static_cast<std::size_t>(horizon) + 1);
  for (int k = 0; k <= horizon; ++k) {
    const double t = static_cast<double>(k) * dt;
    samples.push_back({t, {start.x + speed * t * c, start.y + speed * t * s, start.heading},
                       speed});
  }
  const double end = speed * static_cast<double>(horizon) * dt + run_out;
  std::vector<Vec2> path{{start.x - lead_in * c, start.y - lead_in * s},
                         {start.x + end * c, start.y + end * s}};
  return Track(id, 4.5, 1.8, std::move(samples), std::move(path));
}

namespace {

Polygon box(double xmin, double ymin, double xmax, double ymax) {
  return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
}

}  // namespace

Scenario corridor(const std::string& id, double obstacle_distance, double ego_speed,
                  int horizon) {
  Scenario s;
  s.id = id;
  s.horizon = horizon;
  const double far = obstacle_distance + 200.0;
  s.drivable = {box(-50.0, -4.0, far, 4.0)};
  s.ego = straight_track("ego", {0.0, -2.0, 0.0}, ego_speed, s.dt, horizon, 200.0);
  s.agents.push_back(straight_track("parked", {obstacle_distance, -2.0, 0.0}, 0.0, s.dt, horizon,
                                    1.0));
  s.validate();
  return s;
}

Scenario intersection(const std::string& id, std::uint64_t seed, int horizon) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  Scenario s;
  s.id = id;
  s.horizon = horizon;
  s.drivable = {box(-200.0, -4.0, 200.0, 4.0), box(-4.0, -200.0, 4.0, 200.0)};

  const double ego_speed = uniform(8.0, 12.0);
  const double ego_arrival = uniform(1.2, 2.2);
  s.ego = straight_track("ego", {-ego_speed * ego_arrival, -2.0, 0.0}, ego_speed, s.dt, horizon,
                         150.0);

  // Per lane, agents queue behind one another. The first one's front reaches the ego
  // lane shortly after the ego's rear has cleared the crossing lane, so the log itself
  // is collision-free but leaves little slack.
  const double half_len = 2.25;
  const double half_w = 0.9;
  double lane_free[2];
  for (int lane = 0; lane < 2; ++lane) {
    const double x = lane == 0 ? 2.0 : -2.0;
    lane_free[lane] = ego_arrival + (x + half_w + half_len) / ego_speed + uniform(0.1, 0.7);
  }
  for (int i = 0; i < 3; ++i) {
    const int lane = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;  // 0 northbound, 1 southbound
    const double speed = uniform(5.0, 9.0);
    // Centre arrival at the ego lane; the front gets there half_len + half_w earlier.
    const double arrival = lane_free[lane] + (half_len + half_w) / speed;
    lane_free[lane] = arrival + uniform(1.2, 2.0);
    // Conflict point: the ego lane (y = -2) crossed with the agent lane.
    const double x = lane == 0 ? 2.0 : -2.0;
    const double heading = lane == 0 ? 0.5 * kPi : -0.5 * kPi;
    const double dir = lane == 0 ? 1.0 : -1.0;
    const double y0 = -2.0 - dir * speed * arrival;
    const std::string aid = "agent" + std::to_string(i);
    s.agents.push_back(straight_track(aid, {x, y0, heading}, speed, s.dt, horizon, 150.0));
    s.flagged.push_back(aid);
  }
  s.validate();
  return s;
}

Scenario following(const std::string& id, std::uint64_t seed, bool rear_approach, int horizon) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  Scenario s;
  s.id = id;
  s.horizon = horizon;
  s.drivable = {box(-150.0, -4.0, 400.0, 4.0)};
  const double ego_speed = uniform(7.0, 11.0);
  s.ego = straight_track("ego", {0.0, -2.0, 0.0}, ego_speed, s.dt, horizon, 200.0);

  const double gap_behind = uniform(10.0, 22.0);
  const double rear_speed =
      rear_approach ? ego_speed + uniform(1.5, 3.5) : std::max(0.0, ego_speed - uniform(1.5, 3.5));
  s.agents.push_back(
      straight_track("behind", {-gap_behind, -2.0, 0.0}, rear_speed, s.dt, horizon, 200.0));
  const double gap_ahead = uniform(25.0, 45.0);
  s.agents.push_back(straight_track("ahead", {gap_ahead, -2.0, 0.0}, ego_speed + uniform(-1.0, 1.0),
                                    s.dt, horizon, 200.0));
  s.flagged = {"behind", "ahead"};
  s.validate();
  return s;
}

std::vector<Scenario> benchmark_set(const std::string& prefix, std::size_t count,
                                    std::uint64_t seed, int horizon) {
  std::vector<Scenario> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu", prefix.c_str(), i);
    const std::uint64_t sub = seed * 1000003ULL + i;
    if (i % 4 == 3) {
      out.push_back(following(name, sub, i % 8 == 3, horizon));
    } else {
      out.push_back(intersection(name, sub, horizon));
    }
  }
  return out;
}

}  // namespace drf::synthetic
