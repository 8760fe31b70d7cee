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

#include <cstdint>
#include <string>
#include <vector>

#include "drf_critic/scenario.hpp"

/// Procedurally generated scenarios for tests, benchmarks and demos.
namespace drf::synthetic {

/// Constant-speed straight track sampled every dt over [0, horizon * dt]. The
/// explicit path runs `lead_in` metres behind the start and `run_out` metres
/// beyond the last sample so path followers can go faster than the log.
Track straight_track(const std::string& id, const Pose2& start, double speed, double dt,
                     int horizon, double run_out = 150.0, double lead_in = 0.0);

/// Straight two-lane road along +x (y in [-4, 4]), ego in the right lane at the
/// origin, one parked vehicle `obstacle_distance` metres ahead.
Scenario corridor(const std::string& id, double obstacle_distance, double ego_speed,
                  int horizon = 40);

/// Ego heading east through a four-way crossing; three flagged agents on the
/// north-south road reach the conflict zone after the ego in the log.
Scenario intersection(const std::string& id, std::uint64_t seed, int horizon = 40);

/// Straight road with one vehicle behind the ego and one ahead. With
/// `rear_approach` the vehicle behind is closing in; otherwise it falls back.
Scenario following(const std::string& id, std::uint64_t seed, bool rear_approach,
                   int horizon = 40);

/// Mixed intersection/following benchmark, ids `<prefix>_NNN`.
std::vector<Scenario> benchmark_set(const std::string& prefix, std::size_t count,
                                    std::uint64_t seed, int horizon = 40);

}  // namespace drf::synthetic
