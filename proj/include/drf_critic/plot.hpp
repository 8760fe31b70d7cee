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
#include <vector>

#include "drf_critic/grid.hpp"
#include "drf_critic/simulator.hpp"

namespace drf {

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Iso-line of `level` through the grid's cell centres (marching squares; saddle
/// cells are resolved with the cell-centre average).
std::vector<Segment> contour(const Grid& grid, double level);

/// Vehicle rectangles, drivable polygons and three ego risk-field contours at
/// one step of a rollout.
void write_svg_frame(std::ostream& out, const Scenario& scenario, const RolloutLog& log,
                     std::size_t step, const SimOptions& options = {});

/// Writes trajectory.csv (one row per vehicle and step) and frame_NNN.svg per step.
/// Returns the number of frames written.
std::size_t write_plots(const std::filesystem::path& dir, const Scenario& scenario,
                        const RolloutLog& log, const SimOptions& options = {});

}  // namespace drf
