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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drf_critic/drf_field.hpp"
#include "drf_critic/grid.hpp"
#include "drf_critic/scenario.hpp"

namespace drf {

inline constexpr double kObstacleCost = 2500.0;
inline constexpr double kOffRoadCost = 500.0;

/// Even-odd point-in-polygon test.
bool point_in_polygon(const Polygon& polygon, double x, double y);

/// Oriented vehicle rectangle centred on its pose.
class Footprint {
 public:
  Footprint(const Pose2& pose, double length, double width);

  const Pose2& pose() const { return pose_; }
  double length() const { return length_; }
  double width() const { return width_; }
  bool contains(double x, double y) const;
  /// Axis-aligned bounds {xmin, ymin, xmax, ymax}.
  std::array<double, 4> bounds() const;

 private:
  Pose2 pose_;
  double length_;
  double width_;
  double cos_h_;
  double sin_h_;
};

/// Drivable-area lookup on the lattice of one resolution. An empty polygon set
/// means there is no map and every cell is drivable.
class DrivableArea {
 public:
  DrivableArea(std::vector<Polygon> polygons, double resolution);

  double resolution() const { return resolution_; }
  const std::vector<Polygon>& polygons() const { return polygons_; }
  /// Same answer as point_in_polygon at the lattice centre (gx, gy) * resolution.
  bool drivable_cell(std::int64_t gx, std::int64_t gy) const;

 private:
  std::vector<Polygon> polygons_;
  double resolution_;
  std::int64_t mask_ix_{0};
  std::int64_t mask_iy_{0};
  std::int64_t mask_w_{0};
  std::int64_t mask_h_{0};
  std::vector<std::uint8_t> mask_;
};

/// Point-query view of the cost map at one instant.
class CostScene {
 public:
  CostScene(const DrivableArea& area, std::vector<Footprint> obstacles);

  double resolution() const { return area_->resolution(); }
  double cell_cost(std::int64_t gx, std::int64_t gy) const;

 private:
  const DrivableArea* area_;
  std::vector<Footprint> obstacles_;
};

/// Objective environment cost; every cell is 0, kOffRoadCost or kObstacleCost.
struct CostMap {
  Grid grid;
};

/// Dense rasterisation: obstacle cells 2500, cells outside every drivable polygon 500,
/// overlaps take the maximum.
CostMap rasterize(std::span<const Polygon> drivable, std::span<const Footprint> obstacles,
                  const GridGeometry& geometry);

/// Rasterises the recorded scene at `step`, leaving out vehicle `exclude`.
CostMap rasterize_scene(const Scenario& scenario, int step,
                        const std::optional<std::string>& exclude, const GridGeometry& geometry);

/// Zero-lag inner product sum(G * C) of co-registered grids.
double perceived_risk(const RiskField& field, const CostMap& cost);

/// Same quantity evaluated only where the field can be nonzero and the cost is
/// nonzero; bitwise equal to the dense form on any grid that contains the field.
double perceived_risk(const FieldShape& shape, const CostScene& scene);

void write_costmap_csv(std::ostream& out, const CostMap& cost);

}  // namespace drf
