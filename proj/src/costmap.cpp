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

#include "drf_critic/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace drf {

namespace {

// Shared by the point test and the scanline mask so both classify a lattice
// centre identically.
inline bool crosses(const Vec2& a, const Vec2& b, double y) { return (a.y > y) != (b.y > y); }
inline double crossing_x(const Vec2& a, const Vec2& b, double y) {
  return (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x;
}

}  // namespace

bool point_in_polygon(const Polygon& polygon, double x, double y) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[j];
    const Vec2& b = polygon[i];
    if (crosses(a, b, y) && x < crossing_x(a, b, y)) inside = !inside;
  }
  return inside;
}

Footprint::Footprint(const Pose2& pose, double length, double width)
    : pose_(pose),
      length_(length),
      width_(width),
      cos_h_(std::cos(pose.heading)),
      sin_h_(std::sin(pose.heading)) {
  require(length > 0.0 && width > 0.0, "footprint dimensions must be positive");
}

bool Footprint::contains(double x, double y) const {
  const double dx = x - pose_.x;
  const double dy = y - pose_.y;
  const double lx = cos_h_ * dx + sin_h_ * dy;
  const double ly = -sin_h_ * dx + cos_h_ * dy;
  return std::abs(lx) <= 0.5 * length_ && std::abs(ly) <= 0.5 * width_;
}

std::array<double, 4> Footprint::bounds() const {
  const double hx = 0.5 * (std::abs(cos_h_) * length_ + std::abs(sin_h_) * width_);
  const double hy = 0.5 * (std::abs(sin_h_) * length_ + std::abs(cos_h_) * width_);
  return {pose_.x - hx, pose_.y - hy, pose_.x + hx, pose_.y + hy};
}

DrivableArea::DrivableArea(std::vector<Polygon> polygons, double resolution)
    : polygons_(std::move(polygons)), resolution_(resolution) {
  require(resolution > 0.0, "drivable-area resolution must be positive");
  if (polygons_.empty()) return;
  double xmin = INFINITY, ymin = INFINITY, xmax = -INFINITY, ymax = -INFINITY;
  for (const Polygon& poly : polygons_) {
    require(poly.size() >= 3, "drivable polygon needs at least 3 vertices");
    for (const Vec2& v : poly) {
      xmin = std::min(xmin, v.x);
      ymin = std::min(ymin, v.y);
      xmax = std::max(xmax, v.x);
      ymax = std::max(ymax, v.y);
    }
  }
  mask_ix_ = static_cast<std::int64_t>(std::floor(xmin / resolution)) - 2;
  mask_iy_ = static_cast<std::int64_t>(std::floor(ymin / resolution)) - 2;
  mask_w_ = static_cast<std::int64_t>(std::ceil(xmax / resolution)) + 2 - mask_ix_ + 1;
  mask_h_ = static_cast<std::int64_t>(std::ceil(ymax / resolution)) + 2 - mask_iy_ + 1;
  mask_.assign(static_cast<std::size_t>(mask_w_ * mask_h_), 0);

  std::vector<double> xs;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(mask_w_));
  for (std::int64_t r = 0; r < mask_h_; ++r) {
    const double y = static_cast<double>(mask_iy_ + r) * resolution;
    std::fill(row.begin(), row.end(), 0);
    for (const Polygon& poly : polygons_) {
      xs.clear();
      const std::size_t n = poly.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (crosses(poly[j], poly[i], y)) xs.push_back(crossing_x(poly[j], poly[i], y));
      }
      if (xs.empty()) continue;
      std::sort(xs.begin(), xs.end());
      // A cell is inside when an odd number of crossings lie strictly to its right.
      std::size_t left = 0;  // crossings with x_c <= x
      for (std::int64_t c = 0; c < mask_w_; ++c) {
        const double x = static_cast<double>(mask_ix_ + c) * resolution;
        while (left < xs.size() && !(x < xs[left])) ++left;
        if ((xs.size() - left) % 2 == 1) row[static_cast<std::size_t>(c)] = 1;
      }
    }
    std::copy(row.begin(), row.end(), mask_.begin() + r * mask_w_);
  }
}

bool DrivableArea::drivable_cell(std::int64_t gx, std::int64_t gy) const {
  if (polygons_.empty()) return true;
  const std::int64_t c = gx - mask_ix_;
  const std::int64_t r = gy - mask_iy_;
  if (c < 0 || r < 0 || c >= mask_w_ || r >= mask_h_) return false;
  return mask_[static_cast<std::size_t>(r * mask_w_ + c)] != 0;
}

CostScene::CostScene(const DrivableArea& area, std::vector<Footprint> obstacles)
    : area_(&area), obstacles_(std::move(obstacles)) {}

double CostScene::cell_cost(std::int64_t gx, std::int64_t gy) const {
  const double res = area_->resolution();
  const double x = static_cast<double>(gx) * res;
  const double y = static_cast<double>(gy) * res;
  for (const Footprint& f : obstacles_) {
    if (f.contains(x, y)) return kObstacleCost;
  }
  return area_->drivable_cell(gx, gy) ? 0.0 : kOffRoadCost;
}

CostMap rasterize(std::span<const Polygon> drivable, std::span<const Footprint> obstacles,
                  const GridGeometry& geometry) {
  CostMap cost{Grid(geometry)};
  for (int j = 0; j < geometry.height; ++j) {
    const double y = geometry.cell_y(j);
    for (int i = 0; i < geometry.width; ++i) {
      const double x = geometry.cell_x(i);
      double c = 0.0;
      if (std::any_of(obstacles.begin(), obstacles.end(),
                      [&](const Footprint& f) { return f.contains(x, y); })) {
        c = kObstacleCost;
      } else if (!drivable.empty() &&
                 std::none_of(drivable.begin(), drivable.end(),
                              [&](const Polygon& p) { return point_in_polygon(p, x, y); })) {
        c = kOffRoadCost;
      }
      cost.grid.at(i, j) = c;
    }
  }
  return cost;
}

CostMap rasterize_scene(const Scenario& scenario, int step,
                        const std::optional<std::string>& exclude, const GridGeometry& geometry) {
  require(step >= 0 && step <= scenario.horizon, "step outside the scenario horizon");
  if (exclude && !scenario.has_vehicle(*exclude)) {
    throw InvalidArgument("cannot exclude unknown vehicle '" + *exclude + "'");
  }
  const double t = scenario.time_at(step);
  std::vector<Footprint> obstacles;
  auto add = [&](const Track& track) {
    if (exclude && track.id() == *exclude) return;
    obstacles.emplace_back(track.pose_at_time(t), track.length(), track.width());
  };
  add(scenario.ego);
  for (const Track& a : scenario.agents) add(a);
  return rasterize(scenario.drivable, obstacles, geometry);
}

double perceived_risk(const RiskField& field, const CostMap& cost) {
  if (!(field.grid.geometry() == cost.grid.geometry())) {
    throw InvalidArgument("risk field and cost map are not co-registered");
  }
  const std::vector<double>& g = field.grid.values();
  const std::vector<double>& c = cost.grid.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) sum += g[k] * c[k];
  return sum;
}

double perceived_risk(const FieldShape& shape, const CostScene& scene) {
  if (shape.resolution() != scene.resolution()) {
    throw InvalidArgument("risk field and cost scene use different resolutions");
  }
  const double res = shape.resolution();
  double sum = 0.0;
  for (const LatticeSpan& span : shape.support_spans()) {
    const double y = static_cast<double>(span.gy) * res;
    for (std::int64_t gx = span.gx_begin; gx <= span.gx_end; ++gx) {
      const double c = scene.cell_cost(gx, span.gy);
      if (c == 0.0) continue;
      sum += shape.value_at(static_cast<double>(gx) * res, y) * c;
    }
  }
  return sum;
}

void write_costmap_csv(std::ostream& out, const CostMap& cost) {
  const GridGeometry& g = cost.grid.geometry();
  out << "x,y,C\n" << std::setprecision(9);
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      out << g.cell_x(i) << ',' << g.cell_y(j) << ',' << cost.grid.at(i, j) << '\n';
    }
  }
}

}  // namespace drf
