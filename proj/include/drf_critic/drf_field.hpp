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
#include <iosfwd>
#include <optional>
#include <vector>

#include "drf_critic/common.hpp"
#include "drf_critic/grid.hpp"

namespace drf {

struct VehicleState {
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double speed{0.0};     // m/s, >= 0
  double steering{0.0};  // rad, positive turns left
  double wheelbase{2.85};
  double length{4.5};
  double width{1.8};

  Pose2 pose() const { return {x, y, heading}; }
  void validate() const;
};

/// Shape parameters of the driver's risk field.
struct DrfParams {
  double steepness{0.06};       // p [1/m^2], height of the parabola a(s)
  double safety_distance{12.0};  // d_s [m]
  double widening{0.001};        // m [-], slope of the field width along the path
  double base_width{0.5};        // c [m], width at the vehicle
  double lookahead_time{4.0};    // t_la [s]
  double inner_gain{0.0};        // k1 [1/rad]
  double outer_gain{1.12};       // k2 [1/rad]

  /// Values identified on urban lane-keeping and braking logs.
  static DrfParams identified() { return {}; }
  void validate() const;

  friend bool operator==(const DrfParams&, const DrfParams&) = default;
};

/// Below this steering magnitude the predicted path is a straight ray.
inline constexpr double kStraightSteering = 1e-4;

/// Signed turn radius L / tan(delta) (positive = left turn); nullopt means straight.
std::optional<double> turn_radius(const VehicleState& state);

/// d_la = v * t_la + d_s.
double lookahead_distance(const VehicleState& state, const DrfParams& params);

struct FieldOptions {
  double resolution{0.5};          // grid and path-sample spacing [m]
  double lateral_cutoff{3.0};      // field is zero beyond this many sigmas laterally
  bool literal_exponent{false};    // use the unsquared (dist - R) exponent
};

struct PathSample {
  double x{0.0};
  double y{0.0};
  double s{0.0};
};

/// Inclusive run of lattice cells [gx_begin, gx_end] on lattice row gy.
struct LatticeSpan {
  std::int64_t gy{0};
  std::int64_t gx_begin{0};
  std::int64_t gx_end{0};
};

/// Closed-form description of one vehicle's risk field. Values are defined at any
/// point; grids and the fast risk evaluation both sample this one function.
class FieldShape {
 public:
  FieldShape(const VehicleState& state, const DrfParams& params, const FieldOptions& options = {});

  double value_at(double x, double y) const;

  double lookahead() const { return lookahead_; }
  bool straight() const { return straight_; }
  double radius() const { return radius_; }  // unsigned; 0 when straight
  Vec2 centre() const { return centre_; }
  double height(double s) const;
  double sigma_inner(double s) const;
  double sigma_outer(double s) const;
  double resolution() const { return options_.resolution; }

  /// Point on the predicted path at arc length s.
  Vec2 point_at(double s) const;
  /// Samples every `resolution` metres over [0, d_la]; the last sample sits at d_la.
  std::vector<PathSample> path_samples() const;
  /// Farthest distance from the vehicle at which the field can be nonzero.
  double reach() const;

  /// Lattice cells that may hold a nonzero value, ordered by row then column, each
  /// cell at most once. A conservative superset of the support.
  std::vector<LatticeSpan> support_spans() const;

 private:
  double nearest_sample(double s) const;

  FieldOptions options_;
  DrfParams params_;
  Pose2 pose_;
  double cos_h_;
  double sin_h_;
  double lookahead_;
  bool straight_;
  double radius_{0.0};
  double turn_sign_{0.0};
  Vec2 centre_;
  double start_angle_{0.0};
  double slope_inner_;
  double slope_outer_;
};

struct RiskField {
  Grid grid;
  std::vector<PathSample> path;
  double lookahead{0.0};
  /// Set when part of the predicted path falls outside the grid.
  bool truncated{false};
};

/// Lattice grid around the vehicle with half-size d_la + cutoff * sigma(d_la).
GridGeometry default_field_geometry(const VehicleState& state, const DrfParams& params,
                                    const FieldOptions& options = {});

RiskField build_field(const VehicleState& state, const DrfParams& params,
                      const GridGeometry& geometry, const FieldOptions& options = {});

/// Debug dump, one `x,y,G` row per cell.
void write_field_csv(std::ostream& out, const RiskField& field);

}  // namespace drf
