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

#include "drf_critic/drf_field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace drf {

void VehicleState::validate() const {
  require(std::isfinite(x) && std::isfinite(y) && std::isfinite(heading), "pose must be finite");
  require(speed >= 0.0 && std::isfinite(speed), "vehicle speed must be non-negative");
  require(std::abs(steering) < 0.5 * kPi, "steering angle must lie in (-pi/2, pi/2)");
  require(wheelbase > 0.0 && length > 0.0 && width > 0.0, "vehicle dimensions must be positive");
}

void DrfParams::validate() const {
  require(steepness > 0.0, "DRF steepness p must be positive");
  require(safety_distance >= 0.0, "DRF safety distance d_s must be non-negative");
  require(widening >= 0.0, "DRF widening slope m must be non-negative");
  require(base_width > 0.0, "DRF base width c must be positive");
  require(lookahead_time > 0.0, "DRF look-ahead time t_la must be positive");
  require(inner_gain >= 0.0 && outer_gain >= 0.0, "DRF boundary gains k1, k2 must be non-negative");
}

std::optional<double> turn_radius(const VehicleState& state) {
  if (std::abs(state.steering) < kStraightSteering) return std::nullopt;
  return state.wheelbase / std::tan(state.steering);
}

double lookahead_distance(const VehicleState& state, const DrfParams& params) {
  return state.speed * params.lookahead_time + params.safety_distance;
}

FieldShape::FieldShape(const VehicleState& state, const DrfParams& params,
                       const FieldOptions& options)
    : options_(options),
      params_(params),
      pose_(state.pose()),
      cos_h_(std::cos(state.heading)),
      sin_h_(std::sin(state.heading)) {
  state.validate();
  params.validate();
  require(options.resolution > 0.0, "field resolution must be positive");
  require(options.lateral_cutoff > 0.0, "field lateral cutoff must be positive");
  lookahead_ = lookahead_distance(state, params);
  const double abs_delta = std::abs(state.steering);
  slope_inner_ = params.widening + params.inner_gain * abs_delta;
  slope_outer_ = params.widening + params.outer_gain * abs_delta;

  const std::optional<double> r = turn_radius(state);
  straight_ = !r.has_value();
  if (straight_) {
    slope_outer_ = slope_inner_;
    centre_ = {pose_.x, pose_.y};
  } else {
    radius_ = std::abs(*r);
    turn_sign_ = *r > 0.0 ? 1.0 : -1.0;
    // The centre sits on the side the vehicle turns toward.
    centre_ = {pose_.x - turn_sign_ * radius_ * sin_h_, pose_.y + turn_sign_ * radius_ * cos_h_};
    start_angle_ = std::atan2(pose_.y - centre_.y, pose_.x - centre_.x);
  }
}

double FieldShape::height(double s) const {
  if (s < 0.0 || s > lookahead_) return 0.0;
  const double gap = s - lookahead_;
  return params_.steepness * (gap * gap);
}

double FieldShape::sigma_inner(double s) const { return slope_inner_ * s + params_.base_width; }
double FieldShape::sigma_outer(double s) const { return slope_outer_ * s + params_.base_width; }

double FieldShape::nearest_sample(double s) const {
  // Samples sit at j * res plus a final one at d_la, so the last interval may be short.
  const double res = options_.resolution;
  const double lo = std::min(std::floor(s / res) * res, lookahead_);
  const double hi = std::min(lo + res, lookahead_);
  return s - lo <= hi - s ? lo : hi;
}

double FieldShape::value_at(double x, double y) const {
  double s = 0.0;
  double lateral = 0.0;
  bool inner = true;
  if (straight_) {
    const double dx = x - pose_.x;
    const double dy = y - pose_.y;
    s = dx * cos_h_ + dy * sin_h_;
    if (s < 0.0 || s > lookahead_) return 0.0;
    lateral = -dx * sin_h_ + dy * cos_h_;
  } else {
    const double dx = x - centre_.x;
    const double dy = y - centre_.y;
    const double dist = std::hypot(dx, dy);
    double angle = turn_sign_ * (std::atan2(dy, dx) - start_angle_);
    angle = std::fmod(angle, 2.0 * kPi);
    if (angle < 0.0) angle += 2.0 * kPi;
    s = radius_ * angle;
    if (s > lookahead_) return 0.0;
    lateral = dist - radius_;
    inner = dist < radius_;
  }
  const double sq = nearest_sample(s);
  const double sigma = inner ? sigma_inner(sq) : sigma_outer(sq);
  if (std::abs(lateral) > options_.lateral_cutoff * sigma) return 0.0;
  const double a = height(sq);
  const double numerator =
      options_.literal_exponent ? (straight_ ? std::abs(lateral) : lateral) : lateral * lateral;
  return a * std::exp(-numerator / (2.0 * sigma * sigma));
}

Vec2 FieldShape::point_at(double s) const {
  if (straight_) return {pose_.x + s * cos_h_, pose_.y + s * sin_h_};
  const double angle = start_angle_ + turn_sign_ * s / radius_;
  return {centre_.x + radius_ * std::cos(angle), centre_.y + radius_ * std::sin(angle)};
}

std::vector<PathSample> FieldShape::path_samples() const {
  const double res = options_.resolution;
  const auto count = static_cast<int>(std::ceil(lookahead_ / res));
  std::vector<PathSample> out;
  out.reserve(count + 1);
  for (int j = 0; j <= count; ++j) {
    const double s = std::min(j * res, lookahead_);
    const Vec2 p = point_at(s);
    out.push_back({p.x, p.y, s});
  }
  return out;
}

double FieldShape::reach() const {
  const double sigma_max = std::max(sigma_inner(lookahead_), sigma_outer(lookahead_));
  return lookahead_ + options_.lateral_cutoff * sigma_max;
}

std::vector<LatticeSpan> FieldShape::support_spans() const {
  const double res = options_.resolution;
  const double sigma_max = std::max(sigma_inner(lookahead_), sigma_outer(lookahead_));
  const double half_band = options_.lateral_cutoff * sigma_max + res;
  const double box = reach() + res;
  const double box_xmin = pose_.x - box;
  const double box_xmax = pose_.x + box;
  const auto gy_begin = static_cast<std::int64_t>(std::floor((pose_.y - box) / res));
  const auto gy_end = static_cast<std::int64_t>(std::ceil((pose_.y + box) / res));

  std::vector<LatticeSpan> spans;
  spans.reserve(static_cast<std::size_t>(gy_end - gy_begin + 1) * 2);
  auto push = [&](std::int64_t gy, double lo, double hi) {
    lo = std::max(lo - res, box_xmin);
    hi = std::min(hi + res, box_xmax);
    if (lo > hi) return;
    auto b = static_cast<std::int64_t>(std::floor(lo / res));
    const auto e = static_cast<std::int64_t>(std::ceil(hi / res));
    if (!spans.empty() && spans.back().gy == gy) {
      if (b <= spans.back().gx_end) {
        spans.back().gx_end = std::max(spans.back().gx_end, e);
        return;
      }
    }
    spans.push_back({gy, b, e});
  };

  if (straight_) {
    const double s0 = -res;
    const double s1 = lookahead_ + res;
    auto corner = [&](double s, double l) {
      return Vec2{pose_.x + s * cos_h_ - l * sin_h_, pose_.y + s * sin_h_ + l * cos_h_};
    };
    const Vec2 quad[4] = {corner(s0, -half_band), corner(s1, -half_band), corner(s1, half_band),
                          corner(s0, half_band)};
    for (std::int64_t gy = gy_begin; gy <= gy_end; ++gy) {
      const double y = static_cast<double>(gy) * res;
      double lo = INFINITY;
      double hi = -INFINITY;
      for (int e = 0; e < 4; ++e) {
        const Vec2& a = quad[e];
        const Vec2& b = quad[(e + 1) % 4];
        if ((a.y - y) * (b.y - y) > 0.0) continue;
        if (a.y == b.y) {
          lo = std::min({lo, a.x, b.x});
          hi = std::max({hi, a.x, b.x});
        } else {
          const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
      if (lo <= hi) push(gy, lo, hi);
    }
  } else {
    const double r_out = radius_ + half_band;
    const double r_in = std::max(0.0, radius_ - half_band);
    for (std::int64_t gy = gy_begin; gy <= gy_end; ++gy) {
      const double dy = static_cast<double>(gy) * res - centre_.y;
      if (std::abs(dy) > r_out) continue;
      const double xo = std::sqrt(r_out * r_out - dy * dy);
      if (std::abs(dy) < r_in) {
        const double xi = std::sqrt(r_in * r_in - dy * dy);
        push(gy, centre_.x - xo, centre_.x - xi);
        push(gy, centre_.x + xi, centre_.x + xo);
      } else {
        push(gy, centre_.x - xo, centre_.x + xo);
      }
    }
  }
  return spans;
}

GridGeometry default_field_geometry(const VehicleState& state, const DrfParams& params,
                                    const FieldOptions& options) {
  const FieldShape shape(state, params, options);
  const double e = shape.reach();
  return GridGeometry::covering(state.x - e, state.y - e, state.x + e, state.y + e,
                                options.resolution);
}

RiskField build_field(const VehicleState& state, const DrfParams& params,
                      const GridGeometry& geometry, const FieldOptions& options) {
  geometry.validate();
  require(geometry.resolution == options.resolution,
          "field grid resolution must match the path sample spacing");
  const FieldShape shape(state, params, options);
  RiskField field{Grid(geometry), shape.path_samples(), shape.lookahead(), false};
  for (const PathSample& p : field.path) {
    if (!geometry.contains_point(p.x, p.y)) {
      field.truncated = true;
      break;
    }
  }
  for (int j = 0; j < geometry.height; ++j) {
    const double y = geometry.cell_y(j);
    for (int i = 0; i < geometry.width; ++i) {
      field.grid.at(i, j) = shape.value_at(geometry.cell_x(i), y);
    }
  }
  return field;
}

void write_field_csv(std::ostream& out, const RiskField& field) {
  const GridGeometry& g = field.grid.geometry();
  out << "x,y,G\n" << std::setprecision(9);
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      out << g.cell_x(i) << ',' << g.cell_y(j) << ',' << field.grid.at(i, j) << '\n';
    }
  }
}

}  // namespace drf
