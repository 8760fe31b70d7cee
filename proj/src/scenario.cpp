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

#include "drf_critic/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace drf {

Polyline::Polyline(std::vector<Vec2> points, double fallback_heading)
    : fallback_heading_(fallback_heading) {
  require(!points.empty(), "polyline needs at least one point");
  points_.reserve(points.size());
  for (const Vec2& p : points) {
    require(std::isfinite(p.x) && std::isfinite(p.y), "polyline points must be finite");
    if (points_.empty() || !(p == points_.back())) points_.push_back(p);
  }
  arc_.resize(points_.size());
  arc_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    arc_[i] = arc_[i - 1] + std::hypot(points_[i].x - points_[i - 1].x,
                                       points_[i].y - points_[i - 1].y);
  }
}

Pose2 Polyline::pose_at(double s) const {
  if (points_.size() < 2) return {points_.front().x, points_.front().y, fallback_heading_};
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
  std::size_t seg = it == arc_.end() ? points_.size() - 2
                                     : static_cast<std::size_t>(it - arc_.begin()) - 1;
  seg = std::min(seg, points_.size() - 2);
  const Vec2& a = points_[seg];
  const Vec2& b = points_[seg + 1];
  const double seg_len = arc_[seg + 1] - arc_[seg];
  const double f = (s - arc_[seg]) / seg_len;
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), std::atan2(b.y - a.y, b.x - a.x)};
}

double Polyline::project(Vec2 p) const {
  if (points_.size() < 2) return 0.0;
  double best_d2 = INFINITY;
  double best_s = 0.0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2& a = points_[i];
    const Vec2& b = points_[i + 1];
    const double ex = b.x - a.x;
    const double ey = b.y - a.y;
    const double len2 = ex * ex + ey * ey;
    const double f = std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / len2, 0.0, 1.0);
    const double qx = a.x + f * ex - p.x;
    const double qy = a.y + f * ey - p.y;
    const double d2 = qx * qx + qy * qy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = arc_[i] + f * (arc_[i + 1] - arc_[i]);
    }
  }
  return best_s;
}

double Polyline::distance_to(Vec2 p) const {
  if (points_.size() < 2) return std::hypot(p.x - points_[0].x, p.y - points_[0].y);
  double best_d2 = INFINITY;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2& a = points_[i];
    const Vec2& b = points_[i + 1];
    const double ex = b.x - a.x;
    const double ey = b.y - a.y;
    const double f =
        std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / (ex * ex + ey * ey), 0.0, 1.0);
    const double qx = a.x + f * ex - p.x;
    const double qy = a.y + f * ey - p.y;
    best_d2 = std::min(best_d2, qx * qx + qy * qy);
  }
  return std::sqrt(best_d2);
}

double Polyline::curvature_at(double s, double half_window) const {
  if (points_.size() < 3) return 0.0;
  const double lo = std::clamp(s - half_window, 0.0, length());
  const double hi = std::clamp(s + half_window, 0.0, length());
  if (hi - lo <= 0.0) return 0.0;
  const double turn = wrap_angle(pose_at(hi).heading - pose_at(lo).heading);
  return turn / (hi - lo);
}

Track::Track(std::string id, double length, double width, std::vector<TrackSample> samples,
             std::optional<std::vector<Vec2>> path, double wheelbase)
    : id_(std::move(id)),
      length_(length),
      width_(width),
      wheelbase_(wheelbase),
      samples_(std::move(samples)),
      explicit_path_(path.has_value()) {
  if (samples_.empty()) throw DataError("track '" + id_ + "' has no samples");
  if (!(length_ > 0.0 && width_ > 0.0 && wheelbase_ > 0.0)) {
    throw DataError("track '" + id_ + "' needs positive length, width and wheelbase");
  }
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const TrackSample& s = samples_[k];
    if (!std::isfinite(s.t) || !std::isfinite(s.pose.x) || !std::isfinite(s.pose.y) ||
        !std::isfinite(s.pose.heading)) {
      throw DataError("track '" + id_ + "' has a non-finite sample");
    }
    if (s.speed && !(*s.speed >= 0.0)) {
      throw DataError("track '" + id_ + "' has a negative recorded speed");
    }
    if (k > 0 && !(s.t > samples_[k - 1].t)) {
      throw DataError("track '" + id_ + "' timestamps must be strictly increasing");
    }
  }
  if (explicit_path_) {
    path_ = Polyline(std::move(*path), samples_.front().pose.heading);
    sample_arc_.reserve(samples_.size());
    for (const TrackSample& s : samples_) {
      sample_arc_.push_back(path_.project({s.pose.x, s.pose.y}));
    }
  } else {
    std::vector<Vec2> pts;
    pts.reserve(samples_.size());
    sample_arc_.reserve(samples_.size());
    double arc = 0.0;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      const Vec2 p{samples_[k].pose.x, samples_[k].pose.y};
      if (k > 0) arc += std::hypot(p.x - pts.back().x, p.y - pts.back().y);
      pts.push_back(p);
      sample_arc_.push_back(arc);
    }
    path_ = Polyline(std::move(pts), samples_.front().pose.heading);
  }
}

std::size_t Track::segment_for(double t) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const TrackSample& s) { return v < s.t; });
  if (it == samples_.begin()) return 0;
  return static_cast<std::size_t>(it - samples_.begin()) - 1;
}

Pose2 Track::pose_at_time(double t) const {
  if (samples_.size() == 1 || t <= start_time()) return samples_.front().pose;
  if (t >= end_time()) return samples_.back().pose;
  const std::size_t k = segment_for(t);
  const TrackSample& a = samples_[k];
  const TrackSample& b = samples_[k + 1];
  const double f = (t - a.t) / (b.t - a.t);
  if (f == 0.0) return a.pose;
  return {a.pose.x + f * (b.pose.x - a.pose.x), a.pose.y + f * (b.pose.y - a.pose.y),
          wrap_angle(a.pose.heading + f * wrap_angle(b.pose.heading - a.pose.heading))};
}

double Track::arc_at_time(double t) const {
  if (samples_.size() == 1 || t <= start_time()) return sample_arc_.front();
  if (t >= end_time()) return sample_arc_.back();
  const std::size_t k = segment_for(t);
  const double f = (t - samples_[k].t) / (samples_[k + 1].t - samples_[k].t);
  return sample_arc_[k] + f * (sample_arc_[k + 1] - sample_arc_[k]);
}

double Track::speed_at_time(double t, double dt) const {
  if (samples_.front().speed) {
    if (samples_.size() == 1 || t <= start_time()) return *samples_.front().speed;
    if (t >= end_time()) return samples_.back().speed.value_or(0.0);
    const std::size_t k = segment_for(t);
    const TrackSample& a = samples_[k];
    const TrackSample& b = samples_[k + 1];
    if (a.speed && b.speed) {
      const double f = (t - a.t) / (b.t - a.t);
      return f == 0.0 ? *a.speed : *a.speed + f * (*b.speed - *a.speed);
    }
  }
  if (t - dt < start_time()) return std::max(0.0, (arc_at_time(t + dt) - arc_at_time(t)) / dt);
  return std::max(0.0, (arc_at_time(t) - arc_at_time(t - dt)) / dt);
}

void Scenario::validate() const {
  auto fail = [&](const std::string& what) {
    throw DataError("scenario '" + id + "': " + what);
  };
  if (format_version != 1) fail("unsupported format_version");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (horizon < 1) fail("horizon_steps must be at least 1");
  const double t_end = time_at(horizon);
  const double eps = 1e-9;
  std::set<std::string> ids;
  auto check_track = [&](const Track& track) {
    if (track.samples().empty()) fail("vehicle without samples");
    if (!ids.insert(track.id()).second) fail("duplicate vehicle id '" + track.id() + "'");
    if (track.start_time() > eps || track.end_time() < t_end - eps) {
      fail("track '" + track.id() + "' does not cover [0, horizon * dt]");
    }
  };
  check_track(ego);
  for (const Track& a : agents) check_track(a);
  std::set<std::string> seen;
  for (const std::string& f : flagged) {
    if (f == ego.id()) fail("the ego cannot be a flagged agent");
    if (!ids.contains(f)) fail("flagged agent '" + f + "' does not exist");
    if (!seen.insert(f).second) fail("flagged agent '" + f + "' listed twice");
  }
  for (const Polygon& poly : drivable) {
    if (poly.size() < 3) fail("drivable polygon with fewer than 3 vertices");
  }
}

bool Scenario::has_vehicle(const std::string& vid) const {
  if (ego.id() == vid) return true;
  return std::any_of(agents.begin(), agents.end(),
                     [&](const Track& t) { return t.id() == vid; });
}

const Track& Scenario::vehicle(const std::string& vid) const {
  if (ego.id() == vid) return ego;
  for (const Track& t : agents) {
    if (t.id() == vid) return t;
  }
  throw InvalidArgument("scenario '" + id + "' has no vehicle '" + vid + "'");
}

std::vector<std::string> Scenario::nearest_agents(std::size_t m) const {
  const Pose2 e = ego.pose_at_time(0.0);
  std::vector<std::pair<double, std::string>> order;
  order.reserve(agents.size());
  for (const Track& a : agents) {
    const Pose2 p = a.pose_at_time(0.0);
    order.emplace_back(std::hypot(p.x - e.x, p.y - e.y), a.id());
  }
  std::sort(order.begin(), order.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < order.size() && i < m; ++i) out.push_back(order[i].second);
  return out;
}

}  // namespace drf
