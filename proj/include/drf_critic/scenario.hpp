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

#include <optional>
#include <string>
#include <vector>

#include "drf_critic/common.hpp"

namespace drf {

/// Piecewise-linear path parameterised by arc length. Consecutive duplicate
/// points are dropped; a path with a single distinct point has zero length.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> points, double fallback_heading = 0.0);

  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<double>& arc() const { return arc_; }
  double length() const { return arc_.empty() ? 0.0 : arc_.back(); }

  /// Pose at arc length s (clamped to the path). Heading comes from the segment
  /// ahead of s, or the last segment at the very end.
  Pose2 pose_at(double s) const;
  /// Arc length of the closest point on the path.
  double project(Vec2 p) const;
  /// Euclidean distance from p to the closest point on the path.
  double distance_to(Vec2 p) const;
  /// Heading change per metre measured over [s - half_window, s + half_window].
  double curvature_at(double s, double half_window) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> arc_;
  double fallback_heading_{0.0};
};

struct TrackSample {
  double t{0.0};
  Pose2 pose;
  std::optional<double> speed;  // m/s; finite differences are used when absent
};

/// Recorded trajectory of one vehicle.
class Track {
 public:
  Track() = default;
  /// `path` overrides the geometric path (defaults to the sample polyline); sample
  /// arc positions are then projections onto it.
  Track(std::string id, double length, double width, std::vector<TrackSample> samples,
        std::optional<std::vector<Vec2>> path = std::nullopt, double wheelbase = 2.85);

  const std::string& id() const { return id_; }
  double length() const { return length_; }
  double width() const { return width_; }
  double wheelbase() const { return wheelbase_; }
  const std::vector<TrackSample>& samples() const { return samples_; }
  const Polyline& path() const { return path_; }
  bool has_explicit_path() const { return explicit_path_; }
  /// Cumulative arc length of each sample along path().
  const std::vector<double>& sample_arc() const { return sample_arc_; }

  double start_time() const { return samples_.front().t; }
  double end_time() const { return samples_.back().t; }
  /// Linear interpolation in time (shortest-angle for heading); clamps outside the record.
  Pose2 pose_at_time(double t) const;
  double arc_at_time(double t) const;
  /// Recorded speed, or the arc-length difference over the preceding `dt`
  /// (the following `dt` at the start of the record).
  double speed_at_time(double t, double dt) const;

 private:
  std::size_t segment_for(double t) const;

  std::string id_;
  double length_{4.5};
  double width_{1.8};
  double wheelbase_{2.85};
  std::vector<TrackSample> samples_;
  Polyline path_;
  bool explicit_path_{false};
  std::vector<double> sample_arc_;
};

/// One simulation unit: static map plus the ego and agent recordings.
struct Scenario {
  std::string id;
  int format_version{1};
  double dt{0.1};
  int horizon{40};  // steps; the rollout produces horizon + 1 states
  std::vector<Polygon> drivable;
  Track ego;
  std::vector<Track> agents;
  std::vector<std::string> flagged;  // agents controlled by the critical-scenario search
  bool augmented{false};

  double time_at(int step) const { return static_cast<double>(step) * dt; }
  /// Throws DataError on any violated invariant.
  void validate() const;
  bool has_vehicle(const std::string& id) const;
  const Track& vehicle(const std::string& id) const;
  /// Agent ids ordered by distance to the ego at t = 0 (ties by id), at most m.
  std::vector<std::string> nearest_agents(std::size_t m) const;
};

}  // namespace drf
