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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace drf {

/// Thrown when a caller violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown for malformed or inconsistent input data (scenario files, configs).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Planar pose; heading in radians, counter-clockwise from +x.
struct Pose2 {
  double x{0.0};
  double y{0.0};
  double heading{0.0};

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// Simple polygon as an ordered vertex ring (closing edge implied).
using Polygon = std::vector<Vec2>;

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

/// Returns the representative of `a` (mod 2 pi) closest to `reference`.
inline double unwrap_near(double a, double reference) {
  return reference + wrap_angle(a - reference);
}

/// Expresses a world point in the frame of `frame`.
inline Vec2 to_frame(const Pose2& frame, double x, double y) {
  const double c = std::cos(frame.heading);
  const double s = std::sin(frame.heading);
  const double dx = x - frame.x;
  const double dy = y - frame.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

inline Pose2 to_frame(const Pose2& frame, const Pose2& p) {
  const Vec2 v = to_frame(frame, p.x, p.y);
  return {v.x, v.y, wrap_angle(p.heading - frame.heading)};
}

inline Pose2 from_frame(const Pose2& frame, const Pose2& local) {
  const double c = std::cos(frame.heading);
  const double s = std::sin(frame.heading);
  return {frame.x + c * local.x - s * local.y, frame.y + s * local.x + c * local.y,
          wrap_angle(frame.heading + local.heading)};
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace drf
