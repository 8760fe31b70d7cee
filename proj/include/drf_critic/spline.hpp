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

#include <Eigen/Core>
#include <span>
#include <vector>

#include "drf_critic/common.hpp"

/// Clamped B-splines over SE(2) trajectories, used as the imitation-learning
/// action representation (a 3 x n control-point matrix).
namespace drf::spline {

class KnotVector {
 public:
  /// Validates: non-decreasing, size == count + degree + 1, clamped ends.
  KnotVector(std::vector<double> knots, int degree, int count);

  const std::vector<double>& knots() const { return knots_; }
  int degree() const { return degree_; }
  int count() const { return count_; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  bool contains(double u) const { return u >= front() && u <= back(); }

 private:
  std::vector<double> knots_;
  int degree_;
  int count_;
};

/// Uniform clamped knot vector on [0, horizon] with n control points.
KnotVector make_clamped_knots(int n, int d, double horizon);

/// Cox-de Boor recursion for basis function `i` (zero-based) of degree `d`,
/// with the 0/0 := 0 convention. The right end of the knot range belongs to the
/// last non-empty span so that the clamped curve interpolates its last point.
double basis_value(int i, int d, double u, const KnotVector& knots);

/// All n basis values at u (same convention as basis_value).
std::vector<double> basis_values(double u, const KnotVector& knots);

/// Rows are x [m], y [m], theta [rad]; one column per control point.
class CoefficientMatrix {
 public:
  explicit CoefficientMatrix(int n);
  explicit CoefficientMatrix(Eigen::Matrix3Xd values);

  int cols() const { return static_cast<int>(values_.cols()); }
  double operator()(int row, int col) const { return values_(row, col); }
  double& operator()(int row, int col) { return values_(row, col); }
  const Eigen::Matrix3Xd& values() const { return values_; }

  /// Row-major flattening: x row, then y row, then theta row.
  std::vector<double> row_major() const;
  static CoefficientMatrix from_row_major(std::span<const double> flat, int n);

 private:
  Eigen::Matrix3Xd values_;
};

class SplineCurve {
 public:
  SplineCurve(KnotVector knots, CoefficientMatrix coefficients);

  const KnotVector& knots() const { return knots_; }
  const CoefficientMatrix& coefficients() const { return coefficients_; }

 private:
  KnotVector knots_;
  CoefficientMatrix coefficients_;
};

/// Basis-weighted sum of each coefficient row; theta is re-wrapped to (-pi, pi].
Pose2 evaluate(const SplineCurve& curve, double u);

struct Waypoint {
  double t{0.0};
  Pose2 pose;
};

struct FitResult {
  SplineCurve curve;
  /// Sum of squared residuals over x, y and unwrapped theta.
  double residual{0.0};
};

/// Least-squares fit. Waypoint times are mapped linearly onto [0, horizon];
/// headings are unwrapped onto one continuous branch (starting from the first
/// waypoint's heading) before fitting.
FitResult fit(std::span<const Waypoint> waypoints, int n, int d, double horizon);

/// Sum of absolute element-wise differences.
double coefficient_loss(const CoefficientMatrix& predicted, const CoefficientMatrix& reference);

}  // namespace drf::spline
