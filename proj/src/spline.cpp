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

#include "drf_critic/spline.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace drf::spline {

KnotVector::KnotVector(std::vector<double> knots, int degree, int count)
    : knots_(std::move(knots)), degree_(degree), count_(count) {
  require(degree_ >= 0, "spline degree must be non-negative");
  require(count_ >= degree_ + 1, "spline needs at least degree + 1 control points");
  require(knots_.size() == static_cast<std::size_t>(count_ + degree_ + 1),
          "knot count must equal n + d + 1");
  require(std::is_sorted(knots_.begin(), knots_.end()), "knots must be non-decreasing");
  for (int i = 0; i <= degree_; ++i) {
    require(knots_[i] == knots_.front() && knots_[knots_.size() - 1 - i] == knots_.back(),
            "knot vector must be clamped (first and last d + 1 knots equal)");
  }
  require(knots_.back() > knots_.front(), "knot range must be non-empty");
}

KnotVector make_clamped_knots(int n, int d, double horizon) {
  if (n < d + 1) {
    std::ostringstream msg;
    msg << "underdetermined spline: n = " << n << " < d + 1 = " << d + 1;
    throw InvalidArgument(msg.str());
  }
  require(horizon > 0.0 && std::isfinite(horizon), "spline horizon must be positive");
  const int m = n + d + 1;
  const int spans = n - d;
  std::vector<double> knots(m);
  for (int i = 0; i < m; ++i) {
    if (i <= d) {
      knots[i] = 0.0;
    } else if (i >= n) {
      knots[i] = horizon;
    } else {
      knots[i] = horizon * static_cast<double>(i - d) / static_cast<double>(spans);
    }
  }
  return KnotVector(std::move(knots), d, n);
}

namespace {

// Index of the last knot span [u_j, u_{j+1}) with u_j < u_{j+1}.
int last_nonempty_span(const std::vector<double>& u) {
  for (int j = static_cast<int>(u.size()) - 2; j >= 0; --j) {
    if (u[j] < u[j + 1]) return j;
  }
  return -1;
}

double cox_de_boor(int i, int d, double u, const std::vector<double>& knots, int last_span) {
  if (d == 0) {
    if (knots[i] <= u && u < knots[i + 1]) return 1.0;
    return (u == knots.back() && i == last_span) ? 1.0 : 0.0;
  }
  double left = 0.0;
  const double left_den = knots[i + d] - knots[i];
  if (left_den != 0.0) {
    left = (u - knots[i]) / left_den * cox_de_boor(i, d - 1, u, knots, last_span);
  }
  double right = 0.0;
  const double right_den = knots[i + d + 1] - knots[i + 1];
  if (right_den != 0.0) {
    right = (knots[i + d + 1] - u) / right_den * cox_de_boor(i + 1, d - 1, u, knots, last_span);
  }
  return left + right;
}

void require_in_range(double u, const KnotVector& knots) {
  if (!knots.contains(u)) {
    std::ostringstream msg;
    msg << "spline parameter " << u << " outside [" << knots.front() << ", " << knots.back()
        << "]";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

double basis_value(int i, int d, double u, const KnotVector& knots) {
  require(i >= 0 && i < knots.count(), "basis index out of range");
  require(d == knots.degree(), "basis degree must match the knot vector");
  require_in_range(u, knots);
  return cox_de_boor(i, d, u, knots.knots(), last_nonempty_span(knots.knots()));
}

std::vector<double> basis_values(double u, const KnotVector& knots) {
  require_in_range(u, knots);
  const int last = last_nonempty_span(knots.knots());
  std::vector<double> out(knots.count());
  for (int i = 0; i < knots.count(); ++i) {
    out[i] = cox_de_boor(i, knots.degree(), u, knots.knots(), last);
  }
  return out;
}

CoefficientMatrix::CoefficientMatrix(int n) : values_(Eigen::Matrix3Xd::Zero(3, n)) {
  require(n > 0, "coefficient matrix needs at least one column");
}

CoefficientMatrix::CoefficientMatrix(Eigen::Matrix3Xd values) : values_(std::move(values)) {
  require(values_.cols() > 0, "coefficient matrix needs at least one column");
  require(values_.allFinite(), "coefficient matrix entries must be finite");
}

std::vector<double> CoefficientMatrix::row_major() const {
  std::vector<double> flat;
  flat.reserve(3 * values_.cols());
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < values_.cols(); ++c) flat.push_back(values_(r, c));
  }
  return flat;
}

CoefficientMatrix CoefficientMatrix::from_row_major(std::span<const double> flat, int n) {
  require(n > 0 && flat.size() == static_cast<std::size_t>(3 * n),
          "row-major action must hold exactly 3 * n values");
  Eigen::Matrix3Xd m(3, n);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = flat[r * n + c];
  }
  return CoefficientMatrix(std::move(m));
}

SplineCurve::SplineCurve(KnotVector knots, CoefficientMatrix coefficients)
    : knots_(std::move(knots)), coefficients_(std::move(coefficients)) {
  require(coefficients_.cols() == knots_.count(),
          "coefficient column count must equal the knot vector's n");
}

Pose2 evaluate(const SplineCurve& curve, double u) {
  const std::vector<double> b = basis_values(u, curve.knots());
  const auto& a = curve.coefficients().values();
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  for (int i = 0; i < curve.knots().count(); ++i) {
    x += a(0, i) * b[i];
    y += a(1, i) * b[i];
    theta += a(2, i) * b[i];
  }
  return {x, y, wrap_angle(theta)};
}

FitResult fit(std::span<const Waypoint> waypoints, int n, int d, double horizon) {
  KnotVector knots = make_clamped_knots(n, d, horizon);
  const auto count = static_cast<int>(waypoints.size());
  if (count < n) {
    std::ostringstream msg;
    msg << "spline fit needs at least n = " << n << " waypoints, got " << count;
    throw InvalidArgument(msg.str());
  }
  for (int k = 1; k < count; ++k) {
    require(waypoints[k].t > waypoints[k - 1].t, "waypoint times must be strictly increasing");
  }
  const double t0 = waypoints.front().t;
  const double span = waypoints.back().t - t0;

  Eigen::MatrixXd basis(count, n);
  Eigen::MatrixXd rhs(count, 3);
  double theta = waypoints.front().pose.heading;
  for (int k = 0; k < count; ++k) {
    const double u =
        span > 0.0 ? std::clamp((waypoints[k].t - t0) / span * horizon, 0.0, horizon) : 0.0;
    const std::vector<double> b = basis_values(u, knots);
    for (int i = 0; i < n; ++i) basis(k, i) = b[i];
    if (k > 0) theta = unwrap_near(waypoints[k].pose.heading, theta);
    rhs(k, 0) = waypoints[k].pose.x;
    rhs(k, 1) = waypoints[k].pose.y;
    rhs(k, 2) = theta;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  if (qr.rank() < n) {
    std::ostringstream msg;
    msg << "rank-deficient spline fit: basis rank " << qr.rank() << " < n = " << n
        << " (waypoints do not spread over enough knot spans)";
    throw InvalidArgument(msg.str());
  }
  const Eigen::MatrixXd solution = qr.solve(rhs);  // n x 3
  const double residual = (basis * solution - rhs).squaredNorm();
  return {SplineCurve(std::move(knots), CoefficientMatrix(Eigen::Matrix3Xd(solution.transpose()))),
          residual};
}

double coefficient_loss(const CoefficientMatrix& predicted, const CoefficientMatrix& reference) {
  if (predicted.cols() != reference.cols()) {
    std::ostringstream msg;
    msg << "coefficient shape mismatch: 3x" << predicted.cols() << " vs 3x" << reference.cols();
    throw InvalidArgument(msg.str());
  }
  double loss = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < predicted.cols(); ++c) {
      loss += std::abs(predicted(r, c) - reference(r, c));
    }
  }
  return loss;
}

}  // namespace drf::spline
