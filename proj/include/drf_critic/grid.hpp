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
#include <optional>
#include <vector>

#include "drf_critic/common.hpp"

namespace drf {

/// Geometry of a rectangular grid on the global lattice of a given resolution.
/// Cell (i, j) is centred at ((origin_ix + i) * resolution, (origin_iy + j) * resolution),
/// so two grids with the same resolution address identical cell centres bit for bit.
struct GridGeometry {
  double resolution{0.5};
  std::int64_t origin_ix{0};
  std::int64_t origin_iy{0};
  int width{0};
  int height{0};

  /// Smallest lattice-aligned grid whose cell centres cover [xmin, xmax] x [ymin, ymax].
  static GridGeometry covering(double xmin, double ymin, double xmax, double ymax,
                               double resolution);

  double origin_x() const { return static_cast<double>(origin_ix) * resolution; }
  double origin_y() const { return static_cast<double>(origin_iy) * resolution; }
  double cell_x(int i) const { return static_cast<double>(origin_ix + i) * resolution; }
  double cell_y(int j) const { return static_cast<double>(origin_iy + j) * resolution; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool contains_point(double x, double y) const;

  void validate() const;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Dense row-major scalar grid: value(i, j) lives at index j * width + i.
class Grid {
 public:
  explicit Grid(GridGeometry geometry, double fill = 0.0);

  const GridGeometry& geometry() const { return geometry_; }
  double at(int i, int j) const { return values_[index(i, j)]; }
  double& at(int i, int j) { return values_[index(i, j)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(geometry_.width) +
           static_cast<std::size_t>(i);
  }

  GridGeometry geometry_;
  std::vector<double> values_;
};

}  // namespace drf
