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

#include "drf_critic/grid.hpp"

#include <cmath>

namespace drf {

GridGeometry GridGeometry::covering(double xmin, double ymin, double xmax, double ymax,
                                    double resolution) {
  require(resolution > 0.0 && std::isfinite(resolution), "grid resolution must be positive");
  require(xmax >= xmin && ymax >= ymin, "grid extent must be non-negative");
  GridGeometry g;
  g.resolution = resolution;
  g.origin_ix = static_cast<std::int64_t>(std::floor(xmin / resolution));
  g.origin_iy = static_cast<std::int64_t>(std::floor(ymin / resolution));
  const auto last_ix = static_cast<std::int64_t>(std::ceil(xmax / resolution));
  const auto last_iy = static_cast<std::int64_t>(std::ceil(ymax / resolution));
  g.width = static_cast<int>(last_ix - g.origin_ix + 1);
  g.height = static_cast<int>(last_iy - g.origin_iy + 1);
  return g;
}

bool GridGeometry::contains_point(double x, double y) const {
  const double half = 0.5 * resolution;
  return x >= origin_x() - half && x <= cell_x(width - 1) + half && y >= origin_y() - half &&
         y <= cell_y(height - 1) + half;
}

void GridGeometry::validate() const {
  require(resolution > 0.0 && std::isfinite(resolution), "grid resolution must be positive");
  require(width > 0 && height > 0, "grid must have at least one cell");
}

Grid::Grid(GridGeometry geometry, double fill) : geometry_(geometry) {
  geometry_.validate();
  values_.assign(geometry_.cell_count(), fill);
}

}  // namespace drf
