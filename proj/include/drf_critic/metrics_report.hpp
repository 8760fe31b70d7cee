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

#include <iosfwd>
#include <string>
#include <vector>

namespace drf {

/// Event counts for one scenario or a scenario set.
struct MetricsReport {
  long collisions_front{0};
  long collisions_rear{0};
  long collisions_side{0};
  long off_road{0};
  long aggressive_driving{0};

  long collisions() const { return collisions_front + collisions_rear + collisions_side; }
  MetricsReport& operator+=(const MetricsReport& other);

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

struct NamedReport {
  std::string scenario_id;
  MetricsReport report;
};

struct AggregateReport {
  MetricsReport total;
  std::vector<NamedReport> breakdown;  // input order
};

AggregateReport aggregate_reports(const std::vector<NamedReport>& reports);

/// Table with Collision (Front, Rear, Side), Imitation (Off-road) and Aggressive
/// driving columns; one row per labelled total.
struct TableRow {
  std::string label;
  MetricsReport report;
};

void write_markdown_table(std::ostream& out, const std::vector<TableRow>& rows);
void write_csv_table(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace drf
