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

#include "drf_critic/metrics_report.hpp"

#include <ostream>

#include "drf_critic/common.hpp"

namespace drf {

MetricsReport& MetricsReport::operator+=(const MetricsReport& other) {
  collisions_front += other.collisions_front;
  collisions_rear += other.collisions_rear;
  collisions_side += other.collisions_side;
  off_road += other.off_road;
  aggressive_driving += other.aggressive_driving;
  return *this;
}

AggregateReport aggregate_reports(const std::vector<NamedReport>& reports) {
  require(!reports.empty(), "aggregate_reports needs at least one report");
  AggregateReport out;
  out.breakdown = reports;
  for (const NamedReport& r : reports) out.total += r.report;
  return out;
}

void write_markdown_table(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "| | Collision Front | Collision Rear | Collision Side | Off-road | Aggressive driving |\n"
      << "|---|---:|---:|---:|---:|---:|\n";
  for (const TableRow& row : rows) {
    const MetricsReport& r = row.report;
    out << "| " << row.label << " | " << r.collisions_front << " | " << r.collisions_rear << " | "
        << r.collisions_side << " | " << r.off_road << " | " << r.aggressive_driving << " |\n";
  }
}

void write_csv_table(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "label,collisions_front,collisions_rear,collisions_side,off_road,aggressive_driving\n";
  for (const TableRow& row : rows) {
    const MetricsReport& r = row.report;
    // Labels are caller-chosen; quote them so commas survive.
    out << '"';
    for (char c : row.label) {
      if (c == '"') out << '"';
      out << c;
    }
    out << "\"," << r.collisions_front << ',' << r.collisions_rear << ',' << r.collisions_side
        << ',' << r.off_road << ',' << r.aggressive_driving << '\n';
  }
}

}  // namespace drf
