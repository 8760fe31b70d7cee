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

#include <random>
#include <sstream>

#include "drf_critic/common.hpp"
#include "gtest/gtest.h"

namespace drf {
namespace {

MetricsReport random_report(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> n(0, 5);
  std::uniform_int_distribution<long> b(0, 1);
  return {n(rng), n(rng), n(rng), b(rng), b(rng)};
}

TEST(MetricsReport, CollisionsSumTypes) {
  const MetricsReport r{1, 2, 3, 0, 1};
  EXPECT_EQ(r.collisions(), 6);
}

TEST(AggregateReports, TotalIsFieldwiseSum) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NamedReport> in;
    const int count = 1 + trial % 9;
    long front = 0, rear = 0, side = 0, off = 0, aggr = 0;
    for (int k = 0; k < count; ++k) {
      const MetricsReport r = random_report(rng);
      front += r.collisions_front;
      rear += r.collisions_rear;
      side += r.collisions_side;
      off += r.off_road;
      aggr += r.aggressive_driving;
      in.push_back({"s" + std::to_string(k), r});
    }
    const AggregateReport out = aggregate_reports(in);
    EXPECT_EQ(out.total, (MetricsReport{front, rear, side, off, aggr}));
    ASSERT_EQ(out.breakdown.size(), in.size());
    for (std::size_t k = 0; k < in.size(); ++k) EXPECT_EQ(out.breakdown[k].scenario_id, in[k].scenario_id);
  }
}

TEST(AggregateReports, SplitAdditivity) {
  std::mt19937_64 rng(9);
  std::vector<NamedReport> all;
  for (int k = 0; k < 12; ++k) all.push_back({"s" + std::to_string(k), random_report(rng)});
  const std::vector<NamedReport> left(all.begin(), all.begin() + 5);
  const std::vector<NamedReport> right(all.begin() + 5, all.end());
  MetricsReport sum = aggregate_reports(left).total;
  sum += aggregate_reports(right).total;
  EXPECT_EQ(sum, aggregate_reports(all).total);
}

TEST(AggregateReports, RejectsEmpty) { EXPECT_THROW(aggregate_reports({}), InvalidArgument); }

TEST(Tables, MarkdownAndCsv) {
  const std::vector<TableRow> rows{{"Cautious", {1, 0, 2, 0, 0}}, {"a,b", {0, 0, 0, 1, 1}}};
  std::ostringstream md;
  write_markdown_table(md, rows);
  EXPECT_NE(md.str().find("| Cautious | 1 | 0 | 2 | 0 | 0 |"), std::string::npos);
  std::ostringstream csv;
  write_csv_table(csv, rows);
  EXPECT_NE(csv.str().find("\"a,b\",0,0,0,1,1\n"), std::string::npos);
}

}  // namespace
}  // namespace drf
