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

#include "drf_critic/synthetic.hpp"
#include "gtest/gtest.h"

namespace drf {
namespace {

TEST(Polyline, ArcLengthAndPose) {
  const Polyline p({{0, 0}, {3, 0}, {3, 4}});
  EXPECT_EQ(p.length(), 7.0);
  const Pose2 a = p.pose_at(1.5);
  EXPECT_EQ(a.x, 1.5);
  EXPECT_EQ(a.heading, 0.0);
  const Pose2 b = p.pose_at(5.0);
  EXPECT_NEAR(b.y, 2.0, 1e-12);
  EXPECT_NEAR(b.heading, kPi / 2, 1e-12);
  EXPECT_EQ(p.pose_at(100.0).y, 4.0);
}

TEST(Polyline, DropsDuplicatesAndProjects) {
  const Polyline p({{0, 0}, {0, 0}, {10, 0}});
  EXPECT_EQ(p.points().size(), 2u);
  EXPECT_NEAR(p.project({4, 3}), 4.0, 1e-12);
  EXPECT_NEAR(p.distance_to({4, 3}), 3.0, 1e-12);
  EXPECT_NEAR(p.distance_to({-3, -4}), 5.0, 1e-12);
}

TEST(Polyline, CurvatureOfStraightAndArc) {
  EXPECT_EQ(Polyline({{0, 0}, {50, 0}}).curvature_at(10, 2), 0.0);
  std::vector<Vec2> arc;
  const double r = 20.0;
  for (int k = 0; k <= 200; ++k) {
    const double a = 0.005 * k;
    arc.push_back({r * std::sin(a), r - r * std::cos(a)});
  }
  EXPECT_NEAR(Polyline(arc).curvature_at(10.0, 2.0), 1.0 / r, 1e-3);
}

TEST(Track, InterpolationAndSpeed) {
  const Track t("a", 4.5, 1.8,
                {{0.0, {0, 0, 0}, std::nullopt}, {1.0, {10, 0, 0}, std::nullopt},
                 {2.0, {20, 0, 0}, std::nullopt}});
  EXPECT_NEAR(t.pose_at_time(0.25).x, 2.5, 1e-12);
  EXPECT_NEAR(t.arc_at_time(1.5), 15.0, 1e-12);
  EXPECT_NEAR(t.speed_at_time(1.5, 0.5), 10.0, 1e-12);
  EXPECT_NEAR(t.speed_at_time(0.0, 0.5), 10.0, 1e-12);
  EXPECT_EQ(t.pose_at_time(5.0).x, 20.0);
}

TEST(Track, HeadingInterpolatesTheShortWay) {
  const Track t("a", 4.5, 1.8, {{0.0, {0, 0, 3.0}, 1.0}, {1.0, {0, 1, -3.0}, 1.0}});
  const double h = t.pose_at_time(0.5).heading;
  EXPECT_NEAR(std::abs(h), kPi, 1e-9);
}

TEST(Track, RecordedSpeedWins) {
  const Track t("a", 4.5, 1.8, {{0.0, {0, 0, 0}, 2.0}, {1.0, {10, 0, 0}, 4.0}});
  EXPECT_NEAR(t.speed_at_time(0.5, 0.1), 3.0, 1e-12);
}

TEST(Track, RejectsBadSamples) {
  EXPECT_THROW(Track("a", 4.5, 1.8, {}), DataError);
  EXPECT_THROW(Track("a", 4.5, 1.8, {{1.0, {}, 1.0}, {1.0, {}, 1.0}}), DataError);
  EXPECT_THROW(Track("a", 4.5, 1.8, {{0.0, {}, -1.0}}), DataError);
  EXPECT_THROW(Track("a", 0.0, 1.8, {{0.0, {}, 1.0}}), DataError);
}

TEST(Track, ExplicitPathProjection) {
  const Track t("a", 4.5, 1.8, {{0.0, {5, 0, 0}, 1.0}, {1.0, {6, 0, 0}, 1.0}},
                std::vector<Vec2>{{0, 0}, {100, 0}});
  EXPECT_TRUE(t.has_explicit_path());
  EXPECT_NEAR(t.sample_arc()[0], 5.0, 1e-12);
  EXPECT_NEAR(t.arc_at_time(0.5), 5.5, 1e-12);
}

TEST(Scenario, ValidationCatchesInvariants) {
  Scenario s = synthetic::corridor("c", 30.0, 10.0);
  EXPECT_NO_THROW(s.validate());
  Scenario bad = s;
  bad.horizon = 100;
  EXPECT_THROW(bad.validate(), DataError);
  bad = s;
  bad.flagged = {"ego"};
  EXPECT_THROW(bad.validate(), DataError);
  bad = s;
  bad.flagged = {"nobody"};
  EXPECT_THROW(bad.validate(), DataError);
  bad = s;
  bad.agents.push_back(bad.agents.front());
  EXPECT_THROW(bad.validate(), DataError);
  bad = s;
  bad.drivable.push_back({{0, 0}, {1, 1}});
  EXPECT_THROW(bad.validate(), DataError);
}

TEST(Scenario, NearestAgentsOrder) {
  const Scenario s = synthetic::intersection("i", 3);
  const auto all = s.nearest_agents(10);
  ASSERT_EQ(all.size(), s.agents.size());
  const Pose2 e = s.ego.pose_at_time(0);
  for (std::size_t k = 1; k < all.size(); ++k) {
    const Pose2 a = s.vehicle(all[k - 1]).pose_at_time(0);
    const Pose2 b = s.vehicle(all[k]).pose_at_time(0);
    EXPECT_LE(std::hypot(a.x - e.x, a.y - e.y), std::hypot(b.x - e.x, b.y - e.y));
  }
  EXPECT_EQ(s.nearest_agents(1).size(), 1u);
  EXPECT_THROW(s.vehicle("nobody"), InvalidArgument);
}

TEST(Synthetic, GeneratorsAreValidAndDeterministic) {
  const auto a = synthetic::benchmark_set("b", 16, 5);
  const auto b = synthetic::benchmark_set("b", 16, 5);
  ASSERT_EQ(a.size(), 16u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NO_THROW(a[i].validate());
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].ego.pose_at_time(1.0), b[i].ego.pose_at_time(1.0));
    for (std::size_t j = 0; j < a[i].agents.size(); ++j) {
      EXPECT_EQ(a[i].agents[j].pose_at_time(2.0), b[i].agents[j].pose_at_time(2.0));
    }
  }
}

}  // namespace
}  // namespace drf
