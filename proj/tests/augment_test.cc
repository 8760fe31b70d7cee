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

#include "drf_critic/augment.hpp"

#include "drf_critic/synthetic.hpp"
#include "gtest/gtest.h"

namespace drf {
namespace {

Scenario with_rear(double gap, double rear_speed, double lateral = 0.0) {
  Scenario s;
  s.id = "r";
  s.horizon = 30;
  s.drivable = {Polygon{{-100, -4}, {400, -4}, {400, 4}, {-100, 4}}};
  s.ego = synthetic::straight_track("ego", {0, 0, 0}, 10.0, s.dt, s.horizon, 200.0);
  s.agents.push_back(
      synthetic::straight_track("rear", {-gap, lateral, 0}, rear_speed, s.dt, s.horizon, 200.0));
  return s;
}

TEST(DetectRearVehicle, Cases) {
  // Closing in from 15 m behind at 3 m/s relative.
  EXPECT_TRUE(detect_rear_vehicle(with_rear(15.0, 13.0), 0));
  // Falling back.
  EXPECT_FALSE(detect_rear_vehicle(with_rear(15.0, 7.0), 0));
  // Same speed: closing rate 0 is under the threshold.
  EXPECT_FALSE(detect_rear_vehicle(with_rear(15.0, 10.0), 0));
  // Beyond the longitudinal window.
  EXPECT_FALSE(detect_rear_vehicle(with_rear(35.0, 13.0), 0));
  // Adjacent lane.
  EXPECT_FALSE(detect_rear_vehicle(with_rear(15.0, 13.0, 3.5), 0));
  // Ahead rather than behind.
  EXPECT_FALSE(detect_rear_vehicle(with_rear(-15.0, 13.0), 0));
  AugmentPolicy strict;
  strict.min_closing_speed = 3.5;
  EXPECT_FALSE(detect_rear_vehicle(with_rear(15.0, 13.0), 0, strict));
}

TEST(AugmentScenario, NoAgentsMeansUnchanged) {
  Scenario s = with_rear(15.0, 13.0);
  s.agents.clear();
  EXPECT_FALSE(augment_scenario(s).has_value());
  EXPECT_FALSE(augment_scenario(with_rear(15.0, 7.0)).has_value());
}

TEST(AugmentScenario, RewritesEgoAlongTheSamePath) {
  const Scenario s = with_rear(15.0, 13.0);
  const auto aug = augment_scenario(s);
  ASSERT_TRUE(aug.has_value());
  EXPECT_EQ(aug->id, "r#aug1");
  EXPECT_TRUE(aug->augmented);
  EXPECT_NO_THROW(aug->validate());
  ASSERT_EQ(aug->ego.samples().size(), static_cast<std::size_t>(s.horizon) + 1);
  EXPECT_EQ(aug->ego.path().points(), s.ego.path().points());
  EXPECT_EQ(aug->agents.size(), s.agents.size());
  // Every rewritten sample sits on the original path.
  for (const TrackSample& smp : aug->ego.samples()) {
    EXPECT_LT(s.ego.path().distance_to({smp.pose.x, smp.pose.y}), 1e-9);
    ASSERT_TRUE(smp.speed.has_value());
  }
  // The aggressive driver speeds up toward its higher desired speed.
  EXPECT_GT(aug->ego.samples().back().pose.x, s.ego.samples().back().pose.x);
}

TEST(Aggregate, KeepsOrderAndRejectsDuplicates) {
  const Scenario a = with_rear(15.0, 13.0);
  const auto aug = augment_scenario(a);
  ASSERT_TRUE(aug);
  const auto merged = aggregate({a}, {*aug});
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0].id, "r");
  EXPECT_EQ(merged[1].id, "r#aug1");
  EXPECT_THROW(aggregate({a}, {a}), InvalidArgument);
}

TEST(AugmentOnBenchmark, OnlyRearApproachScenariosChange) {
  for (int i = 0; i < 6; ++i) {
    const bool approach = i % 2 == 0;
    const Scenario s = synthetic::following("f" + std::to_string(i), 100 + i, approach);
    EXPECT_EQ(augment_scenario(s).has_value(), approach) << s.id;
  }
}

}  // namespace
}  // namespace drf
