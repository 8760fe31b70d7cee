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

#include "drf_critic/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "drf_critic/synthetic.hpp"
#include "gtest/gtest.h"

namespace drf {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("drf_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Round9, NineSignificantDigits) {
  EXPECT_EQ(io::round9(1.23456789012), 1.23456789);
  EXPECT_EQ(io::round9(0.1 + 0.2), 0.3);
  EXPECT_EQ(io::round9(-98765.4321987), -98765.4322);
  EXPECT_TRUE(std::isinf(io::round9(INFINITY)));
}

TEST(ScenarioJson, RoundTripIsExact) {
  Scenario s = synthetic::intersection("x", 8);
  s.ego = Track("ego", 4.6, 1.9,
                {{0.0, {0.1, 0.2, 0.3}, std::nullopt}, {2.0, {5.0, 0.2, 0.3}, 1.0 / 3.0},
                 {4.0, {9.0, 0.3, 0.31}, 2.5}},
                std::nullopt, 2.9);
  s.augmented = true;
  const Scenario r = io::scenario_from_json(io::scenario_to_json(s));
  EXPECT_EQ(r.id, s.id);
  EXPECT_EQ(r.horizon, s.horizon);
  EXPECT_EQ(r.flagged, s.flagged);
  EXPECT_TRUE(r.augmented);
  EXPECT_EQ(r.drivable, s.drivable);
  EXPECT_EQ(r.ego.wheelbase(), 2.9);
  ASSERT_EQ(r.ego.samples().size(), 3u);
  EXPECT_FALSE(r.ego.samples()[0].speed.has_value());
  EXPECT_EQ(*r.ego.samples()[1].speed, 1.0 / 3.0);
  EXPECT_FALSE(r.ego.has_explicit_path());
  ASSERT_EQ(r.agents.size(), s.agents.size());
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    EXPECT_TRUE(r.agents[i].has_explicit_path());
    EXPECT_EQ(r.agents[i].path().points(), s.agents[i].path().points());
    EXPECT_EQ(r.agents[i].samples()[17].pose, s.agents[i].samples()[17].pose);
  }
}

TEST(ScenarioJson, FileErrorsNameThePath) {
  const fs::path dir = temp_dir("errors");
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{\"format_version\": 1, \"id\": \"x\"}";
  try {
    io::read_scenario(bad);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
  EXPECT_THROW(io::read_scenario(dir / "missing.json"), DataError);
  std::ofstream(bad) << "not json";
  EXPECT_THROW(io::read_scenario(bad), DataError);
  fs::remove_all(dir);
}

TEST(ScenarioJson, RejectsUnknownVersion) {
  io::Json j = io::scenario_to_json(synthetic::corridor("c", 30, 10));
  j["format_version"] = 2;
  EXPECT_THROW(io::scenario_from_json(j), DataError);
}

TEST(ScenarioFiles, SortedJsonOnly) {
  const fs::path dir = temp_dir("files");
  io::write_scenario(dir / "b.json", synthetic::corridor("b", 30, 10));
  io::write_scenario(dir / "a.json", synthetic::corridor("a", 30, 10));
  std::ofstream(dir / "notes.txt") << "x";
  const auto files = io::scenario_files(dir);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "a.json");
  EXPECT_EQ(io::read_scenario(files[1]).id, "b");
  fs::remove_all(dir);
}

TEST(MetricsJson, RoundTrip) {
  const MetricsReport m{1, 2, 3, 1, 0};
  EXPECT_EQ(io::metrics_from_json(io::metrics_to_json(m)), m);
}

TEST(DriverParamsJson, RoundTripAndRequiredKeys) {
  const DriverParams p = StyleLibrary::defaults().aggressive;
  const io::Json j = io::driver_params_to_json(p);
  EXPECT_EQ(io::driver_params_from_json(j), p);
  io::Json missing = j;
  missing.erase("k_v");
  EXPECT_THROW(io::driver_params_from_json(missing), DataError);
}

TEST(Bounds, UnlistedStayFrozen) {
  const DriverParams p;
  const Bounds b = io::bounds_from_json(io::Json::parse(R"({"v_des": [5, 20]})"), p);
  EXPECT_FALSE(b[8].frozen());
  EXPECT_EQ(b[8].lo, 5.0);
  EXPECT_TRUE(b[9].frozen());
  EXPECT_EQ(b[9].lo, 9000.0);
  EXPECT_THROW(io::bounds_from_json(io::Json::parse(R"({"zeta": [0, 1]})"), p), DataError);
}

TEST(Toml, Subset) {
  const io::Json j = io::parse_toml_subset(
      "# comment\nworkers = 4\nego = \"drf\" # trailing\n[bounds]\nv_des = [5.0, 20]\n"
      "flag = true\n");
  EXPECT_EQ(j["workers"].get<int>(), 4);
  EXPECT_EQ(j["ego"].get<std::string>(), "drf");
  EXPECT_EQ(j["bounds"]["v_des"][0].get<double>(), 5.0);
  EXPECT_EQ(j["bounds"]["v_des"][1].get<double>(), 20.0);
  EXPECT_TRUE(j["bounds"]["flag"].get<bool>());
  EXPECT_THROW(io::parse_toml_subset("x = @"), DataError);
  EXPECT_THROW(io::parse_toml_subset("just words"), DataError);
}

TEST(RolloutJsonl, ErrorMarkerLine) {
  RolloutLog log;
  log.scenario_id = "s";
  log.horizon = 3;
  StepRecord r;
  r.ego = {"ego", {1, 2, 0}, 3.0, 0.0};
  log.steps.push_back(r);
  log.error = "boom";
  std::ostringstream out;
  io::write_rollout_jsonl(out, log);
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(io::Json::parse(lines[1])["error"].get<std::string>(), "boom");
}

TEST(ExternalActionsFile, FiltersByScenario) {
  const fs::path dir = temp_dir("actions");
  const fs::path path = dir / "a.jsonl";
  {
    std::ofstream out(path);
    out << R"({"scenario_id":"other","t":0,"action":[0,0,0,0,0,0,0,0,0],"n":3,"d":2,"horizon":0.2})"
        << "\n"
        << R"({"scenario_id":"c","step":0,"action":[0,1,2,0,0,0,0,0,0],"n":3,"d":2,"horizon":0.2})"
        << "\n";
  }
  const auto policy = io::read_external_actions(path, "c");
  const Scenario s = synthetic::corridor("c", 50, 10, 2);
  const RolloutLog log = rollout(s, *policy, {});
  // Step 1 comes from the action; step 2 has none and aborts.
  ASSERT_EQ(log.steps.size(), 2u);
  EXPECT_NEAR(log.steps[1].ego.pose.x, 1.0, 1e-12);
  EXPECT_TRUE(log.error.has_value());
  fs::remove_all(dir);
}

}  // namespace
}  // namespace drf
