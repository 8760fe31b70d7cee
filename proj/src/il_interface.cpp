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

#include "drf_critic/il_interface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>
#include <spdlog/spdlog.h>

namespace drf {

namespace {

int label_steps(const Scenario& scenario, const ActionSpec& spec) {
  return static_cast<int>(std::lround(spec.horizon / scenario.dt));
}

}  // namespace

FeatureVector extract_features(const Scenario& scenario, int step, std::size_t m) {
  require(step >= 0, "step must be non-negative");
  if (step + 2 > scenario.horizon) {
    throw InvalidArgument("step " + std::to_string(step) + " leaves no 0.2 s label horizon");
  }
  const Track& ego = scenario.ego;
  const double t = scenario.time_at(step);
  const Pose2 frame = ego.pose_at_time(t);

  FeatureVector f;
  f.reserve(feature_length(m));
  f.push_back(ego.speed_at_time(t, scenario.dt));
  f.push_back(std::atan(ego.wheelbase() * ego.path().curvature_at(ego.arc_at_time(t), 2.0)));
  for (int h = 0; h < 3; ++h) {
    const Pose2 p = to_frame(frame, ego.pose_at_time(scenario.time_at(std::max(step - h, 0))));
    f.insert(f.end(), {p.x, p.y, p.heading});
  }

  struct Near {
    double dist;
    const Track* track;
  };
  std::vector<Near> near;
  for (const Track& a : scenario.agents) {
    const Pose2 p = a.pose_at_time(t);
    near.push_back({std::hypot(p.x - frame.x, p.y - frame.y), &a});
  }
  std::sort(near.begin(), near.end(), [](const Near& a, const Near& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.track->id() < b.track->id();
  });
  for (std::size_t i = 0; i < m; ++i) {
    if (i < near.size()) {
      const Track& a = *near[i].track;
      const Pose2 p = to_frame(frame, a.pose_at_time(t));
      f.insert(f.end(), {p.x, p.y, p.heading, a.speed_at_time(t, scenario.dt)});
    } else {
      f.insert(f.end(), {0.0, 0.0, 0.0, 0.0});
    }
  }
  return f;
}

spline::CoefficientMatrix fit_action(const Scenario& scenario, int step, const ActionSpec& spec) {
  const int steps = label_steps(scenario, spec);
  require(step >= 0 && step + steps <= scenario.horizon, "not enough ground truth for the label");
  const Pose2 frame = scenario.ego.pose_at_time(scenario.time_at(step));
  std::vector<spline::Waypoint> wps;
  for (int j = 0; j <= steps; ++j) {
    const double t = scenario.time_at(step + j);
    wps.push_back({t, to_frame(frame, scenario.ego.pose_at_time(t))});
  }
  return spline::fit(wps, spec.n, spec.d, spec.horizon).curve.coefficients();
}

std::vector<TrainingPair> make_pairs(const Scenario& scenario, int k, std::size_t m,
                                     const ActionSpec& spec) {
  require(k >= 0, "K must be non-negative");
  const int last = scenario.horizon - label_steps(scenario, spec);
  require(k <= last, "K leaves no labelled steps");
  std::vector<TrainingPair> pairs;
  for (int t = k; t <= last; ++t) {
    pairs.push_back({scenario.id, t, extract_features(scenario, t, m),
                     fit_action(scenario, t, spec), spec});
  }
  return pairs;
}

void write_pair(std::ostream& out, const TrainingPair& pair) {
  nlohmann::ordered_json j;
  j["scenario_id"] = pair.scenario_id;
  j["t"] = pair.t;
  j["features"] = pair.features;
  j["action"] = pair.action.row_major();
  j["n"] = pair.spec.n;
  j["d"] = pair.spec.d;
  j["horizon"] = pair.spec.horizon;
  out << j.dump() << '\n';
}

TrainingPair parse_pair(const std::string& line) {
  try {
    const nlohmann::json j = nlohmann::json::parse(line);
    TrainingPair p;
    p.scenario_id = j.at("scenario_id").get<std::string>();
    p.t = j.at("t").get<int>();
    p.features = j.at("features").get<std::vector<double>>();
    p.spec = {j.at("n").get<int>(), j.at("d").get<int>(), j.at("horizon").get<double>()};
    const auto flat = j.at("action").get<std::vector<double>>();
    p.action = spline::CoefficientMatrix::from_row_major(flat, p.spec.n);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed training pair: ") + e.what());
  }
}

std::size_t export_pairs(const std::vector<Scenario>& scenarios, int k, std::size_t m,
                         const std::filesystem::path& output, const ActionSpec& spec) {
  require(k >= 0, "K must be non-negative");
  std::vector<const Scenario*> order;
  for (const Scenario& s : scenarios) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const Scenario* a, const Scenario* b) { return a->id < b->id; });

  std::ofstream out(output, std::ios::binary);
  if (!out) throw DataError("cannot write " + output.string());
  std::size_t count = 0;
  for (const Scenario* s : order) {
    std::vector<TrainingPair> pairs;
    try {
      s->validate();
      pairs = make_pairs(*s, k, m, spec);
    } catch (const std::exception& e) {
      spdlog::warn("skipping scenario '{}': {}", s->id, e.what());
      continue;
    }
    for (const TrainingPair& p : pairs) write_pair(out, p);
    count += pairs.size();
  }
  out.flush();
  if (!out) throw DataError("failed while writing " + output.string());
  return count;
}

}  // namespace drf
