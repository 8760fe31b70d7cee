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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drf_critic/augment.hpp"
#include "drf_critic/cli.hpp"
#include "drf_critic/costmap.hpp"
#include "drf_critic/il_interface.hpp"
#include "drf_critic/io.hpp"
#include "drf_critic/scenario_gen.hpp"
#include "drf_critic/simulator.hpp"
#include "drf_critic/spline.hpp"
#include "drf_critic/synthetic.hpp"

namespace fs = std::filesystem;
using namespace drf;

namespace {

struct Outcome {
  bool pass{false};
  std::string detail;
};

int failures = 0;

std::vector<std::string> only;

void run(const char* name, double limit_s, const std::function<Outcome()>& body) {
  if (!only.empty() &&
      std::none_of(only.begin(), only.end(), [&](const std::string& o) {
        return std::string(name).rfind(o + " ", 0) == 0;
      })) {
    return;
  }
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %s (%.3f s, limit %.0f s%s) %s\n", name, pass ? "PASS" : "FAIL", secs, limit_s,
              in_time ? "" : ", too slow", o.detail.c_str());
  std::fflush(stdout);
}

std::string show(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- AC1: spline basis --------------------------------------------------------

Outcome ac1() {
  const spline::KnotVector knots = spline::make_clamped_knots(3, 2, 0.2);
  const std::vector<double> expect_knots{0, 0, 0, 0.2, 0.2, 0.2};
  if (knots.knots() != expect_knots) return {false, "unexpected knot vector"};
  double unity = 0.0;
  double bernstein = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double u = 0.2 * k / 999.0;
    const std::vector<double> b = spline::basis_values(u, knots);
    unity = std::max(unity, std::abs(b[0] + b[1] + b[2] - 1.0));
    // Single-span clamped quadratic is the Bernstein basis of s = u / 0.2.
    const double s = u / 0.2;
    const double ref[3] = {(1 - s) * (1 - s), 2 * s * (1 - s), s * s};
    for (int i = 0; i < 3; ++i) {
      bernstein = std::max(bernstein, std::abs(b[i] - ref[i]));
      bernstein = std::max(bernstein, std::abs(spline::basis_value(i, 2, u, knots) - ref[i]));
    }
  }
  // Endpoint interpolation on random control points.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  double ends = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix3Xd m(3, 3);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m(r, c) = r == 2 ? 0.5 * d(rng) / 10.0 * kPi : d(rng);
    }
    const spline::SplineCurve curve(knots, spline::CoefficientMatrix(m));
    const Pose2 a = spline::evaluate(curve, 0.0);
    const Pose2 b = spline::evaluate(curve, 0.2);
    ends = std::max({ends, std::abs(a.x - m(0, 0)), std::abs(a.y - m(1, 0)),
                     std::abs(a.heading - m(2, 0)), std::abs(b.x - m(0, 2)),
                     std::abs(b.y - m(1, 2)), std::abs(b.heading - m(2, 2))});
  }
  const bool ok = unity < 1e-12 && bernstein < 1e-12 && ends < 1e-12;
  return {ok, show("unity %.3g, bernstein %.3g, endpoints %.3g", unity, bernstein, ends)};
}

// ---- AC2: perceived risk vs brute force ---------------------------------------

Outcome ac2() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int mismatches = 0;
  int nonzero = 0;
  for (int trial = 0; trial < 100; ++trial) {
    GridGeometry g;
    g.resolution = 0.5;
    g.origin_ix = static_cast<std::int64_t>(std::floor(40 * u(rng)));
    g.origin_iy = static_cast<std::int64_t>(std::floor(40 * u(rng)));
    g.width = 64;
    g.height = 64;
    const double cx = g.cell_x(32);
    const double cy = g.cell_y(32);
    VehicleState st;
    st.x = cx - 12.0 + 4.0 * u(rng);
    st.y = cy + 6.0 * u(rng);
    st.heading = 0.4 * u(rng);
    st.speed = 2.0 + 8.0 * (0.5 + 0.5 * u(rng));
    st.steering = trial % 5 == 0 ? 0.0 : 0.35 * u(rng);
    const RiskField field = build_field(st, DrfParams::identified(), g);
    std::vector<Footprint> obs;
    for (int k = 0; k < 6; ++k) {
      obs.emplace_back(Pose2{cx + 14 * u(rng), cy + 14 * u(rng), kPi * u(rng)}, 4.5, 1.8);
    }
    const std::vector<Polygon> road{Polygon{{cx - 40, cy - 4 + 2 * u(rng)},
                                            {cx + 40, cy - 4 + 2 * u(rng)},
                                            {cx + 40, cy + 4 + 2 * u(rng)},
                                            {cx - 40, cy + 4 + 2 * u(rng)}}};
    const CostMap cost = rasterize(road, obs, g);
    double brute = 0.0;
    for (int j = 0; j < g.height; ++j) {
      for (int i = 0; i < g.width; ++i) brute += field.grid.at(i, j) * cost.grid.at(i, j);
    }
    const double got = perceived_risk(field, cost);
    if (got != brute) ++mismatches;
    if (brute > 0.0) ++nonzero;
  }
  return {mismatches == 0 && nonzero > 50,
          show("mismatches %.0f / 100, pairs with nonzero risk %.0f", mismatches, nonzero)};
}

// ---- AC3: corridor ------------------------------------------------------------

Outcome ac3() {
  const Scenario s = synthetic::corridor("corridor", 75.0, 13.5, 80);
  const ControllerParams ctrl;  // identified values
  const DrfParams drf = DrfParams::identified();
  const bool table = drf.steepness == 0.06 && drf.lookahead_time == 4.0 &&
                     drf.safety_distance == 12.0 && drf.base_width == 0.5 &&
                     drf.inner_gain == 0.0 && drf.outer_gain == 1.12 && ctrl.gain == 0.025 &&
                     ctrl.desired_speed == 13.5 && ctrl.risk_threshold == 9000.0;
  const RolloutLog log = rollout(s, DrfEgo(drf, ctrl), {});
  if (!log.complete()) return {false, "rollout incomplete"};
  int first_cross = -1;
  double max_after = 0.0;
  double max_risk = 0.0;
  double min_v = INFINITY;
  for (const StepRecord& r : log.steps) {
    min_v = std::min(min_v, r.ego.speed);
    max_risk = std::max(max_risk, r.ego_risk);
    if (first_cross < 0 && r.ego_risk >= ctrl.risk_threshold) first_cross = r.step;
    if (first_cross >= 0) max_after = std::max(max_after, r.ego_risk);
  }
  bool monotone_arc = true;
  for (std::size_t k = 1; k < log.steps.size(); ++k) {
    monotone_arc = monotone_arc && log.steps[k].ego.arc >= log.steps[k - 1].ego.arc;
  }
  const double v_end = log.steps.back().ego.speed;
  const double front = log.steps.back().ego.pose.x + 0.5 * s.ego.length();
  const double obstacle_rear = 75.0 - 0.5 * s.agents[0].length();
  const bool decelerated = v_end < 13.5 && front < obstacle_rear && log.collisions.empty();
  const bool ok = table && decelerated && min_v >= 0.0 && monotone_arc &&
                  max_after <= 1.05 * ctrl.risk_threshold;
  std::string detail = show("max risk %.6g (bound %.6g), final speed %.4g m/s", max_risk,
                           1.05 * ctrl.risk_threshold, v_end);
  detail += show(", gap to obstacle %.3g m", obstacle_rear - front);
  detail += first_cross < 0 ? ", risk never reached R_t" : show(", first crossing at step %.0f", first_cross);
  return {ok, detail};
}

// ---- AC4: critical search oracle ----------------------------------------------

Outcome ac4() {
  const StyleLibrary lib = StyleLibrary::defaults();
  const DrfEgo ego(DrfParams::identified(), ControllerParams{});
  int bad = 0;
  for (int i = 0; i < 20; ++i) {
    const Scenario s = synthetic::intersection("ac4_" + std::to_string(i), 400 + i);
    SearchOptions one;
    one.agents = 3;
    one.workers = 1;
    SearchOptions eight = one;
    eight.workers = 8;
    const SearchResult a = find_critical(s, ego, lib, one);
    const SearchResult b = find_critical(s, ego, lib, eight);
    // Serial re-enumeration through the rollout and cost primitives.
    const std::vector<std::string> agents(s.flagged.begin(), s.flagged.begin() + 3);
    std::uint32_t best = 0;
    double best_j = INFINITY;
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
      std::vector<AgentConfig> cfg;
      for (std::size_t k = 0; k < agents.size(); ++k) {
        const DriverParams& p = ((mask >> k) & 1U) ? lib.aggressive : lib.cautious;
        cfg.push_back({agents[k], AgentMode::Drf, p.drf, p.controller});
      }
      const double j = cost_to_go(rollout(s, ego, cfg), agents);
      if (j < best_j) {
        best_j = j;
        best = mask;
      }
      if (a.table[mask].cost != j || b.table[mask].cost != j) ++bad;
    }
    if (a.agents != agents || a.best != best || b.best != best ||
        a.best_result().cost != best_j || b.best_result().cost != best_j) {
      ++bad;
    }
  }
  return {bad == 0, show("mismatches %.0f over 20 scenarios x 8 assignments", bad)};
}

// ---- AC5: collisions under critical assignments --------------------------------

Outcome ac5() {
  const auto set = synthetic::benchmark_set("ac5", 50, 7);
  const GroundTruthPlayback ego;
  const StyleLibrary lib = StyleLibrary::defaults();
  MetricsReport cautious;
  MetricsReport critical;
  int per_scenario_drop = 0;
  for (const Scenario& s : set) {
    const SearchResult r = find_critical(s, ego, lib);
    cautious += r.table[0].metrics;
    critical += r.best_result().metrics;
    if (r.best_result().metrics.collisions() < r.table[0].metrics.collisions()) ++per_scenario_drop;
  }
  const bool ok = per_scenario_drop == 0 && critical.collisions() > cautious.collisions();
  std::string detail = show("collisions all-cautious %.0f, critical %.0f", cautious.collisions(),
                           critical.collisions());
  detail += show(" (front/rear/side %.0f/%.0f/%.0f)", critical.collisions_front,
                critical.collisions_rear, critical.collisions_side);
  return {ok, detail};
}

// ---- AC6: augmentation fidelity -----------------------------------------------

Outcome ac6() {
  const AugmentPolicy policy;
  int augmented = 0;
  int unchanged = 0;
  int wrong = 0;
  double max_dev = 0.0;
  double max_dv = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Scenario s = synthetic::following("ac6_" + std::to_string(i), 600 + i, i % 2 == 0);
    bool rear = false;
    for (int k = 0; k <= s.horizon; ++k) rear = rear || detect_rear_vehicle(s, k, policy);
    const auto out = augment_scenario(s, policy);
    if (out.has_value() != rear) ++wrong;
    if (!out) {
      ++unchanged;
      continue;
    }
    ++augmented;
    const RolloutLog direct =
        rollout(s, DrfEgo(policy.aggressive.drf, policy.aggressive.controller), {}, policy.sim);
    const auto& samples = out->ego.samples();
    if (samples.size() != direct.steps.size()) {
      ++wrong;
      continue;
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
      max_dev = std::max(max_dev, s.ego.path().distance_to({samples[k].pose.x, samples[k].pose.y}));
      max_dv = std::max(max_dv, std::abs(samples[k].speed.value_or(NAN) - direct.steps[k].ego.speed));
    }
  }
  const bool ok = wrong == 0 && augmented > 0 && unchanged > 0 && max_dev <= 1e-9 && max_dv < 1e-9;
  std::string detail = show("augmented %.0f, unchanged %.0f, mismatched decisions %.0f", augmented,
                           unchanged, wrong);
  detail += show(", max lateral deviation %.3g m, max |dv| %.3g m/s", max_dev, max_dv);
  return {ok, detail};
}

// ---- AC7: calibration self-consistency ----------------------------------------

Scenario logged_by(const Scenario& base, const DriverParams& p) {
  const RolloutLog drive = rollout(base, DrfEgo(p.drf, p.controller), {});
  std::vector<TrackSample> samples;
  for (const StepRecord& r : drive.steps) samples.push_back({r.t, r.ego.pose, r.ego.speed});
  Scenario s = base;
  s.ego = Track(base.ego.id(), base.ego.length(), base.ego.width(), std::move(samples),
                base.ego.path().points(), base.ego.wheelbase());
  return s;
}

Outcome ac7() {
  DriverParams truth = StyleLibrary::defaults().cautious;
  truth.controller.desired_speed = 11.0;
  truth.controller.risk_threshold = 6000.0;
  const double starts[4][2] = {{60, 6}, {80, 8}, {100, 7}, {120, 9}};
  std::vector<Scenario> logs;
  for (int i = 0; i < 4; ++i) {
    logs.push_back(logged_by(
        synthetic::corridor("ac7_" + std::to_string(i), starts[i][0], starts[i][1], 60), truth));
  }
  DriverParams initial = StyleLibrary::defaults().cautious;  // v_des 13.5, R_t 9000
  Bounds bounds = frozen_bounds(initial);
  bounds[8] = {5.0, 19.0};
  bounds[9] = {2000.0, 20000.0};
  const CalibrationResult r = calibrate(logs, initial, bounds);
  bool strictly_down = !r.history.empty();
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    strictly_down = strictly_down && r.history[k] < r.history[k - 1];
  }
  const double v = r.params.controller.desired_speed;
  const double rel = std::abs(v - 11.0) / 11.0;
  bool others_frozen = true;
  const auto a = to_vector(r.params);
  const auto b = to_vector(initial);
  for (std::size_t i = 0; i < 8; ++i) others_frozen = others_frozen && a[i] == b[i];
  const bool ok = rel <= 0.05 && strictly_down && others_frozen;
  std::string detail = show("v_des %.6g (true 11, error %.3g%%), R_t %.6g", v, 100 * rel,
                           r.params.controller.risk_threshold);
  detail += show(", APE %.4g -> %.4g m over %.0f accepted moves", r.initial_ape, r.final_ape,
                static_cast<double>(r.history.size()) - 1);
  return {ok, detail};
}

// ---- AC8: determinism of the command-line outputs ------------------------------

std::vector<std::pair<std::string, std::string>> tree(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files.emplace_back(fs::relative(e.path(), dir).string(),
                       std::string(std::istreambuf_iterator<char>(in), {}));
  }
  std::sort(files.begin(), files.end());
  return files;
}

Outcome ac8() {
  const fs::path root = fs::temp_directory_path() / "drf_acceptance_ac8";
  fs::remove_all(root);
  fs::create_directories(root / "scenarios");
  for (const Scenario& s : synthetic::benchmark_set("det", 6, 3)) {
    io::write_scenario(root / "scenarios" / (s.id + ".json"), s);
  }
  std::ostringstream sink;
  int bad_exit = 0;
  auto call = [&](std::vector<std::string> args) {
    std::vector<const char*> argv{"drf_critic"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    if (cli::dispatch(static_cast<int>(argv.size()), argv.data(), sink, sink) != 0) ++bad_exit;
  };
  const std::string dir = (root / "scenarios").string();
  int differing = 0;
  int compared = 0;
  for (const std::string cmd : {"simulate", "gen-critical"}) {
    std::vector<std::vector<std::pair<std::string, std::string>>> outs;
    for (const auto& [tag, workers] :
         std::vector<std::pair<std::string, std::string>>{{"a", "1"}, {"b", "1"}, {"c", "4"}}) {
      const fs::path out = root / (cmd + "_" + tag);
      call({cmd, "--scenario-dir", dir, "--out", out.string(), "--ego", "drf", "--workers", workers});
      outs.push_back(tree(out));
    }
    for (std::size_t k = 1; k < outs.size(); ++k) {
      ++compared;
      if (outs[k] != outs[0] || outs[0].empty()) ++differing;
    }
  }
  fs::remove_all(root);
  return {bad_exit == 0 && differing == 0,
          show("output trees compared %.0f, differing %.0f, failed runs %.0f", compared, differing,
              bad_exit)};
}

// ---- AC9: dataset export ------------------------------------------------------

Outcome ac9() {
  const Scenario s = synthetic::intersection("ac9", 9, 40);
  const ActionSpec spec;
  const auto pairs = make_pairs(s, 0, 3, spec);
  int bad_refit = 0;
  int bad_json = 0;
  double first_cp = 0.0;
  for (const TrainingPair& p : pairs) {
    // Independent re-fit from the logged poses.
    const Pose2 frame = s.ego.pose_at_time(s.time_at(p.t));
    std::vector<spline::Waypoint> wps;
    for (int j = 0; j <= 2; ++j) {
      const double t = s.time_at(p.t + j);
      wps.push_back({t, to_frame(frame, s.ego.pose_at_time(t))});
    }
    const auto refit = spline::fit(wps, spec.n, spec.d, spec.horizon).curve.coefficients();
    if (refit.values() != p.action.values()) ++bad_refit;
    std::ostringstream line;
    write_pair(line, p);
    std::string text = line.str();
    text.pop_back();
    const TrainingPair q = parse_pair(text);
    if (q.action.values() != p.action.values() || q.features != p.features || q.t != p.t) ++bad_json;
    const Pose2 world = from_frame(frame, {p.action(0, 0), p.action(1, 0), p.action(2, 0)});
    first_cp = std::max({first_cp, std::hypot(world.x - frame.x, world.y - frame.y),
                         std::abs(wrap_angle(world.heading - frame.heading))});
  }
  const fs::path file = fs::temp_directory_path() / "drf_acceptance_ac9.jsonl";
  const std::size_t written = export_pairs({s}, 0, 3, file);
  fs::remove(file);
  const bool ok = pairs.size() == 39 && written == 39 && bad_refit == 0 && bad_json == 0 &&
                  first_cp <= 1e-8;
  std::string detail = show("pairs %.0f (file %.0f), refit mismatches %.0f", pairs.size(),
                           written, bad_refit);
  detail += show(", json mismatches %.0f, first control point error %.3g", bad_json, first_cp);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments restrict the run to the named criteria, e.g. `acceptance AC5`.
  for (int i = 1; i < argc; ++i) only.emplace_back(argv[i]);
  run("AC1 spline basis", 1, ac1);
  run("AC2 perceived-risk oracle", 5, ac2);
  run("AC3 corridor controller", 2, ac3);
  run("AC4 critical-search oracle", 30, ac4);
  run("AC5 critical collisions", 120, ac5);
  run("AC6 augmentation fidelity", 10, ac6);
  run("AC7 calibration", 60, ac7);
  run("AC8 determinism", 600, ac8);
  run("AC9 dataset export", 5, ac9);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
