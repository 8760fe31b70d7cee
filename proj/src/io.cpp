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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace drf::io {

namespace fs = std::filesystem;

double round9(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

namespace {

Json points_to_json(const std::vector<Vec2>& pts) {
  Json arr = Json::array();
  for (const Vec2& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Vec2> points_from_json(const Json& j) {
  std::vector<Vec2> pts;
  for (const Json& p : j) {
    if (!p.is_array() || p.size() != 2) throw DataError("points must be [x, y] pairs");
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return pts;
}

Json track_to_json(const Track& track) {
  Json j;
  j["id"] = track.id();
  j["length"] = track.length();
  j["width"] = track.width();
  j["wheelbase"] = track.wheelbase();
  Json samples = Json::array();
  for (const TrackSample& s : track.samples()) {
    Json row = {s.t, s.pose.x, s.pose.y, s.pose.heading};
    if (s.speed) row.push_back(*s.speed);
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);
  if (track.has_explicit_path()) j["path"] = points_to_json(track.path().points());
  return j;
}

Track track_from_json(const Json& j) {
  const auto id = j.at("id").get<std::string>();
  std::vector<TrackSample> samples;
  for (const Json& row : j.at("samples")) {
    if (!row.is_array() || (row.size() != 4 && row.size() != 5)) {
      throw DataError("track '" + id + "': samples must be [t, x, y, heading(, speed)]");
    }
    TrackSample s{row[0].get<double>(),
                  {row[1].get<double>(), row[2].get<double>(), row[3].get<double>()},
                  std::nullopt};
    if (row.size() == 5) s.speed = row[4].get<double>();
    samples.push_back(s);
  }
  std::optional<std::vector<Vec2>> path;
  if (j.contains("path")) path = points_from_json(j.at("path"));
  return Track(id, j.at("length").get<double>(), j.at("width").get<double>(),
               std::move(samples), std::move(path), j.value("wheelbase", 2.85));
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["format_version"] = s.format_version;
  j["id"] = s.id;
  j["dt"] = s.dt;
  j["horizon_steps"] = s.horizon;
  Json drivable = Json::array();
  for (const Polygon& p : s.drivable) drivable.push_back(points_to_json(p));
  j["drivable"] = std::move(drivable);
  j["ego"] = track_to_json(s.ego);
  Json agents = Json::array();
  for (const Track& a : s.agents) agents.push_back(track_to_json(a));
  j["agents"] = std::move(agents);
  if (!s.flagged.empty()) j["flagged_agents"] = s.flagged;
  if (s.augmented) j["augmented"] = true;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  try {
    Scenario s;
    s.format_version = j.at("format_version").get<int>();
    if (s.format_version != 1) {
      throw DataError("unsupported format_version " + std::to_string(s.format_version));
    }
    s.id = j.at("id").get<std::string>();
    s.dt = j.at("dt").get<double>();
    s.horizon = j.at("horizon_steps").get<int>();
    for (const Json& poly : j.at("drivable")) s.drivable.push_back(points_from_json(poly));
    s.ego = track_from_json(j.at("ego"));
    for (const Json& a : j.at("agents")) s.agents.push_back(track_from_json(a));
    if (j.contains("flagged_agents")) {
      s.flagged = j.at("flagged_agents").get<std::vector<std::string>>();
    }
    s.augmented = j.value("augmented", false);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
}

Scenario read_scenario(const fs::path& path) {
  const Json j = read_json_file(path);
  try {
    return scenario_from_json(j);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string() + ": cannot write");
  out << j.dump(2) << '\n';
  if (!out) throw DataError(path.string() + ": write failed");
}

void write_scenario(const fs::path& path, const Scenario& scenario) {
  write_json_file(path, scenario_to_json(scenario));
}

std::vector<fs::path> scenario_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

Json metrics_to_json(const MetricsReport& r) {
  Json j;
  j["collisions_front"] = r.collisions_front;
  j["collisions_rear"] = r.collisions_rear;
  j["collisions_side"] = r.collisions_side;
  j["off_road"] = r.off_road;
  j["aggressive_driving"] = r.aggressive_driving;
  return j;
}

MetricsReport metrics_from_json(const Json& j) {
  MetricsReport r;
  r.collisions_front = j.at("collisions_front").get<long>();
  r.collisions_rear = j.at("collisions_rear").get<long>();
  r.collisions_side = j.at("collisions_side").get<long>();
  r.off_road = j.at("off_road").get<long>();
  r.aggressive_driving = j.at("aggressive_driving").get<long>();
  return r;
}

namespace {

Json record_to_json(const VehicleRecord& r) {
  Json j;
  j["id"] = r.id;
  j["x"] = round9(r.pose.x);
  j["y"] = round9(r.pose.y);
  j["heading"] = round9(r.pose.heading);
  j["speed"] = round9(r.speed);
  j["arc"] = round9(r.arc);
  return j;
}

}  // namespace

void write_rollout_jsonl(std::ostream& out, const RolloutLog& log) {
  for (const StepRecord& s : log.steps) {
    Json j;
    j["step"] = s.step;
    j["t"] = round9(s.t);
    j["ego"] = record_to_json(s.ego);
    Json agents = Json::array();
    for (const VehicleRecord& a : s.agents) agents.push_back(record_to_json(a));
    j["agents"] = std::move(agents);
    j["ego_risk"] = round9(s.ego_risk);
    Json events = Json::array();
    for (const CollisionEvent& c : log.collisions) {
      if (c.step != s.step) continue;
      Json e;
      e["type"] = "collision";
      e["other"] = c.other;
      e["side"] = to_string(c.type);
      e["bearing"] = round9(c.bearing);
      e["offset"] = {round9(c.offset.x), round9(c.offset.y)};
      events.push_back(std::move(e));
    }
    for (const OffRoadEvent& o : log.off_road) {
      if (o.step != s.step) continue;
      Json e;
      e["type"] = "off_road";
      e["deviation"] = round9(o.deviation);
      events.push_back(std::move(e));
    }
    j["events"] = std::move(events);
    out << j.dump() << '\n';
  }
  if (log.error) {
    Json j;
    j["error"] = *log.error;
    out << j.dump() << '\n';
  }
}

namespace {

Json assignment_names(const SearchResult& r, std::uint32_t mask) {
  Json a = Json::array();
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    a.push_back(((mask >> i) & 1U) ? "aggressive" : "cautious");
  }
  return a;
}

}  // namespace

Json search_result_to_json(const SearchResult& r) {
  Json j;
  j["scenario_id"] = r.scenario_id;
  j["agents"] = r.agents;
  const AssignmentResult& best = r.best_result();
  Json b;
  b["mask"] = best.mask;
  b["assignment"] = assignment_names(r, best.mask);
  b["J"] = round9(best.cost);
  j["best"] = std::move(b);
  Json table = Json::array();
  for (const AssignmentResult& a : r.table) {
    Json row;
    row["mask"] = a.mask;
    row["assignment"] = assignment_names(r, a.mask);
    row["J"] = round9(a.cost);
    row["accidents"] = a.accidents;
    row["metrics"] = metrics_to_json(a.metrics);
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);
  return j;
}

Json driver_params_to_json(const DriverParams& params) {
  Json j;
  const auto v = to_vector(params);
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    j[std::string(parameter_names()[i])] = round9(v[i]);
  }
  j["v_max"] = round9(params.controller.max_speed);
  return j;
}

DriverParams driver_params_from_json(const Json& j) {
  std::array<double, kParameterCount> v{};
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    const std::string name(parameter_names()[i]);
    if (!j.contains(name)) throw DataError("missing parameter '" + name + "'");
    v[i] = j.at(name).get<double>();
  }
  DriverParams p = from_vector(v);
  if (j.contains("v_max")) p.controller.max_speed = j.at("v_max").get<double>();
  try {
    p.drf.validate();
    p.controller.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  return p;
}

Json calibration_to_json(const CalibrationResult& r) {
  Json j;
  j["parameters"] = driver_params_to_json(r.params);
  j["initial_ape"] = round9(r.initial_ape);
  j["final_ape"] = round9(r.final_ape);
  Json h = Json::array();
  for (double v : r.history) h.push_back(round9(v));
  j["history"] = std::move(h);
  j["sweeps"] = r.sweeps;
  j["evaluations"] = r.evaluations;
  return j;
}

StyleLibrary read_style_library(const fs::path& path) {
  const Json j = read_config(path);
  try {
    StyleLibrary lib;
    lib.cautious = driver_params_from_json(j.at("cautious"));
    lib.aggressive = driver_params_from_json(j.at("aggressive"));
    return lib;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Bounds bounds_from_json(const Json& j, const DriverParams& initial) {
  Bounds b = frozen_bounds(initial);
  for (const auto& [key, value] : j.items()) {
    const auto& names = parameter_names();
    const auto it = std::find(names.begin(), names.end(), key);
    if (it == names.end()) throw DataError("unknown parameter '" + key + "' in bounds");
    if (!value.is_array() || value.size() != 2) {
      throw DataError("bounds for '" + key + "' must be [lo, hi]");
    }
    b[static_cast<std::size_t>(it - names.begin())] = {value[0].get<double>(),
                                                       value[1].get<double>()};
  }
  return b;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Json toml_value(const std::string& raw, int line_no) {
  const std::string v = trim(raw);
  auto fail = [&] { return DataError("line " + std::to_string(line_no) + ": bad value '" + v + "'"); };
  if (v.empty()) throw fail();
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw fail();
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']') throw fail();
    Json arr = Json::array();
    std::stringstream items(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(items, item, ',')) {
      if (!trim(item).empty()) arr.push_back(toml_value(item, line_no));
    }
    return arr;
  }
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) throw fail();
  if (v.find_first_of(".eE") == std::string::npos) return static_cast<long long>(d);
  return d;
}

}  // namespace

Json parse_toml_subset(const std::string& text) {
  Json root = Json::object();
  Json* table = &root;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments outside strings.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw DataError("line " + std::to_string(line_no) + ": bad table");
      const std::string name = trim(line.substr(1, line.size() - 2));
      table = &root[name];
      if (table->is_null()) *table = Json::object();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') {
      key = key.substr(1, key.size() - 2);
    }
    (*table)[key] = toml_value(line.substr(eq + 1), line_no);
  }
  return root;
}

Json read_config(const fs::path& path) {
  if (path.extension() == ".toml") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      return parse_toml_subset(buf.str());
    } catch (const DataError& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  }
  return read_json_file(path);
}

std::unique_ptr<ExternalActions> read_external_actions(const fs::path& path,
                                                       const std::string& scenario_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  std::map<int, spline::CoefficientMatrix> actions;
  std::optional<std::tuple<int, int, double>> layout;
  std::string line;
  int line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const Json j = Json::parse(line);
      if (j.contains("scenario_id") && j.at("scenario_id").get<std::string>() != scenario_id) {
        continue;
      }
      const int step = j.contains("step") ? j.at("step").get<int>() : j.at("t").get<int>();
      const std::tuple<int, int, double> l{j.at("n").get<int>(), j.at("d").get<int>(),
                                           j.at("horizon").get<double>()};
      if (layout && *layout != l) throw DataError("mixed action layouts");
      layout = l;
      const auto flat = j.at("action").get<std::vector<double>>();
      actions.insert_or_assign(
          step, spline::CoefficientMatrix::from_row_major(flat, std::get<0>(l)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
  } catch (const std::exception& e) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
  }
  if (!layout) throw DataError(path.string() + ": no actions for scenario '" + scenario_id + "'");
  const auto [n, d, horizon] = *layout;
  try {
    return std::make_unique<ExternalActions>(std::move(actions),
                                             spline::make_clamped_knots(n, d, horizon));
  } catch (const InvalidArgument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace drf::io
