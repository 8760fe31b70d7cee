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

#include "drf_critic/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

namespace drf {

void SimOptions::validate() const {
  require(field.resolution > 0.0, "field resolution must be positive");
  require(field.lateral_cutoff > 0.0, "lateral cutoff must be positive");
  require(off_road_distance > 0.0, "off-road distance must be positive");
  require(curvature_window > 0.0, "curvature window must be positive");
  observer.validate();
}

AdvanceResult advance_along_path(const Track& track, double arc_pos, double v, double dt) {
  const double len = track.path().length();
  require(arc_pos >= 0.0 && arc_pos <= len, "arc position outside the track");
  require(std::isfinite(v) && v >= 0.0, "speed must be finite and non-negative");
  require(dt > 0.0, "time step must be positive");
  const double target = arc_pos + v * dt;
  AdvanceResult out;
  out.finished = target >= len;
  out.arc = out.finished ? len : target;
  out.pose = track.path().pose_at(out.arc);
  return out;
}

VehicleState path_vehicle_state(const Track& track, double arc, double speed,
                                const SimOptions& options) {
  const Pose2 pose = track.path().pose_at(arc);
  const double kappa = track.path().curvature_at(arc, options.curvature_window);
  VehicleState vs;
  vs.x = pose.x;
  vs.y = pose.y;
  vs.heading = pose.heading;
  vs.speed = speed;
  vs.steering = std::atan(track.wheelbase() * kappa);
  vs.wheelbase = track.wheelbase();
  vs.length = track.length();
  vs.width = track.width();
  return vs;
}

DrivingState drf_path_step(const Track& track, const DrivingState& state, const CostScene& scene,
                           const DrfParams& drf, const ControllerParams& controller,
                           const SimOptions& options, double dt, double* risk_out) {
  auto risk_at = [&](double arc, double speed) {
    const FieldShape shape(path_vehicle_state(track, arc, speed, options), drf, options.field);
    return perceived_risk(shape, scene);
  };
  const double risk = risk_at(state.arc, state.speed);
  if (risk_out) *risk_out = risk;
  double v = step(state.speed, risk, controller);
  if (options.risk_limiter) {
    v = limit_speed_by_risk(v, controller, [&](double candidate) {
      return risk_at(advance_along_path(track, state.arc, candidate, dt).arc, candidate);
    });
  }
  const AdvanceResult next = advance_along_path(track, state.arc, v, dt);
  return {next.arc, next.finished ? 0.0 : v};
}

namespace {

double path_steering(const Track& track, double arc, const SimOptions& options) {
  return std::atan(track.wheelbase() * track.path().curvature_at(arc, options.curvature_window));
}

EgoState ground_truth_state(const Scenario& scenario, int step, const SimOptions& options) {
  const Track& ego = scenario.ego;
  const double t = scenario.time_at(step);
  EgoState s;
  s.pose = ego.pose_at_time(t);
  s.speed = ego.speed_at_time(t, scenario.dt);
  s.arc = ego.arc_at_time(t);
  s.steering = path_steering(ego, s.arc, options);
  return s;
}

}  // namespace

EgoState EgoPolicy::initial(const Scenario& scenario, const SimOptions& options) const {
  return ground_truth_state(scenario, 0, options);
}

EgoState GroundTruthPlayback::next(const EgoStepContext& ctx) const {
  return ground_truth_state(ctx.scenario, ctx.step, ctx.options);
}

EgoState ConstantVelocity::next(const EgoStepContext& ctx) const {
  const Track& ego = ctx.scenario.ego;
  const Pose2 p0 = ego.pose_at_time(0.0);
  const double v0 = ego.speed_at_time(0.0, ctx.scenario.dt);
  const double t = ctx.scenario.time_at(ctx.step);
  EgoState s;
  s.pose = {p0.x + v0 * t * std::cos(p0.heading), p0.y + v0 * t * std::sin(p0.heading),
            p0.heading};
  s.speed = v0;
  s.arc = ego.arc_at_time(0.0) + v0 * t;
  s.steering = 0.0;
  return s;
}

DrfEgo::DrfEgo(DrfParams drf, ControllerParams controller)
    : drf_(drf), controller_(controller) {
  drf_.validate();
  controller_.validate();
}

EgoState DrfEgo::initial(const Scenario& scenario, const SimOptions& options) const {
  const Track& ego = scenario.ego;
  EgoState s;
  s.arc = ego.arc_at_time(0.0);
  s.speed = std::min(ego.speed_at_time(0.0, scenario.dt), controller_.max_speed);
  s.pose = ego.path().pose_at(s.arc);
  s.steering = path_steering(ego, s.arc, options);
  return s;
}

EgoState DrfEgo::next(const EgoStepContext& ctx) const {
  const Track& ego = ctx.scenario.ego;
  const DrivingState d =
      drf_path_step(ego, {ctx.previous.arc, ctx.previous.speed}, ctx.scene, drf_, controller_,
                    ctx.options, ctx.scenario.dt);
  EgoState s;
  s.arc = d.arc;
  s.speed = d.speed;
  s.pose = ego.path().pose_at(d.arc);
  s.steering = path_steering(ego, d.arc, ctx.options);
  return s;
}

ExternalActions::ExternalActions(std::map<int, spline::CoefficientMatrix> actions,
                                 spline::KnotVector knots)
    : actions_(std::move(actions)), knots_(std::move(knots)) {
  for (const auto& [step, a] : actions_) {
    require(a.cols() == knots_.count(), "action width does not match the knot vector");
  }
}

EgoState ExternalActions::next(const EgoStepContext& ctx) const {
  const int issued = ctx.step - 1;
  const auto it = actions_.find(issued);
  if (it == actions_.end()) {
    throw PolicyError("no action provided for step " + std::to_string(issued));
  }
  const double dt = ctx.scenario.dt;
  if (!knots_.contains(dt)) throw PolicyError("action horizon is shorter than one step");
  const Pose2 local = spline::evaluate(spline::SplineCurve(knots_, it->second), dt);
  const double dist = std::hypot(local.x, local.y);
  EgoState s;
  s.pose = from_frame(ctx.previous.pose, local);
  s.speed = dist / dt;
  s.arc = ctx.previous.arc + dist;
  const double wheelbase = ctx.scenario.ego.wheelbase();
  s.steering = dist > 1e-9 ? std::atan(wheelbase * local.heading / dist) : 0.0;
  return s;
}

const char* to_string(CollisionType type) {
  switch (type) {
    case CollisionType::None:
      return "none";
    case CollisionType::Front:
      return "front";
    case CollisionType::Rear:
      return "rear";
    case CollisionType::Side:
      return "side";
  }
  return "none";
}

namespace {

std::array<Vec2, 4> corners(const Footprint& f) {
  const double c = std::cos(f.pose().heading);
  const double s = std::sin(f.pose().heading);
  const double hl = 0.5 * f.length();
  const double hw = 0.5 * f.width();
  std::array<Vec2, 4> out;
  const double sx[4] = {hl, -hl, -hl, hl};
  const double sy[4] = {hw, hw, -hw, -hw};
  for (int k = 0; k < 4; ++k) {
    out[k] = {f.pose().x + c * sx[k] - s * sy[k], f.pose().y + s * sx[k] + c * sy[k]};
  }
  return out;
}

bool overlaps(const Footprint& a, const Footprint& b) {
  const auto ca = corners(a);
  const auto cb = corners(b);
  const double ha[2] = {a.pose().heading, a.pose().heading + 0.5 * kPi};
  const double hb[2] = {b.pose().heading, b.pose().heading + 0.5 * kPi};
  for (double h : {ha[0], ha[1], hb[0], hb[1]}) {
    const Vec2 axis{std::cos(h), std::sin(h)};
    double amin = INFINITY, amax = -INFINITY, bmin = INFINITY, bmax = -INFINITY;
    for (int k = 0; k < 4; ++k) {
      const double pa = ca[k].x * axis.x + ca[k].y * axis.y;
      const double pb = cb[k].x * axis.x + cb[k].y * axis.y;
      amin = std::min(amin, pa);
      amax = std::max(amax, pa);
      bmin = std::min(bmin, pb);
      bmax = std::max(bmax, pb);
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

double contact_bearing(const Footprint& ego, const Footprint& other) {
  const Vec2 rel = to_frame(ego.pose(), other.pose().x, other.pose().y);
  return std::atan2(rel.y, rel.x);
}

}  // namespace

CollisionType classify_collision(const Footprint& ego, const Footprint& other) {
  if (!overlaps(ego, other)) return CollisionType::None;
  const double b = std::abs(contact_bearing(ego, other));
  constexpr double kQuarter = 0.25 * kPi;
  if (b <= kQuarter) return CollisionType::Front;
  if (b >= 3.0 * kQuarter) return CollisionType::Rear;
  return CollisionType::Side;
}

namespace {

struct AgentSlot {
  const Track* track;
  const AgentConfig* config;  // null = log replay
  DrivingState driving;
};

VehicleRecord replay_record(const Track& track, const Scenario& scenario, int step) {
  const double t = scenario.time_at(step);
  return {track.id(), track.pose_at_time(t), track.speed_at_time(t, scenario.dt),
          track.arc_at_time(t)};
}

}  // namespace

RolloutLog rollout(const Scenario& scenario, const EgoPolicy& ego_policy,
                   const std::vector<AgentConfig>& agent_configs, const SimOptions& options) {
  options.validate();
  std::unordered_map<std::string, const AgentConfig*> by_id;
  for (const AgentConfig& c : agent_configs) {
    bool known = false;
    for (const Track& a : scenario.agents) known = known || a.id() == c.id;
    if (!known) throw InvalidArgument("agent config for unknown agent '" + c.id + "'");
    if (!by_id.emplace(c.id, &c).second) {
      throw InvalidArgument("duplicate agent config for '" + c.id + "'");
    }
    if (c.mode == AgentMode::Drf) {
      c.drf.validate();
      c.controller.validate();
    }
  }

  RolloutLog log;
  log.scenario_id = scenario.id;
  log.dt = scenario.dt;
  log.horizon = scenario.horizon;
  log.ego_size = {scenario.ego.length(), scenario.ego.width()};
  log.steps.reserve(static_cast<std::size_t>(scenario.horizon) + 1);

  const DrivableArea area(scenario.drivable, options.field.resolution);
  const std::size_t n = scenario.agents.size();
  std::vector<AgentSlot> slots;
  slots.reserve(n);
  for (const Track& a : scenario.agents) {
    const auto it = by_id.find(a.id());
    const AgentConfig* cfg =
        it != by_id.end() && it->second->mode == AgentMode::Drf ? it->second : nullptr;
    slots.push_back({&a, cfg, {}});
  }

  const Track& ego_track = scenario.ego;
  std::vector<bool> in_contact(n, false);
  bool off_road_seen = false;

  auto agent_footprint = [&](const VehicleRecord& r, std::size_t i) {
    return Footprint(r.pose, slots[i].track->length(), slots[i].track->width());
  };

  // Scores the ego and records events for a completed step record.
  auto finish_step = [&](StepRecord& rec, const EgoState& ego) {
    std::vector<Footprint> others;
    others.reserve(n);
    for (std::size_t i = 0; i < n; ++i) others.push_back(agent_footprint(rec.agents[i], i));
    const Footprint ego_fp(ego.pose, ego_track.length(), ego_track.width());
    VehicleState vs;
    vs.x = ego.pose.x;
    vs.y = ego.pose.y;
    vs.heading = ego.pose.heading;
    vs.speed = ego.speed;
    vs.steering = ego.steering;
    vs.wheelbase = ego_track.wheelbase();
    vs.length = ego_track.length();
    vs.width = ego_track.width();
    const CostScene scene(area, others);
    rec.ego_risk = perceived_risk(FieldShape(vs, options.observer, options.field), scene);

    for (std::size_t i = 0; i < n; ++i) {
      const CollisionType type = classify_collision(ego_fp, others[i]);
      if (type != CollisionType::None && !in_contact[i]) {
        in_contact[i] = true;
        const Vec2 offset = to_frame(ego.pose, others[i].pose().x, others[i].pose().y);
        log.collisions.push_back(
            {rec.step, slots[i].track->id(), type, std::atan2(offset.y, offset.x), offset});
      }
    }
    const double deviation = ego_track.path().distance_to({ego.pose.x, ego.pose.y});
    if (!off_road_seen && deviation > options.off_road_distance) {
      off_road_seen = true;
      log.off_road.push_back({rec.step, deviation});
    }
  };

  auto ego_record = [&](const EgoState& e) {
    return VehicleRecord{ego_track.id(), e.pose, e.speed, e.arc};
  };

  EgoState ego;
  try {
    ego = ego_policy.initial(scenario, options);
  } catch (const std::exception& ex) {
    log.error = std::string("ego policy failed at step 0: ") + ex.what();
    return log;
  }

  StepRecord rec;
  rec.step = 0;
  rec.t = 0.0;
  rec.ego = ego_record(ego);
  for (std::size_t i = 0; i < n; ++i) {
    const Track& track = *slots[i].track;
    if (slots[i].config) {
      const double arc = track.arc_at_time(0.0);
      const double v = std::min(track.speed_at_time(0.0, scenario.dt),
                                slots[i].config->controller.max_speed);
      slots[i].driving = {arc, v};
      rec.agents.push_back({track.id(), track.path().pose_at(arc), v, arc});
    } else {
      rec.agents.push_back(replay_record(track, scenario, 0));
    }
  }
  finish_step(rec, ego);
  log.steps.push_back(std::move(rec));

  std::vector<Footprint> scene_fps;
  for (int k = 1; k <= scenario.horizon; ++k) {
    const StepRecord& prev = log.steps.back();
    StepRecord cur;
    cur.step = k;
    cur.t = scenario.time_at(k);
    cur.agents.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
      const Track& track = *slots[i].track;
      if (!slots[i].config) {
        cur.agents[i] = replay_record(track, scenario, k);
        continue;
      }
      scene_fps.clear();
      scene_fps.emplace_back(prev.ego.pose, ego_track.length(), ego_track.width());
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) scene_fps.push_back(agent_footprint(prev.agents[j], j));
      }
      const CostScene scene(area, scene_fps);
      const AgentConfig& cfg = *slots[i].config;
      slots[i].driving = drf_path_step(track, slots[i].driving, scene, cfg.drf, cfg.controller,
                                       options, scenario.dt);
      cur.agents[i] = {track.id(), track.path().pose_at(slots[i].driving.arc),
                       slots[i].driving.speed, slots[i].driving.arc};
    }

    scene_fps.clear();
    for (std::size_t j = 0; j < n; ++j) scene_fps.push_back(agent_footprint(prev.agents[j], j));
    const CostScene ego_scene(area, scene_fps);
    try {
      ego = ego_policy.next({scenario, options, k, ego, ego_scene});
    } catch (const std::exception& ex) {
      log.error = "ego policy '" + ego_policy.name() + "' failed at step " + std::to_string(k) +
                  ": " + ex.what();
      return log;
    }
    cur.ego = ego_record(ego);
    finish_step(cur, ego);
    log.steps.push_back(std::move(cur));
  }
  return log;
}

MetricsReport compute_metrics(const RolloutLog& log, const Scenario& scenario,
                              const SimOptions& options) {
  MetricsReport r;
  for (const CollisionEvent& c : log.collisions) {
    switch (c.type) {
      case CollisionType::Front:
        ++r.collisions_front;
        break;
      case CollisionType::Rear:
        ++r.collisions_rear;
        break;
      case CollisionType::Side:
        ++r.collisions_side;
        break;
      case CollisionType::None:
        break;
    }
  }
  const Polyline& truth = scenario.ego.path();
  for (const StepRecord& s : log.steps) {
    if (truth.distance_to({s.ego.pose.x, s.ego.pose.y}) > options.off_road_distance) {
      r.off_road = 1;
      break;
    }
  }
  for (const StepRecord& s : log.steps) {
    if (s.ego_risk > options.aggressive_risk) {
      r.aggressive_driving = 1;
      break;
    }
  }
  return r;
}

}  // namespace drf
