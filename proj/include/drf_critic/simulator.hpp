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

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "drf_critic/controller.hpp"
#include "drf_critic/costmap.hpp"
#include "drf_critic/drf_field.hpp"
#include "drf_critic/metrics_report.hpp"
#include "drf_critic/scenario.hpp"
#include "drf_critic/spline.hpp"

namespace drf {

struct SimOptions {
  FieldOptions field;
  /// Caps each DRF vehicle's speed so the risk predicted for its next state stays
  /// at or below R_t. Without it the proportional law alone overshoots R_t.
  bool risk_limiter{true};
  /// Parameters of the observer that scores the ego's perceived risk each step.
  DrfParams observer{DrfParams::identified()};
  double off_road_distance{4.0};     // m
  double aggressive_risk{1e5};
  double curvature_window{2.0};      // half window [m] for path curvature

  void validate() const;
};

struct AdvanceResult {
  Pose2 pose;
  double arc{0.0};
  bool finished{false};
};

/// Moves v * dt metres along the track's path, clamping at its end.
AdvanceResult advance_along_path(const Track& track, double arc_pos, double v, double dt);

/// Vehicle state of a path follower at arc length `arc`; steering follows the path
/// curvature through atan(L * kappa).
VehicleState path_vehicle_state(const Track& track, double arc, double speed,
                                const SimOptions& options);

struct DrivingState {
  double arc{0.0};
  double speed{0.0};
};

/// One DRF step of a vehicle constrained to its track: perceive, update speed, move.
/// `risk_out` receives the perceived risk at the current state.
DrivingState drf_path_step(const Track& track, const DrivingState& state, const CostScene& scene,
                           const DrfParams& drf, const ControllerParams& controller,
                           const SimOptions& options, double dt, double* risk_out = nullptr);

struct EgoState {
  Pose2 pose;
  double speed{0.0};
  double arc{0.0};       // progress along the ego's recorded path
  double steering{0.0};
};

struct EgoStepContext {
  const Scenario& scenario;
  const SimOptions& options;
  int step;                 // step being produced
  const EgoState& previous;
  const CostScene& scene;   // every other vehicle at step - 1
};

class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ego controller handle. Implementations are immutable so one instance can drive
/// concurrent rollouts.
class EgoPolicy {
 public:
  virtual ~EgoPolicy() = default;
  virtual std::string name() const = 0;
  virtual EgoState initial(const Scenario& scenario, const SimOptions& options) const;
  virtual EgoState next(const EgoStepContext& ctx) const = 0;
};

class GroundTruthPlayback final : public EgoPolicy {
 public:
  std::string name() const override { return "log-replay"; }
  EgoState next(const EgoStepContext& ctx) const override;
};

/// Straight-line extrapolation of the initial pose at the initial speed.
class ConstantVelocity final : public EgoPolicy {
 public:
  std::string name() const override { return "const-v"; }
  EgoState next(const EgoStepContext& ctx) const override;
};

/// DRF driver on the ego's recorded path.
class DrfEgo final : public EgoPolicy {
 public:
  DrfEgo(DrfParams drf, ControllerParams controller);
  std::string name() const override { return "drf"; }
  EgoState initial(const Scenario& scenario, const SimOptions& options) const override;
  EgoState next(const EgoStepContext& ctx) const override;

 private:
  DrfParams drf_;
  ControllerParams controller_;
};

/// Replays precomputed spline actions, one per step, each expressed in the ego
/// frame of the previous state. The ego moves to the action curve at u = dt.
class ExternalActions final : public EgoPolicy {
 public:
  ExternalActions(std::map<int, spline::CoefficientMatrix> actions, spline::KnotVector knots);
  std::string name() const override { return "file"; }
  EgoState next(const EgoStepContext& ctx) const override;

 private:
  std::map<int, spline::CoefficientMatrix> actions_;
  spline::KnotVector knots_;
};

enum class AgentMode { LogReplay, Drf };

struct AgentConfig {
  std::string id;
  AgentMode mode{AgentMode::LogReplay};
  DrfParams drf;
  ControllerParams controller;
};

enum class CollisionType { None, Front, Rear, Side };

const char* to_string(CollisionType type);

/// Separating-axis overlap test of two oriented rectangles; on contact the type
/// comes from the bearing of the other centre in the ego frame.
CollisionType classify_collision(const Footprint& ego, const Footprint& other);

struct VehicleRecord {
  std::string id;
  Pose2 pose;
  double speed{0.0};
  double arc{0.0};
};

struct StepRecord {
  int step{0};
  double t{0.0};
  VehicleRecord ego;
  std::vector<VehicleRecord> agents;  // scenario agent order
  double ego_risk{0.0};
};

struct CollisionEvent {
  int step{0};
  std::string other;
  CollisionType type{CollisionType::None};
  double bearing{0.0};  // rad, other centre in the ego frame
  Vec2 offset;          // other centre in the ego frame
};

struct OffRoadEvent {
  int step{0};
  double deviation{0.0};
};

struct RolloutLog {
  std::string scenario_id;
  double dt{0.1};
  int horizon{0};
  Vec2 ego_size{4.5, 1.8};  // length, width
  std::vector<StepRecord> steps;
  std::vector<CollisionEvent> collisions;  // first contact per ego-agent pair
  std::vector<OffRoadEvent> off_road;      // first violating step, if any
  std::optional<std::string> error;

  bool complete() const {
    return !error && steps.size() == static_cast<std::size_t>(horizon) + 1;
  }
};

RolloutLog rollout(const Scenario& scenario, const EgoPolicy& ego_policy,
                   const std::vector<AgentConfig>& agent_configs, const SimOptions& options = {});

MetricsReport compute_metrics(const RolloutLog& log, const Scenario& scenario,
                              const SimOptions& options = {});

}  // namespace drf
