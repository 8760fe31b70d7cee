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

#include "drf_critic/scenario_gen.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <spdlog/spdlog.h>

namespace drf {

StyleLibrary StyleLibrary::defaults() {
  StyleLibrary lib;
  lib.aggressive.controller.risk_threshold *= 2.0;
  lib.aggressive.controller.desired_speed *= 1.3;
  lib.aggressive.drf.safety_distance *= 0.5;
  return lib;
}

void StyleLibrary::validate() const {
  cautious.drf.validate();
  cautious.controller.validate();
  aggressive.drf.validate();
  aggressive.controller.validate();
}

double cost_to_go(const RolloutLog& log, const std::vector<std::string>& agents,
                  double accident_weight) {
  double separation = 0.0;
  if (!agents.empty() && !log.steps.empty()) {
    std::vector<std::size_t> index;
    index.reserve(agents.size());
    const std::vector<VehicleRecord>& first = log.steps.front().agents;
    for (const std::string& id : agents) {
      std::size_t k = 0;
      while (k < first.size() && first[k].id != id) ++k;
      require(k < first.size(), "agent '" + id + "' is not in the rollout log");
      index.push_back(k);
    }
    for (const StepRecord& s : log.steps) {
      for (std::size_t k : index) {
        const Pose2& a = s.agents[k].pose;
        separation += std::abs(s.ego.pose.x - a.x) + std::abs(s.ego.pose.y - a.y);
      }
    }
  }
  const double accidents = static_cast<double>(log.collisions.size() + log.off_road.size());
  return separation - accident_weight * accidents;
}

std::vector<std::string> search_agents(const Scenario& scenario, std::optional<std::size_t> m) {
  if (!scenario.flagged.empty()) {
    const std::size_t take = std::min(m.value_or(scenario.flagged.size()), scenario.flagged.size());
    return {scenario.flagged.begin(), scenario.flagged.begin() + static_cast<long>(take)};
  }
  return scenario.nearest_agents(m.value_or(0));
}

std::vector<AgentConfig> assignment_configs(const std::vector<std::string>& agents,
                                            std::uint32_t mask, const StyleLibrary& styles) {
  std::vector<AgentConfig> configs;
  configs.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const bool aggressive = ((mask >> i) & 1U) != 0;
    const DriverParams& p = styles[aggressive ? Style::Aggressive : Style::Cautious];
    configs.push_back({agents[i], AgentMode::Drf, p.drf, p.controller});
  }
  return configs;
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  require(workers >= 1, "worker count must be at least 1");
  const std::size_t threads = std::min<std::size_t>(workers, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

SearchResult find_critical(const Scenario& scenario, const EgoPolicy& ego_policy,
                           const StyleLibrary& styles, const SearchOptions& options) {
  styles.validate();
  require(options.max_agents <= 31, "agent cap must be at most 31");
  SearchResult result;
  result.scenario_id = scenario.id;
  result.agents = search_agents(scenario, options.agents);
  const std::size_t m = result.agents.size();
  if (m > options.max_agents) {
    throw InvalidArgument("search over " + std::to_string(m) + " agents exceeds the cap of " +
                          std::to_string(options.max_agents) + " (" +
                          std::to_string(1ULL << m) + " rollouts); lower the agent count");
  }
  const std::size_t count = std::size_t{1} << m;
  result.table.resize(count);
  parallel_for(count, options.workers, [&](std::size_t index) {
    const auto mask = static_cast<std::uint32_t>(index);
    const RolloutLog log =
        rollout(scenario, ego_policy, assignment_configs(result.agents, mask, styles), options.sim);
    if (log.error) throw std::runtime_error(*log.error);
    AssignmentResult& r = result.table[index];
    r.mask = mask;
    r.cost = cost_to_go(log, result.agents, options.accident_weight);
    r.metrics = compute_metrics(log, scenario, options.sim);
    r.accidents = static_cast<long>(log.collisions.size() + log.off_road.size());
  });
  for (std::size_t i = 1; i < count; ++i) {
    if (result.table[i].cost < result.table[result.best].cost) {
      result.best = static_cast<std::uint32_t>(i);
    }
  }
  return result;
}

double ape(const std::vector<Vec2>& simulated, const std::vector<Vec2>& logged) {
  if (simulated.size() != logged.size()) {
    throw InvalidArgument("APE needs equal step counts (" + std::to_string(simulated.size()) +
                          " vs " + std::to_string(logged.size()) + ")");
  }
  require(!simulated.empty(), "APE needs at least one step");
  double sum = 0.0;
  for (std::size_t k = 0; k < simulated.size(); ++k) {
    sum += std::hypot(simulated[k].x - logged[k].x, simulated[k].y - logged[k].y);
  }
  return sum / static_cast<double>(simulated.size());
}

double ape(const RolloutLog& simulated, const Track& logged) {
  std::vector<Vec2> a;
  std::vector<Vec2> b;
  for (const StepRecord& s : simulated.steps) a.push_back({s.ego.pose.x, s.ego.pose.y});
  for (const TrackSample& s : logged.samples()) b.push_back({s.pose.x, s.pose.y});
  return ape(a, b);
}

namespace {

using DrfField = double DrfParams::*;
using CtrlField = double ControllerParams::*;

struct ParamRef {
  DrfField drf{nullptr};
  CtrlField ctrl{nullptr};
};

const std::array<ParamRef, kParameterCount>& param_refs() {
  static const std::array<ParamRef, kParameterCount> refs{{
      {&DrfParams::steepness, nullptr},
      {&DrfParams::widening, nullptr},
      {&DrfParams::lookahead_time, nullptr},
      {&DrfParams::safety_distance, nullptr},
      {&DrfParams::base_width, nullptr},
      {&DrfParams::inner_gain, nullptr},
      {&DrfParams::outer_gain, nullptr},
      {nullptr, &ControllerParams::gain},
      {nullptr, &ControllerParams::desired_speed},
      {nullptr, &ControllerParams::risk_threshold},
  }};
  return refs;
}

}  // namespace

const std::array<std::string_view, kParameterCount>& parameter_names() {
  static const std::array<std::string_view, kParameterCount> names{
      "p", "m", "t_la", "d_s", "c", "k1", "k2", "k_v", "v_des", "R_t"};
  return names;
}

std::array<double, kParameterCount> to_vector(const DriverParams& params) {
  std::array<double, kParameterCount> v{};
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    const ParamRef& r = param_refs()[i];
    v[i] = r.drf ? params.drf.*r.drf : params.controller.*r.ctrl;
  }
  return v;
}

DriverParams from_vector(const std::array<double, kParameterCount>& values) {
  DriverParams p;
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    const ParamRef& r = param_refs()[i];
    if (r.drf) {
      p.drf.*r.drf = values[i];
    } else {
      p.controller.*r.ctrl = values[i];
    }
  }
  return p;
}

Bounds frozen_bounds(const DriverParams& initial) {
  Bounds b;
  const auto v = to_vector(initial);
  for (std::size_t i = 0; i < kParameterCount; ++i) b[i] = {v[i], v[i]};
  return b;
}

OptimResult coordinate_descent(const Objective& objective,
                               const std::array<double, kParameterCount>& initial,
                               const Bounds& bounds, const CoordinateDescentOptions& options) {
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    require(bounds[i].lo <= bounds[i].hi, "lower bound above upper bound");
    require(initial[i] >= bounds[i].lo && initial[i] <= bounds[i].hi,
            "initial value of '" + std::string(parameter_names()[i]) + "' lies outside its bounds");
  }
  OptimResult out;
  out.x = initial;
  auto eval = [&](const std::array<double, kParameterCount>& x) {
    ++out.evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : INFINITY;
  };
  out.value = eval(out.x);
  out.history.push_back(out.value);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  while (out.sweeps < options.max_sweeps) {
    ++out.sweeps;
    const double sweep_start = out.value;
    for (std::size_t i = 0; i < kParameterCount; ++i) {
      const Bound& b = bounds[i];
      if (b.frozen()) continue;
      auto at = [&](double xi) {
        auto x = out.x;
        x[i] = xi;
        return eval(x);
      };
      double best_x = out.x[i];
      double best_f = out.value;
      auto note = [&](double xi, double f) {
        if (f < best_f) {
          best_f = f;
          best_x = xi;
        }
      };
      double a = b.lo;
      double c = b.hi;
      double x1 = c - inv_phi * (c - a);
      double x2 = a + inv_phi * (c - a);
      double f1 = at(x1);
      double f2 = at(x2);
      note(x1, f1);
      note(x2, f2);
      const double tol = options.line_tolerance * (b.hi - b.lo);
      while (c - a > tol) {
        if (f1 <= f2) {
          c = x2;
          x2 = x1;
          f2 = f1;
          x1 = c - inv_phi * (c - a);
          f1 = at(x1);
          note(x1, f1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (c - a);
          f2 = at(x2);
          note(x2, f2);
        }
      }
      if (best_f < out.value) {
        out.x[i] = best_x;
        out.value = best_f;
        out.history.push_back(best_f);
      }
    }
    if (!(sweep_start - out.value >= options.min_improvement)) break;
  }
  return out;
}

double mean_ape(const std::vector<Scenario>& scenarios, const DriverParams& params,
                const SimOptions& sim) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const Scenario& s : scenarios) {
    double value = NAN;
    try {
      const DrfEgo ego(params.drf, params.controller);
      const RolloutLog log = rollout(s, ego, {}, sim);
      if (log.complete()) {
        std::vector<Vec2> simulated;
        std::vector<Vec2> logged;
        for (const StepRecord& r : log.steps) {
          simulated.push_back({r.ego.pose.x, r.ego.pose.y});
          const Pose2 p = s.ego.pose_at_time(r.t);
          logged.push_back({p.x, p.y});
        }
        value = ape(simulated, logged);
      }
    } catch (const InvalidArgument& e) {
      spdlog::debug("rollout of '{}' rejected: {}", s.id, e.what());
    }
    if (!std::isfinite(value)) {
      spdlog::warn("scenario '{}' gives a non-finite APE; left out of the mean", s.id);
      continue;
    }
    sum += value;
    ++used;
  }
  return used == 0 ? INFINITY : sum / static_cast<double>(used);
}

CalibrationResult calibrate(const std::vector<Scenario>& scenarios, const DriverParams& initial,
                            const Bounds& bounds, const CoordinateDescentOptions& options,
                            const SimOptions& sim) {
  require(!scenarios.empty(), "calibration needs at least one scenario");
  const OptimResult opt = coordinate_descent(
      [&](const std::array<double, kParameterCount>& x) {
        return mean_ape(scenarios, from_vector(x), sim);
      },
      to_vector(initial), bounds, options);
  CalibrationResult r;
  r.params = from_vector(opt.x);
  r.initial_ape = opt.history.front();
  r.final_ape = opt.value;
  r.history = opt.history;
  r.sweeps = opt.sweeps;
  r.evaluations = opt.evaluations;
  return r;
}

}  // namespace drf
