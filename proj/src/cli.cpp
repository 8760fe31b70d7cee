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

#include "drf_critic/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "drf_critic/augment.hpp"
#include "drf_critic/il_interface.hpp"
#include "drf_critic/io.hpp"
#include "drf_critic/metrics_report.hpp"
#include "drf_critic/plot.hpp"
#include "drf_critic/scenario_gen.hpp"

namespace drf::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string scenario;
  std::string scenario_dir;
  std::string out{"."};
  std::string styles;
  std::string ego{"log-replay"};
  std::optional<std::size_t> agents;
  int k{0};
  unsigned workers{1};
  std::uint64_t seed{0};  // reserved; every pipeline here is deterministic
  std::string config;
  Json config_json = Json::object();
};

void setup_logging() {
  static const bool once = [] {
    auto logger = spdlog::get("drf_critic");
    if (!logger) logger = spdlog::stderr_color_mt("drf_critic");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
  const char* env = std::getenv("DRF_CRITIC_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

struct LoadedScenario {
  fs::path path;
  Scenario scenario;
};

std::vector<LoadedScenario> load_scenarios(const RunConfig& cfg) {
  std::vector<fs::path> files;
  if (!cfg.scenario.empty()) files.emplace_back(cfg.scenario);
  if (!cfg.scenario_dir.empty()) {
    for (const fs::path& p : io::scenario_files(cfg.scenario_dir)) files.push_back(p);
  }
  if (files.empty()) throw UsageError("one of --scenario or --scenario-dir is required");
  std::vector<LoadedScenario> out;
  for (const fs::path& p : files) out.push_back({p, io::read_scenario(p)});
  return out;
}

StyleLibrary load_styles(const RunConfig& cfg) {
  return cfg.styles.empty() ? StyleLibrary::defaults() : io::read_style_library(cfg.styles);
}

std::unique_ptr<EgoPolicy> make_ego(const RunConfig& cfg, const StyleLibrary& styles,
                                    const Scenario& scenario) {
  if (cfg.ego == "log-replay") return std::make_unique<GroundTruthPlayback>();
  if (cfg.ego == "const-v") return std::make_unique<ConstantVelocity>();
  if (cfg.ego == "drf") {
    return std::make_unique<DrfEgo>(styles.cautious.drf, styles.cautious.controller);
  }
  if (cfg.ego.rfind("file:", 0) == 0) return io::read_external_actions(cfg.ego.substr(5), scenario.id);
  throw UsageError("unknown --ego '" + cfg.ego + "' (log-replay, const-v, drf or file:<path>)");
}

void validate_ego(const std::string& ego) {
  if (ego != "log-replay" && ego != "const-v" && ego != "drf" && ego.rfind("file:", 0) != 0) {
    throw UsageError("unknown --ego '" + ego + "' (log-replay, const-v, drf or file:<path>)");
  }
}

std::string file_stem(const std::string& id) {
  std::string s = id;
  for (char& c : s) {
    if (c == '#' || c == '/' || c == '\\') c = '_';
  }
  return s;
}

/// Agents selected by --agents drive with the cautious style; the rest replay.
std::vector<AgentConfig> cautious_agents(const RunConfig& cfg, const Scenario& s,
                                         const StyleLibrary& styles) {
  if (!cfg.agents) return {};
  return assignment_configs(search_agents(s, cfg.agents), 0, styles);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError(dir.string() + ": cannot create directory");
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  validate_ego(cfg.ego);
  const auto scenarios = load_scenarios(cfg);
  const StyleLibrary styles = load_styles(cfg);
  const fs::path dir(cfg.out);
  ensure_dir(dir);
  const bool batch = scenarios.size() > 1 || !cfg.scenario_dir.empty();
  if (batch) ensure_dir(dir / "rollouts");

  std::vector<RolloutLog> logs(scenarios.size());
  std::vector<std::unique_ptr<EgoPolicy>> policies;
  for (const LoadedScenario& s : scenarios) policies.push_back(make_ego(cfg, styles, s.scenario));
  parallel_for(scenarios.size(), cfg.workers, [&](std::size_t i) {
    const Scenario& s = scenarios[i].scenario;
    logs[i] = rollout(s, *policies[i], cautious_agents(cfg, s, styles));
  });

  std::vector<NamedReport> reports;
  Json per = Json::array();
  bool failed = false;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& s = scenarios[i].scenario;
    const fs::path log_path =
        batch ? dir / "rollouts" / (file_stem(s.id) + ".jsonl") : dir / "rollout.jsonl";
    std::ofstream lf(log_path, std::ios::binary);
    if (!lf) throw DataError(log_path.string() + ": cannot write");
    io::write_rollout_jsonl(lf, logs[i]);
    const MetricsReport m = compute_metrics(logs[i], s);
    reports.push_back({s.id, m});
    Json row;
    row["scenario_id"] = s.id;
    const Json mj = io::metrics_to_json(m);
    for (const auto& [key, value] : mj.items()) row[key] = value;
    if (logs[i].error) {
      row["error"] = *logs[i].error;
      spdlog::error("{}: {}", scenarios[i].path.string(), *logs[i].error);
      failed = true;
    }
    per.push_back(std::move(row));
  }
  const AggregateReport agg = aggregate_reports(reports);
  Json j = io::metrics_to_json(agg.total);
  j["scenarios"] = std::move(per);
  io::write_json_file(dir / "metrics.json", j);
  out << "simulated " << scenarios.size() << " scenario(s); collisions " << agg.total.collisions()
      << ", off-road " << agg.total.off_road << ", aggressive " << agg.total.aggressive_driving
      << '\n';
  return failed ? kDataError : kOk;
}

int run_gen_critical(const RunConfig& cfg, std::ostream& out) {
  validate_ego(cfg.ego);
  const auto scenarios = load_scenarios(cfg);
  const StyleLibrary styles = load_styles(cfg);
  const fs::path dir(cfg.out);
  ensure_dir(dir);
  SearchOptions opts;
  opts.agents = cfg.agents;
  opts.workers = cfg.workers;

  std::vector<Json> results;
  MetricsReport cautious;
  MetricsReport critical;
  for (const LoadedScenario& s : scenarios) {
    const auto ego = make_ego(cfg, styles, s.scenario);
    const SearchResult r = find_critical(s.scenario, *ego, styles, opts);
    cautious += r.table.front().metrics;
    critical += r.best_result().metrics;
    results.push_back(io::search_result_to_json(r));
    out << s.scenario.id << ": " << r.table.size() << " assignments, best mask " << r.best
        << ", J " << io::round9(r.best_result().cost) << '\n';
  }
  if (scenarios.size() == 1 && cfg.scenario_dir.empty()) {
    io::write_json_file(dir / "search_result.json", results.front());
  } else {
    Json j;
    j["scenarios"] = results;
    Json totals;
    totals["all_cautious"] = io::metrics_to_json(cautious);
    totals["critical"] = io::metrics_to_json(critical);
    j["totals"] = std::move(totals);
    io::write_json_file(dir / "search_results.json", j);
  }
  const std::vector<TableRow> rows{{"all-cautious", cautious}, {"critical", critical}};
  std::ofstream md(dir / "summary.md", std::ios::binary);
  write_markdown_table(md, rows);
  std::ofstream csv(dir / "summary.csv", std::ios::binary);
  write_csv_table(csv, rows);
  if (!md || !csv) throw DataError(dir.string() + ": cannot write summary tables");
  return kOk;
}

int run_augment(const RunConfig& cfg, std::ostream& out) {
  const auto scenarios = load_scenarios(cfg);
  const fs::path dir(cfg.out);
  ensure_dir(dir);
  AugmentPolicy policy;
  policy.aggressive = load_styles(cfg).aggressive;
  std::vector<std::optional<Scenario>> results(scenarios.size());
  parallel_for(scenarios.size(), cfg.workers, [&](std::size_t i) {
    results[i] = augment_scenario(scenarios[i].scenario, policy);
  });
  Json summary = Json::array();
  std::size_t count = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    Json row;
    row["scenario_id"] = scenarios[i].scenario.id;
    row["augmented"] = results[i].has_value();
    if (results[i]) {
      const std::string name = file_stem(results[i]->id) + ".json";
      io::write_scenario(dir / name, *results[i]);
      row["file"] = name;
      ++count;
    }
    summary.push_back(std::move(row));
  }
  io::write_json_file(dir / "augment_summary.json", summary);
  out << "augmented " << count << " of " << scenarios.size() << " scenario(s)\n";
  return kOk;
}

int run_calibrate(const RunConfig& cfg, std::ostream& out) {
  const auto loaded = load_scenarios(cfg);
  std::vector<Scenario> scenarios;
  for (const LoadedScenario& s : loaded) scenarios.push_back(s.scenario);
  const Json& c = cfg.config_json;
  DriverParams initial = load_styles(cfg).cautious;
  Bounds bounds = frozen_bounds(initial);
  CoordinateDescentOptions opts;
  try {
    if (c.contains("initial")) initial = io::driver_params_from_json(c.at("initial"));
    bounds = io::bounds_from_json(c.value("bounds", Json::object()), initial);
    opts.max_sweeps = c.value("max_sweeps", opts.max_sweeps);
    opts.min_improvement = c.value("min_improvement", opts.min_improvement);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(cfg.config + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(cfg.config + ": " + e.what());
  }
  const CalibrationResult r = calibrate(scenarios, initial, bounds, opts);
  const fs::path dir(cfg.out);
  ensure_dir(dir);
  io::write_json_file(dir / "calibration.json", io::calibration_to_json(r));
  out << "calibrated on " << scenarios.size() << " scenario(s): APE " << io::round9(r.initial_ape)
      << " -> " << io::round9(r.final_ape) << " m after " << r.sweeps << " sweep(s)\n";
  return kOk;
}

int run_export(const RunConfig& cfg, std::ostream& out) {
  std::vector<fs::path> files;
  if (!cfg.scenario.empty()) files.emplace_back(cfg.scenario);
  if (!cfg.scenario_dir.empty()) {
    for (const fs::path& p : io::scenario_files(cfg.scenario_dir)) files.push_back(p);
  }
  if (files.empty()) throw UsageError("one of --scenario or --scenario-dir is required");
  std::vector<Scenario> scenarios;
  for (const fs::path& p : files) {
    try {
      scenarios.push_back(io::read_scenario(p));
    } catch (const DataError& e) {
      // A single malformed file in a batch is skipped; an explicit one is fatal.
      if (!cfg.scenario.empty() && p == fs::path(cfg.scenario)) throw;
      spdlog::warn("skipping {}", e.what());
    }
  }
  const fs::path dir(cfg.out);
  ensure_dir(dir);
  const std::size_t n =
      export_pairs(scenarios, cfg.k, cfg.agents.value_or(3), dir / "dataset.jsonl");
  out << "wrote " << n << " training pair(s)\n";
  return kOk;
}

int run_plot(const RunConfig& cfg, std::ostream& out) {
  validate_ego(cfg.ego);
  if (cfg.scenario.empty()) throw UsageError("plot needs --scenario");
  const Scenario s = io::read_scenario(cfg.scenario);
  const StyleLibrary styles = load_styles(cfg);
  const auto ego = make_ego(cfg, styles, s);
  const RolloutLog log = rollout(s, *ego, cautious_agents(cfg, s, styles));
  const std::size_t frames = write_plots(cfg.out, s, log);
  out << "wrote " << frames << " frame(s) to " << cfg.out << '\n';
  return log.error ? kDataError : kOk;
}

// Values from --config fill every option the command line left unset.
void apply_config(RunConfig& cfg, CLI::App& sub) {
  if (cfg.config.empty()) return;
  cfg.config_json = io::read_config(cfg.config);
  const Json& c = cfg.config_json;
  auto unset = [&](const char* flag) {
    const CLI::Option* o = sub.get_option_no_throw(flag);
    return o != nullptr && o->count() == 0;
  };
  try {
    if (unset("--scenario") && c.contains("scenario")) cfg.scenario = c["scenario"].get<std::string>();
    if (unset("--scenario-dir") && c.contains("scenario_dir")) {
      cfg.scenario_dir = c["scenario_dir"].get<std::string>();
    }
    if (unset("--out") && c.contains("out")) cfg.out = c["out"].get<std::string>();
    if (unset("--styles") && c.contains("styles")) cfg.styles = c["styles"].get<std::string>();
    if (unset("--ego") && c.contains("ego")) cfg.ego = c["ego"].get<std::string>();
    if (unset("--agents") && c.contains("agents")) cfg.agents = c["agents"].get<std::size_t>();
    if (unset("--k") && c.contains("k")) cfg.k = c["k"].get<int>();
    if (unset("--workers") && c.contains("workers")) cfg.workers = c["workers"].get<unsigned>();
    if (unset("--seed") && c.contains("seed")) cfg.seed = c["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(cfg.config + ": " + e.what());
  }
  if (cfg.workers < 1) throw UsageError("--workers must be at least 1");
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  setup_logging();
  CLI::App app{"DRF traffic simulator and scenario tools", "drf_critic"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool ego, bool agents, bool workers) {
    sub->add_option("--scenario", cfg.scenario, "scenario JSON file");
    sub->add_option("--scenario-dir", cfg.scenario_dir, "directory of scenario JSON files");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--styles", cfg.styles, "style library (cautious/aggressive parameters)");
    sub->add_option("--config", cfg.config, "JSON or TOML file with option defaults");
    sub->add_option("--seed", cfg.seed, "reserved");
    if (ego) sub->add_option("--ego", cfg.ego, "log-replay | const-v | drf | file:<path>");
    if (agents) sub->add_option("--agents", cfg.agents, "number of agents M");
    if (workers) sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  };
  CLI::App* simulate = app.add_subcommand("simulate", "roll out scenarios and write metrics");
  common(simulate, true, true, true);
  CLI::App* critical = app.add_subcommand("gen-critical", "search aggressive/cautious agent styles");
  common(critical, true, true, true);
  CLI::App* augment = app.add_subcommand("augment", "rewrite ego speeds where a rear vehicle closes in");
  common(augment, false, false, true);
  CLI::App* calib = app.add_subcommand("calibrate", "fit DRF parameters to logged ego tracks");
  common(calib, false, false, false);
  CLI::App* exporter = app.add_subcommand("export-dataset", "write imitation-learning pairs");
  common(exporter, false, true, false);
  exporter->add_option("--k", cfg.k, "first labelled step K");
  CLI::App* plot = app.add_subcommand("plot", "per-step CSV and SVG frames");
  common(plot, true, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    apply_config(cfg, *sub);
    if (sub == simulate) return run_simulate(cfg, out);
    if (sub == critical) return run_gen_critical(cfg, out);
    if (sub == augment) return run_augment(cfg, out);
    if (sub == calib) return run_calibrate(cfg, out);
    if (sub == exporter) return run_export(cfg, out);
    return run_plot(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace drf::cli
