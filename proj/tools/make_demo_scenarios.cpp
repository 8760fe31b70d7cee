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

// Writes the synthetic benchmark used in the README walkthrough.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "drf_critic/io.hpp"
#include "drf_critic/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic intersection/following scenarios", "make_demo_scenarios"};
  std::string out = "scenarios";
  std::size_t count = 50;
  std::uint64_t seed = 7;
  bool corridor = false;
  app.add_option("--out", out, "output directory");
  app.add_option("--count", count, "number of scenarios");
  app.add_option("--seed", seed, "generator seed");
  app.add_flag("--corridor", corridor, "also write the single-obstacle corridor");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out);
  for (const drf::Scenario& s : drf::synthetic::benchmark_set("demo", count, seed)) {
    drf::io::write_scenario(std::filesystem::path(out) / (s.id + ".json"), s);
  }
  if (corridor) {
    const drf::Scenario s = drf::synthetic::corridor("corridor", 75.0, 13.5, 80);
    drf::io::write_scenario(std::filesystem::path(out) / "corridor.json", s);
  }
  std::cout << "wrote " << count + (corridor ? 1 : 0) << " scenario(s) to " << out << '\n';
  return 0;
}
