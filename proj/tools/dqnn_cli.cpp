// Copyright 2026 The DQNN Authors
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

// Command-line driver for the experiments.
//
//   dqnn_cli train-channel --config configs/dqnn1_channel.json --out runs/c1
//   dqnn_cli sweep-noise --config configs/h2_sweep.json
//
// Flags override the matching config fields.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dqnn/runner.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> restarts;
  std::optional<std::string> gradient;
  std::optional<std::string> noise;
  bool tomographic = false;
};

void addCommonFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--restarts", o.restarts, "number of independent runs");
  cmd->add_option("--gradient", o.gradient, "analytic or shift");
  cmd->add_option("--noise", o.noise, "JSON file holding a noise block")->check(CLI::ExistingFile);
  cmd->add_flag("--tomographic", o.tomographic, "estimate layer states by simulated tomography");
}

dqnn::runner::RunConfig resolveConfig(const Overrides& o) {
  std::ifstream is(o.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config " + o.config + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (o.seed) j["seed"] = *o.seed;
  if (o.out) j["out"] = *o.out;
  if (o.restarts) j["restarts"] = *o.restarts;
  if (o.gradient) j["gradient"] = *o.gradient;
  if (o.tomographic) j["tomographic"] = true;
  if (o.noise) {
    std::ifstream ns(*o.noise);
    try {
      j["noise"] = nlohmann::json::parse(ns);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("noise file " + *o.noise + " is not valid JSON: " + e.what());
    }
  }
  return dqnn::runner::parseConfig(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-matrix training of deep quantum neural networks"};
  app.require_subcommand(1);

  Overrides o;
  using Command = dqnn::runner::CommandResult (*)(const dqnn::runner::RunConfig&);
  const std::pair<const char*, Command> commands[] = {
      {"train-channel", dqnn::runner::cmdTrainChannel},
      {"train-ground", dqnn::runner::cmdTrainGroundState},
      {"sweep-noise", dqnn::runner::cmdSweepNoise},
      {"eval-generalization", dqnn::runner::cmdEvalGeneralization},
      {"tomo-demo", dqnn::runner::cmdTomographyDemo},
  };
  const char* descriptions[] = {
      "learn a target channel by fidelity ascent",
      "minimise tr(rho H) on the output layer",
      "ground-state training over a grid of T/T0 and ZZ strengths",
      "trained vs untrained fidelities on random inputs",
      "sample and reconstruct a named state",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, descriptions[i]));
    addCommonFlags(subs.back(), o);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const auto config = resolveConfig(o);
      const auto result = commands[i].second(config);
      std::cout << result.summary.dump(2) << "\nwrote " << result.outDir.string() << "\n";
      return 0;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const dqnn::runner::AuditError& e) {
      std::cerr << "audit failed: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
