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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dqnn/network.hpp"
#include "dqnn/noise.hpp"
#include "dqnn/training.hpp"

namespace dqnn::runner {

inline constexpr int kFormatVersion = 1;
/// Worker-pool size for restart ensembles; unset means serial.
inline constexpr const char* kWorkersEnv = "DQNN_WORKERS";

struct NoiseSettings {
  /// "processor" (six-qubit device values), "uniform" or "none".
  std::string model = "processor";
  double zzStrength = 0.0;  // rad/us
  double timeScale = 1.0;
  double t1Us = 10.0;  // uniform model only
  double t2Us = 10.0;
  double twoQubitNs = 60.0;
  double singleGateNs = 40.0;
  /// Grids for sweep-noise.
  std::vector<double> timeScales;
  std::vector<double> zzStrengths;
};

struct GeneralizationSettings {
  int numStates = 100;
  std::uint64_t seed = 7;
  int bins = 20;
  /// params.json of a run, or a train-channel output directory.
  std::string params;
  /// target_params.json; defaults to the one next to a train-channel directory.
  std::string targetParams;
  int run = 0;
};

struct TomographySettings {
  /// zero, one, plus, minus, plus_i or random.
  std::string state = "plus";
  int numQubits = 1;
  long shots = 10000;
  bool exact = false;
  std::uint64_t seed = 11;
};

struct RunConfig {
  /// "dqnn1", "dqnn2" or "custom" (then `widths` is used).
  std::string topologyName = "dqnn1";
  std::vector<int> widths{2, 2, 2};
  /// "default" or "hardware".
  std::string order = "default";
  /// "pi" or "hardware".
  std::string phases = "pi";
  Task task = Task::Channel;
  std::uint64_t seed = 1;
  std::uint64_t targetSeed = 2024;
  double learningRate = 0.5;
  int epochs = 200;
  GradientScheme gradient = GradientScheme::Analytic;
  int restarts = 1;
  bool tomographic = false;
  long shots = 10000;
  std::optional<std::array<double, 6>> coefficients;
  /// "z": Pauli Z on the first output qubit.
  std::string hamiltonianPreset;
  double localMinimumGap = 0.05;
  double fidelityThreshold = 0.9;
  std::optional<NoiseSettings> noise;
  GeneralizationSettings generalization;
  TomographySettings tomography;
  std::string out = "runs/out";

  NetworkTopology topology() const;
  NetworkParams phaseTemplate() const;
  BackwardTerm hamiltonian() const;
  std::optional<NoiseModel> noiseModel() const;
  TrainOptions trainOptions() const;
};

/// Throws std::invalid_argument naming the offending field. Unknown keys are
/// rejected.
RunConfig parseConfig(const nlohmann::json& j);
RunConfig loadConfig(const std::filesystem::path& path);
NoiseSettings parseNoise(const nlohmann::json& j);

/// Canonical form with every default filled in.
nlohmann::json toJson(const RunConfig& config);
/// FNV-1a of the canonical JSON, as 16 hex digits.
std::string configHash(const RunConfig& config);

nlohmann::json paramsToJson(const NetworkParams& params);
NetworkParams paramsFromJson(const nlohmann::json& j, const NetworkTopology& topo);

int workersFromEnv();

/// CSV text with a header row; doubles printed with 12 significant digits.
std::string curveCsv(const std::vector<double>& curve, const std::string& valueColumn);

struct CommandResult {
  std::filesystem::path outDir;
  nlohmann::json summary;
};

/// Every command writes into "<out>.partial" and renames it to <out> once all
/// artifacts and audits succeeded; on error nothing is left behind.
CommandResult cmdTrainChannel(const RunConfig& config);
CommandResult cmdTrainGroundState(const RunConfig& config);
CommandResult cmdSweepNoise(const RunConfig& config);
CommandResult cmdEvalGeneralization(const RunConfig& config);
CommandResult cmdTomographyDemo(const RunConfig& config);

/// Raised when a finished run violates an output invariant.
class AuditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dqnn::runner
