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

#include "dqnn/noise_sweep.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dqnn {

namespace {

EnsembleTask groundTask(const NoiseSweepConfig& config, std::optional<NoiseModel> noise) {
  EnsembleTask task;
  task.task = Task::GroundState;
  task.topology = config.topology;
  task.hamiltonian = config.hamiltonian;
  task.options = config.options;
  task.options.noise = std::move(noise);
  task.phases = config.phases;
  task.localMinimumGap = config.localMinimumGap;
  return task;
}

void checkConfig(const NoiseSweepConfig& config) {
  if (config.restarts < 1) throw std::invalid_argument("noiseSweep: need at least one restart");
  if (!(config.localMinimumGap >= 0.0)) throw std::invalid_argument("noiseSweep: gap must be non-negative");
  for (double s : config.timeScales) {
    if (!(s > 0.0)) throw std::invalid_argument("noiseSweep: time scales must be positive");
  }
  for (double z : config.zzStrengths) {
    if (!(z >= 0.0)) throw std::invalid_argument("noiseSweep: ZZ strengths must be non-negative");
  }
  config.baseline.validate(config.topology);
}

}  // namespace

std::vector<bool> flagAboveBest(const std::vector<double>& energies, double gap) {
  if (energies.empty()) return {};
  const double best = *std::min_element(energies.begin(), energies.end());
  std::vector<bool> flags;
  for (double e : energies) flags.push_back(e > best + gap);
  return flags;
}

LocalMinimumReference localMinimumReference(const NoiseSweepConfig& config, int workers) {
  checkConfig(config);
  const EnsembleStats stats = restartEnsemble(groundTask(config, std::nullopt), config.restarts, config.baseSeed, workers);
  LocalMinimumReference ref;
  for (const auto& run : stats.runs) ref.noiselessEnergies.push_back(run.finalLoss);
  ref.excluded = flagAboveBest(ref.noiselessEnergies, config.localMinimumGap);
  ref.numExcluded = static_cast<int>(std::count(ref.excluded.begin(), ref.excluded.end(), true));
  return ref;
}

SweepResult noiseSweep(const NoiseSweepConfig& config, int workers) {
  if (config.timeScales.empty() || config.zzStrengths.empty()) {
    throw std::invalid_argument("noiseSweep: both grids need at least one value");
  }
  checkConfig(config);
  SweepResult result{localMinimumReference(config, workers), {}};
  const LocalMinimumReference& ref = result.reference;

  for (double scale : config.timeScales) {
    for (double zeta : config.zzStrengths) {
      NoiseModel noise = config.baseline;
      noise.timeScale = scale;
      noise.setZeta(zeta);
      const EnsembleStats stats = restartEnsemble(groundTask(config, std::move(noise)), config.restarts,
                                                  config.baseSeed, workers);
      SweepCell cell;
      cell.timeScale = scale;
      cell.zzStrength = zeta;
      cell.numRuns = config.restarts;
      cell.numExcluded = ref.numExcluded;
      double sum = 0.0;
      for (std::size_t i = 0; i < stats.runs.size(); ++i) {
        cell.finalEnergies.push_back(stats.runs[i].finalLoss);
        if (!ref.excluded[i]) sum += stats.runs[i].finalLoss;
      }
      const int kept = cell.numRuns - cell.numExcluded;
      cell.meanEnergy = kept > 0 ? sum / kept : std::numeric_limits<double>::quiet_NaN();
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace dqnn
