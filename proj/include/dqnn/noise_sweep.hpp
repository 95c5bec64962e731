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

#include <cstdint>
#include <optional>
#include <vector>

#include "dqnn/linalg.hpp"
#include "dqnn/network.hpp"
#include "dqnn/noise.hpp"
#include "dqnn/training.hpp"

namespace dqnn {

/// Ground-state training repeated over a grid of coherence-time scales and ZZ
/// strengths. Every cell reuses the same restart seeds.
struct NoiseSweepConfig {
  NetworkTopology topology;
  BackwardTerm hamiltonian = BackwardTerm::zero(1);
  /// Training settings; `options.noise` is ignored.
  TrainOptions options;
  /// Coherence times, gate durations and coupled pairs; timeScale and zeta
  /// are overwritten per cell.
  NoiseModel baseline;
  std::optional<NetworkParams> phases;
  std::vector<double> timeScales;
  std::vector<double> zzStrengths;
  int restarts = 30;
  std::uint64_t baseSeed = 0;
  /// Seeds whose noiseless run ends more than this above the best noiseless
  /// run are treated as local-minimum instances and excluded from every cell.
  double localMinimumGap = 0.05;
};

/// Noiseless reference ensemble used to flag local-minimum seeds.
struct LocalMinimumReference {
  std::vector<double> noiselessEnergies;
  std::vector<bool> excluded;
  int numExcluded = 0;
};

LocalMinimumReference localMinimumReference(const NoiseSweepConfig& config, int workers = 1);

struct SweepCell {
  double timeScale = 1.0;
  double zzStrength = 0.0;
  /// Mean final energy over the seeds that were not excluded.
  double meanEnergy = 0.0;
  int numRuns = 0;
  int numExcluded = 0;
  std::vector<double> finalEnergies;
};

struct SweepResult {
  LocalMinimumReference reference;
  /// Row-major: time scale outer, ZZ strength inner.
  std::vector<SweepCell> cells;
};

SweepResult noiseSweep(const NoiseSweepConfig& config, int workers = 1);

/// Flags values more than `gap` above the smallest one.
std::vector<bool> flagAboveBest(const std::vector<double>& energies, double gap);

}  // namespace dqnn
