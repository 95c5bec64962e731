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
#include <functional>
#include <optional>
#include <vector>

#include "dqnn/linalg.hpp"
#include "dqnn/network.hpp"
#include "dqnn/noise.hpp"

namespace dqnn {

struct ChannelDataset {
  std::vector<DensityMatrix> inputs;
  std::vector<DensityMatrix> targets;

  std::size_t size() const { return inputs.size(); }
  void validate(const NetworkTopology& topo) const;
};

/// Training inputs: |00>, |01>, |++>, |+i+i> for two qubits and |0>, |1>,
/// |-> for one qubit.
std::vector<DensityMatrix> standardInputs(int numQubits);

/// Every Rx angle uniform on [0, 2pi); phases copied from `phases`
/// (defaults to pi everywhere).
NetworkParams randomParams(const NetworkTopology& topo, std::uint64_t seed,
                           const std::optional<NetworkParams>& phases = std::nullopt);

/// Random parameters that define the channel to be learned.
NetworkParams makeTargetChannel(const NetworkTopology& topo, std::uint64_t seed,
                                const std::optional<NetworkParams>& phases = std::nullopt);

ChannelDataset buildChannelDataset(const NetworkTopology& topo, const NetworkParams& targetParams,
                                   const std::vector<DensityMatrix>& inputs);

struct TrainOptions {
  double learningRate = 0.1;
  int epochs = 200;
  GradientScheme scheme = GradientScheme::Analytic;
  /// Forward states come from the noisy channel when set. Backward terms and
  /// gradients are always computed from the ideal layer unitaries.
  std::optional<NoiseModel> noise;
  /// > 0 replaces every hidden/output state by a finite-shot tomographic estimate.
  long tomographyShots = 0;
  std::uint64_t tomographySeed = 0;
  /// Stop once the loss changed by less than 1e-6 for 10 consecutive epochs.
  bool earlyStop = false;
};

inline constexpr double kConvergenceDelta = 1e-6;
inline constexpr int kConvergenceWindow = 10;
/// Per-sample fidelities above 1 - this are treated as stationary.
inline constexpr double kFidelityStationary = 1e-9;

struct TrainRun {
  std::uint64_t seed = 0;
  double learningRate = 0.0;
  int epochs = 0;
  /// curve[e] is the loss evaluated in the forward pass of epoch e, i.e.
  /// before that epoch's update.
  std::vector<double> curve;
  /// Loss of finalParams.
  double finalLoss = 0.0;
  NetworkParams initialParams;
  NetworkParams finalParams;
  bool converged = false;
  int convergedEpoch = -1;
};

/// Gradient ascent on the mean fidelity over the dataset.
TrainRun trainChannel(const NetworkTopology& topo, const ChannelDataset& dataset, const NetworkParams& init,
                      const TrainOptions& options);

/// Gradient descent on tr(rho^out H) starting from |0...0> on the input layer.
TrainRun trainGroundState(const NetworkTopology& topo, const BackwardTerm& h, const NetworkParams& init,
                          const TrainOptions& options);

/// Forward trace as seen by the trainer (noisy and/or tomographic when configured).
ForwardTrace observedForwardPass(const DensityMatrix& input, const NetworkTopology& topo,
                                 const NetworkParams& params, const TrainOptions& options,
                                 std::uint64_t stream);

/// Mean fidelity of the dataset and its gradient (true derivative of the mean).
struct ChannelObjective {
  double meanFidelity = 0.0;
  NetworkGradient gradient;
};
ChannelObjective channelObjective(const NetworkTopology& topo, const ChannelDataset& dataset,
                                  const NetworkParams& params, const TrainOptions& options,
                                  std::uint64_t stream = 0);

struct EnergyObjective {
  double energy = 0.0;
  NetworkGradient gradient;
};
EnergyObjective energyObjective(const NetworkTopology& topo, const BackwardTerm& h, const NetworkParams& params,
                                const TrainOptions& options, std::uint64_t stream = 0);

/// Random product state: Rxy(b, Phi)|0> for one qubit, Rxy(a1, O1) ⊗ Rxy(a2, O2)|00>
/// for two, with every angle uniform on [0, 2pi).
DensityMatrix randomInputState(int numQubits, std::uint64_t seed);

struct FidelityStatistics {
  std::vector<double> fidelities;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  /// Counts over `bins` equal-width bins of [0, 1].
  std::vector<int> histogram;

  double fractionAbove(double threshold) const;
};

FidelityStatistics summarizeFidelities(std::vector<double> fidelities, int bins = 20);

/// Fidelity between the network's and the target channel's outputs for
/// `numStates` random inputs.
FidelityStatistics generalizationTest(const NetworkTopology& topo, const NetworkParams& params,
                                      const NetworkParams& targetParams, int numStates, std::uint64_t seed,
                                      int bins = 20);

enum class Task { Channel, GroundState };

struct EnsembleTask {
  Task task = Task::Channel;
  NetworkTopology topology;
  /// Channel task only.
  ChannelDataset dataset;
  /// Ground-state task only.
  std::optional<BackwardTerm> hamiltonian;
  TrainOptions options;
  /// Phases for the random initial parameters.
  std::optional<NetworkParams> phases;
  /// Ground state: runs ending above the reference energy + gap are local minima.
  double localMinimumGap = 0.05;
  /// Ground state: reference energy; defaults to the ground energy of H.
  std::optional<double> referenceEnergy;
  /// Channel: runs ending below this mean fidelity are local minima.
  double fidelityThreshold = 0.9;
};

struct EnsembleStats {
  std::vector<TrainRun> runs;
  std::vector<bool> localMinimum;
  double meanFinal = 0.0;
  /// Mean over runs not flagged as local minima (NaN if all are flagged).
  double meanRegular = 0.0;
  int numLocalMinima = 0;
};

/// Independent runs seeded baseSeed + i. `workers` > 1 trains runs on a
/// thread pool; the result does not depend on the worker count.
EnsembleStats restartEnsemble(const EnsembleTask& task, int numRestarts, std::uint64_t baseSeed, int workers = 1);

/// Runs fn(0..count-1) on up to `workers` threads.
void parallelFor(int count, int workers, const std::function<void(int)>& fn);

}  // namespace dqnn
