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

#include "dqnn/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "dqnn/gates.hpp"
#include "dqnn/random.hpp"
#include "dqnn/tomography.hpp"

namespace dqnn {

namespace {

void checkOptions(const TrainOptions& options, const NetworkTopology& topo) {
  if (!(options.learningRate > 0.0) || !std::isfinite(options.learningRate)) {
    throw std::invalid_argument("learning rate must be positive and finite");
  }
  if (options.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (options.tomographyShots < 0) throw std::invalid_argument("tomography shots must be >= 0");
  if (options.noise) options.noise->validate(topo);
}

/// Tracks the convergence criterion across epochs.
struct ConvergenceMonitor {
  int quiet = 0;
  bool converged = false;
  int epoch = -1;

  /// Returns true once the criterion has been met.
  bool update(const std::vector<double>& curve) {
    if (curve.size() < 2) return converged;
    const double delta = std::abs(curve[curve.size() - 1] - curve[curve.size() - 2]);
    quiet = delta < kConvergenceDelta ? quiet + 1 : 0;
    if (!converged && quiet >= kConvergenceWindow) {
      converged = true;
      epoch = static_cast<int>(curve.size()) - 1;
    }
    return converged;
  }
};

template <typename Objective>
TrainRun gradientLoop(const NetworkTopology& topo, const NetworkParams& init, const TrainOptions& options,
                      double direction, Objective objective) {
  TrainRun run;
  run.learningRate = options.learningRate;
  run.initialParams = init;
  NetworkParams params = init;
  ConvergenceMonitor monitor;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const auto [loss, gradient] = objective(params, static_cast<std::uint64_t>(epoch));
    run.curve.push_back(loss);
    applyUpdate(params, gradient, direction * options.learningRate);
    if (monitor.update(run.curve) && options.earlyStop) break;
  }
  run.epochs = static_cast<int>(run.curve.size());
  run.finalLoss = objective(params, static_cast<std::uint64_t>(run.epochs)).first;
  run.finalParams = std::move(params);
  run.converged = monitor.converged;
  run.convergedEpoch = monitor.epoch;
  (void)topo;
  return run;
}

}  // namespace

void ChannelDataset::validate(const NetworkTopology& topo) const {
  if (inputs.empty()) throw std::invalid_argument("dataset is empty");
  if (inputs.size() != targets.size()) throw std::invalid_argument("dataset inputs and targets differ in count");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].numQubits() != topo.inputWidth()) {
      throw std::invalid_argument("dataset input " + std::to_string(i) + " does not match the input layer");
    }
    if (targets[i].numQubits() != topo.outputWidth()) {
      throw std::invalid_argument("dataset target " + std::to_string(i) + " does not match the output layer");
    }
  }
}

std::vector<DensityMatrix> standardInputs(int numQubits) {
  using namespace ket;
  switch (numQubits) {
    case 1:
      return {DensityMatrix::fromKet(zero()), DensityMatrix::fromKet(one()), DensityMatrix::fromKet(minus())};
    case 2:
      return {DensityMatrix::fromKet(product({zero(), zero()})), DensityMatrix::fromKet(product({zero(), one()})),
              DensityMatrix::fromKet(product({plus(), plus()})), DensityMatrix::fromKet(product({plusI(), plusI()}))};
    default:
      throw std::invalid_argument("standardInputs: only one- and two-qubit input layers are defined");
  }
}

NetworkParams randomParams(const NetworkTopology& topo, std::uint64_t seed,
                           const std::optional<NetworkParams>& phases) {
  topo.validate();
  NetworkParams params = phases ? *phases : NetworkParams::uniform(topo);
  params.validate(topo);
  Rng rng(seed);
  for (auto& grid : params.interfaces) {
    for (auto& p : grid) {
      p.theta1 = rng.angle();
      p.theta2 = rng.angle();
    }
  }
  return params;
}

NetworkParams makeTargetChannel(const NetworkTopology& topo, std::uint64_t seed,
                                const std::optional<NetworkParams>& phases) {
  return randomParams(topo, seed, phases);
}

ChannelDataset buildChannelDataset(const NetworkTopology& topo, const NetworkParams& targetParams,
                                   const std::vector<DensityMatrix>& inputs) {
  ChannelDataset data;
  for (const auto& in : inputs) {
    data.inputs.push_back(in);
    data.targets.push_back(forwardPass(in, topo, targetParams).output());
  }
  data.validate(topo);
  return data;
}

ForwardTrace observedForwardPass(const DensityMatrix& input, const NetworkTopology& topo,
                                 const NetworkParams& params, const TrainOptions& options,
                                 std::uint64_t stream) {
  ForwardTrace trace = options.noise ? noisyForwardPass(input, topo, params, *options.noise)
                                     : forwardPass(input, topo, params);
  if (options.tomographyShots > 0) {
    const std::uint64_t base = deriveSeed(options.tomographySeed, stream);
    for (std::size_t l = 1; l < trace.states.size(); ++l) {
      trace.states[l] = tomographicEstimate(trace.states[l], options.tomographyShots, deriveSeed(base, l));
    }
  }
  return trace;
}

ChannelObjective channelObjective(const NetworkTopology& topo, const ChannelDataset& dataset,
                                  const NetworkParams& params, const TrainOptions& options,
                                  std::uint64_t stream) {
  ChannelObjective out{0.0, NetworkGradient::zeros(topo)};
  const auto n = static_cast<double>(dataset.size());
  for (std::size_t x = 0; x < dataset.size(); ++x) {
    const ForwardTrace fwd =
        observedForwardPass(dataset.inputs[x], topo, params, options, stream * dataset.size() + x);
    const double f = fidelity(fwd.output(), dataset.targets[x]);
    out.meanFidelity += f / n;
    if (f >= 1.0 - kFidelityStationary) continue;
    const BackwardTerm sigmaOut = sigmaOutForFidelity(fwd.output(), dataset.targets[x]);
    const BackwardTrace bwd = backwardPass(sigmaOut, topo, params);
    out.gradient.axpy(0.5 / n, networkGradient(fwd, bwd, topo, params, options.scheme));
  }
  return out;
}

EnergyObjective energyObjective(const NetworkTopology& topo, const BackwardTerm& h, const NetworkParams& params,
                                const TrainOptions& options, std::uint64_t stream) {
  if (h.numQubits() != topo.outputWidth()) {
    throw std::invalid_argument("Hamiltonian does not act on the output layer");
  }
  const ForwardTrace fwd =
      observedForwardPass(DensityMatrix::zeros(topo.inputWidth()), topo, params, options, stream);
  const BackwardTrace bwd = backwardPass(h, topo, params);
  return {energyLoss(fwd.output(), h), networkGradient(fwd, bwd, topo, params, options.scheme)};
}

TrainRun trainChannel(const NetworkTopology& topo, const ChannelDataset& dataset, const NetworkParams& init,
                      const TrainOptions& options) {
  topo.validate();
  init.validate(topo);
  dataset.validate(topo);
  checkOptions(options, topo);
  return gradientLoop(topo, init, options, +1.0, [&](const NetworkParams& p, std::uint64_t epoch) {
    auto obj = channelObjective(topo, dataset, p, options, epoch);
    return std::pair{obj.meanFidelity, std::move(obj.gradient)};
  });
}

TrainRun trainGroundState(const NetworkTopology& topo, const BackwardTerm& h, const NetworkParams& init,
                          const TrainOptions& options) {
  topo.validate();
  init.validate(topo);
  checkOptions(options, topo);
  return gradientLoop(topo, init, options, -1.0, [&](const NetworkParams& p, std::uint64_t epoch) {
    auto obj = energyObjective(topo, h, p, options, epoch);
    return std::pair{obj.energy, std::move(obj.gradient)};
  });
}

DensityMatrix randomInputState(int numQubits, std::uint64_t seed) {
  if (numQubits < 1) throw std::invalid_argument("randomInputState: need at least one qubit");
  Rng rng(seed);
  ComplexVector psi = ComplexVector::Ones(1);
  for (int q = 0; q < numQubits; ++q) {
    const double rot = rng.angle();
    const double axis = rng.angle();
    const ComplexVector single = rotXY(axis, rot) * ket::zero();
    const ComplexVector prev = psi;
    psi.resize(prev.size() * 2);
    for (Eigen::Index i = 0; i < prev.size(); ++i) {
      psi(2 * i) = prev(i) * single(0);
      psi(2 * i + 1) = prev(i) * single(1);
    }
  }
  return DensityMatrix::fromKet(psi);
}

double FidelityStatistics::fractionAbove(double threshold) const {
  if (fidelities.empty()) return 0.0;
  const auto count = std::count_if(fidelities.begin(), fidelities.end(), [&](double f) { return f > threshold; });
  return static_cast<double>(count) / static_cast<double>(fidelities.size());
}

FidelityStatistics summarizeFidelities(std::vector<double> fidelities, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  FidelityStatistics s;
  s.histogram.assign(static_cast<std::size_t>(bins), 0);
  if (!fidelities.empty()) {
    s.mean = std::accumulate(fidelities.begin(), fidelities.end(), 0.0) / static_cast<double>(fidelities.size());
    const auto [lo, hi] = std::minmax_element(fidelities.begin(), fidelities.end());
    s.min = *lo;
    s.max = *hi;
  }
  for (double f : fidelities) {
    const double clamped = std::clamp(f, 0.0, 1.0);
    const int b = std::min(bins - 1, static_cast<int>(clamped * bins));
    ++s.histogram[static_cast<std::size_t>(b)];
  }
  s.fidelities = std::move(fidelities);
  return s;
}

FidelityStatistics generalizationTest(const NetworkTopology& topo, const NetworkParams& params,
                                      const NetworkParams& targetParams, int numStates, std::uint64_t seed,
                                      int bins) {
  if (numStates < 1) throw std::invalid_argument("generalizationTest: need at least one state");
  params.validate(topo);
  targetParams.validate(topo);
  std::vector<double> fids;
  fids.reserve(static_cast<std::size_t>(numStates));
  for (int k = 0; k < numStates; ++k) {
    const DensityMatrix in = randomInputState(topo.inputWidth(), deriveSeed(seed, static_cast<std::uint64_t>(k)));
    fids.push_back(fidelity(forwardPass(in, topo, params).output(), forwardPass(in, topo, targetParams).output()));
  }
  return summarizeFidelities(std::move(fids), bins);
}

void parallelFor(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex errorMutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(errorMutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

EnsembleStats restartEnsemble(const EnsembleTask& task, int numRestarts, std::uint64_t baseSeed, int workers) {
  if (numRestarts < 1) throw std::invalid_argument("restartEnsemble: need at least one restart");
  task.topology.validate();
  double reference = 0.0;
  if (task.task == Task::GroundState) {
    if (!task.hamiltonian) throw std::invalid_argument("restartEnsemble: ground-state task needs a Hamiltonian");
    reference = task.referenceEnergy.value_or(groundEnergy(*task.hamiltonian));
  } else {
    task.dataset.validate(task.topology);
  }

  EnsembleStats stats;
  stats.runs.resize(static_cast<std::size_t>(numRestarts));
  parallelFor(numRestarts, workers, [&](int i) {
    const std::uint64_t seed = baseSeed + static_cast<std::uint64_t>(i);
    const NetworkParams init = randomParams(task.topology, seed, task.phases);
    TrainOptions options = task.options;
    options.tomographySeed = deriveSeed(task.options.tomographySeed + seed, 0x70u);
    TrainRun run = task.task == Task::Channel ? trainChannel(task.topology, task.dataset, init, options)
                                              : trainGroundState(task.topology, *task.hamiltonian, init, options);
    run.seed = seed;
    stats.runs[static_cast<std::size_t>(i)] = std::move(run);
  });

  double sumAll = 0.0;
  double sumRegular = 0.0;
  int regular = 0;
  for (const auto& run : stats.runs) {
    const bool local = task.task == Task::GroundState ? run.finalLoss > reference + task.localMinimumGap
                                                      : run.finalLoss < task.fidelityThreshold;
    stats.localMinimum.push_back(local);
    sumAll += run.finalLoss;
    if (local) {
      ++stats.numLocalMinima;
    } else {
      sumRegular += run.finalLoss;
      ++regular;
    }
  }
  stats.meanFinal = sumAll / numRestarts;
  stats.meanRegular = regular > 0 ? sumRegular / regular : std::numeric_limits<double>::quiet_NaN();
  return stats;
}

}  // namespace dqnn
