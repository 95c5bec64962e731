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

#include <limits>
#include <vector>

#include "dqnn/gates.hpp"
#include "dqnn/linalg.hpp"
#include "dqnn/network.hpp"

namespace dqnn {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// Always-on Z⊗Z coupling between two network qubits (global indices, layer
/// by layer from the input).
struct ZZCoupling {
  int a = 0;
  int b = 1;
  double zetaRadPerUs = 0.0;
};

/// Markovian noise for a serial gate schedule.
///
/// Every single-qubit gate lasts `singleGateNs`; the controlled phase of each
/// perceptron lasts `twoQubitNs[interface][cell]`. During each gate window all
/// qubits of the interface register relax and dephase, and every coupled pair
/// other than the one driven by the gate picks up a residual ZZ phase.
struct NoiseModel {
  /// Per network qubit, microseconds. Infinite values disable the process.
  std::vector<double> t1Us;
  std::vector<double> t2Us;
  std::vector<ZZCoupling> couplings;
  double singleGateNs = 40.0;
  std::vector<std::vector<double>> twoQubitNs;
  /// T/T0: multiplies every T1 and T2.
  double timeScale = 1.0;

  /// Processor coherence times and gate durations (dqnn1/dqnn2 layouts only),
  /// with every intra-interface pair coupled at `zeta`.
  static NoiseModel processorBaseline(const NetworkTopology& topo, double zetaRadPerUs = 0.0);
  /// Same T1/T2 on every qubit, `twoQubitNs` for every controlled phase.
  static NoiseModel uniform(const NetworkTopology& topo, double t1Us, double t2Us,
                            double zetaRadPerUs, double twoQubitNs = 60.0);
  /// No decoherence and no ZZ; the noisy channel reduces to the ideal one.
  static NoiseModel noiseless(const NetworkTopology& topo);

  /// Sets every coupling's strength.
  void setZeta(double zetaRadPerUs);

  void validate(const NetworkTopology& topo) const;
};

/// All pairs of qubits inside each interface register.
std::vector<ZZCoupling> interfaceCouplings(const NetworkTopology& topo, double zetaRadPerUs);

/// Amplitude damping (p = 1 - exp(-t/T1)) followed by pure dephasing at rate
/// 1/T2 - 1/(2 T1), applied to `qubit` through its Kraus operators.
DensityMatrix decoherenceChannel(const DensityMatrix& rho, int qubit, double durationNs, double t1Us,
                                 double t2Us);

/// Conjugation by exp(-i (zeta t / 2) Z⊗Z) on the pair.
DensityMatrix zzError(const DensityMatrix& rho, int a, int b, double durationNs, double zetaRadPerUs);

/// Noise acting on one interface register (qubits indexed as in LayerUnitarySpec).
struct InterfaceNoise {
  std::vector<double> t1Us;  // already multiplied by the time scale
  std::vector<double> t2Us;
  std::vector<ZZCoupling> couplings;
  double singleGateNs = 40.0;
  std::vector<double> twoQubitNs;  // per cell
};

InterfaceNoise interfaceNoise(const NoiseModel& noise, const NetworkTopology& topo, int interface);

/// Forward channel with the ideal perceptrons interleaved with decoherence and
/// residual ZZ for each gate window.
DensityMatrix noisyForwardChannel(const DensityMatrix& rhoPrev, const LayerUnitarySpec& spec,
                                  const InterfaceNoise& noise);

ForwardTrace noisyForwardPass(const DensityMatrix& rhoIn, const NetworkTopology& topo,
                              const NetworkParams& params, const NoiseModel& noise);

// Register-level primitives shared with the noisy channel. `m` acts on
// `numQubits` qubits and is updated in place.
void applyKrausInPlace(ComplexMatrix& m, std::span<const ComplexMatrix> kraus, int qubit, int numQubits);
void applyDecoherenceInPlace(ComplexMatrix& m, int qubit, int numQubits, double durationNs,
                             double t1Us, double t2Us);
void applyZZInPlace(ComplexMatrix& m, int a, int b, int numQubits, double durationNs,
                    double zetaRadPerUs);

}  // namespace dqnn
