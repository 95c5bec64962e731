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
#include <span>
#include <string>
#include <vector>

#include "dqnn/gates.hpp"
#include "dqnn/linalg.hpp"

namespace dqnn {

/// Layer widths [m_0, m_1, ..., m_out] and the perceptron order used at each
/// interface. Interface l (zero-based) connects layer l to layer l + 1.
struct NetworkTopology {
  std::vector<int> widths;
  std::vector<std::vector<PerceptronSite>> orders;

  /// Uses the default perceptron order at every interface.
  static NetworkTopology fromWidths(std::vector<int> widths);

  /// Three layers of two qubits.
  static NetworkTopology dqnn1();
  /// Same as dqnn1() but with the second interface applied in the hardware
  /// sequence (1,2), (1,1), (2,2), (2,1).
  static NetworkTopology dqnn1HardwareOrder();
  /// Six layers of one qubit.
  static NetworkTopology dqnn2();

  int numLayers() const { return static_cast<int>(widths.size()); }
  int numInterfaces() const { return numLayers() - 1; }
  int inputWidth() const { return widths.front(); }
  int outputWidth() const { return widths.back(); }
  int totalQubits() const;

  void validate() const;
};

/// Perceptron angles for every interface, each a row-major grid matching
/// LayerUnitarySpec::params.
struct NetworkParams {
  std::vector<std::vector<PerceptronParams>> interfaces;

  /// All thetas zero, every controlled phase set to `phi`.
  static NetworkParams uniform(const NetworkTopology& topo, double phi = std::numbers::pi);

  std::size_t numThetas() const;
  void validate(const NetworkTopology& topo) const;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

/// Controlled-phase angles recorded for the six-qubit processor, in radians.
/// Available for dqnn1/dqnn2 shaped topologies; throws otherwise.
NetworkParams withHardwarePhases(const NetworkTopology& topo, NetworkParams params);

LayerUnitarySpec layerSpec(const NetworkTopology& topo, const NetworkParams& params, int interface);

/// Identifies one Rx angle: `which` is 0 for the upper-qubit rotation and 1
/// for the lower-qubit rotation.
struct ParamId {
  int interface = 0;
  PerceptronSite site;
  int which = 0;
};

struct ForwardTrace {
  /// states[l] is the state of layer l; states.front() is the input.
  std::vector<DensityMatrix> states;
  const DensityMatrix& output() const { return states.back(); }
};

struct BackwardTrace {
  /// terms[l] is sigma^l; terms.back() is sigma^out and terms.front() sigma^0.
  std::vector<BackwardTerm> terms;
};

enum class GradientScheme { Analytic, ParameterShift };

GradientScheme parseGradientScheme(const std::string& name);
std::string toString(GradientScheme scheme);

/// tr_{l-1}( U (rho ⊗ |0..0><0..0|) U^dagger ).
DensityMatrix forwardChannel(const DensityMatrix& rhoPrev, const LayerUnitarySpec& spec);

/// Same channel with a precomputed layer unitary.
DensityMatrix forwardChannel(const DensityMatrix& rhoPrev, const ComplexMatrix& layerU,
                             int upWidth, int downWidth);

ForwardTrace forwardPass(const DensityMatrix& rhoIn, const NetworkTopology& topo,
                         const NetworkParams& params);

/// Hilbert-Schmidt adjoint of forwardChannel:
/// tr_l( (I ⊗ |0..0><0..0|) U^dagger (I ⊗ sigma) U ).
BackwardTerm backwardChannel(const BackwardTerm& sigma, const LayerUnitarySpec& spec);

BackwardTerm backwardChannel(const BackwardTerm& sigma, const ComplexMatrix& layerU, int upWidth,
                             int downWidth);

/// Propagates sigmaOut from the output layer back to the input layer.
BackwardTrace backwardPass(const BackwardTerm& sigmaOut, const NetworkTopology& topo,
                           const NetworkParams& params);

/// tau^{1/2} B^+ tau^{1/2} with B = sqrt(tau^{1/2} rho tau^{1/2}); the
/// fidelity derivative is half of tr(d rho * result).
BackwardTerm sigmaOutForFidelity(const DensityMatrix& rhoOut, const DensityMatrix& tauOut);

/// d/dtheta tr(sigma E(rho)) from the generator of the selected rotation.
double analyticGradient(const DensityMatrix& rhoPrev, const BackwardTerm& sigma,
                        const LayerUnitarySpec& spec, PerceptronSite site, int which);

/// (h+ - h-) / 2 with the selected rotation shifted by +-pi/2.
double parameterShiftGradient(const DensityMatrix& rhoPrev, const BackwardTerm& sigma,
                              const LayerUnitarySpec& spec, PerceptronSite site, int which);

/// Gradient of tr(sigma E(rho)) for every angle of one interface, laid out
/// as [cell * 2 + which] with cell = up * downWidth + down.
std::vector<double> interfaceGradient(const DensityMatrix& rhoPrev, const BackwardTerm& sigma,
                                      const LayerUnitarySpec& spec, GradientScheme scheme);

/// Per-interface gradients shaped like NetworkParams (two entries per cell).
struct NetworkGradient {
  std::vector<std::vector<double>> interfaces;

  static NetworkGradient zeros(const NetworkTopology& topo);
  double& at(const ParamId& id, const NetworkTopology& topo);
  double at(const ParamId& id, const NetworkTopology& topo) const;
  void axpy(double alpha, const NetworkGradient& other);
  double norm() const;
};

/// Gradient of tr(sigmaOut rho^out) from a forward and backward trace. Layer
/// l's gradient only reads states[l] and terms[l + 1].
NetworkGradient networkGradient(const ForwardTrace& forward, const BackwardTrace& backward,
                                const NetworkTopology& topo, const NetworkParams& params,
                                GradientScheme scheme);

/// Applies params.theta += step * gradient to every Rx angle. Phases are left alone.
void applyUpdate(NetworkParams& params, const NetworkGradient& gradient, double step);

double meanFidelityLoss(std::span<const DensityMatrix> outputs, std::span<const DensityMatrix> targets);
double meanFidelityLoss(std::span<const ForwardTrace> traces, std::span<const DensityMatrix> targets);

/// tr(rho^out H).
double energyLoss(const DensityMatrix& rhoOut, const BackwardTerm& h);

/// g0 I + g1 Z0 + g2 Z1 + g3 Z0Z1 + g4 Y0Y1 + g5 X0X1.
BackwardTerm buildMolecularHamiltonian(const std::array<double, 6>& g);

/// Smallest eigenvalue of a Hermitian operator.
double groundEnergy(const BackwardTerm& h);

}  // namespace dqnn
