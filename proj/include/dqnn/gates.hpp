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

#include <numbers>
#include <vector>

#include "dqnn/linalg.hpp"

namespace dqnn {

/// Angles of one perceptron: Rx(theta1) on the upper-layer qubit, Rx(theta2)
/// on the lower-layer qubit, then a controlled phase diag(1, 1, 1, e^{i phi}).
struct PerceptronParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi = std::numbers::pi;

  friend bool operator==(const PerceptronParams&, const PerceptronParams&) = default;
};

/// Maps an angle into (-2pi, 2pi] for reporting. Never used in the math.
double canonicalAngle(double radians);

/// Zero-based position of a perceptron: qubit `up` of layer l-1 and qubit
/// `down` of layer l.
struct PerceptronSite {
  int up = 0;
  int down = 0;

  friend bool operator==(const PerceptronSite&, const PerceptronSite&) = default;
};

/// All perceptrons between two adjacent layers.
///
/// Within the two-layer register the upper layer occupies qubits
/// [0, upWidth) and the lower layer [upWidth, upWidth + downWidth).
struct LayerUnitarySpec {
  int upWidth = 1;
  int downWidth = 1;
  /// Application order: order.front() acts on the state first.
  std::vector<PerceptronSite> order;
  /// Row-major grid indexed by up * downWidth + down.
  std::vector<PerceptronParams> params;

  int numQubits() const { return upWidth + downWidth; }
  PerceptronParams& at(PerceptronSite s) { return params[index(s)]; }
  const PerceptronParams& at(PerceptronSite s) const { return params[index(s)]; }
  std::size_t index(PerceptronSite s) const {
    return static_cast<std::size_t>(s.up * downWidth + s.down);
  }

  /// Throws std::invalid_argument if widths are non-positive, the parameter
  /// grid is incomplete, or `order` is not a permutation of the full grid.
  void validate() const;
};

/// Order (1,1), (2,1), ..., (1,2), (2,2), ...: the rightmost factor of the
/// descending product over j then i acts first.
std::vector<PerceptronSite> defaultPerceptronOrder(int upWidth, int downWidth);

LayerUnitarySpec makeLayerSpec(int upWidth, int downWidth, double phi = std::numbers::pi);

ComplexMatrix rxGate(double theta);

/// exp(-i rotAngle/2 (cos(axisAngle) X + sin(axisAngle) Y))
ComplexMatrix rotXY(double axisAngle, double rotAngle);

ComplexMatrix controlledPhase(double phi);

/// controlledPhase(phi) * (rxGate(theta1) kron rxGate(theta2)); qubit order
/// [upper, lower].
ComplexMatrix perceptronUnitary(const PerceptronParams& p);

/// Lifts a single-qubit operator to an n-qubit register.
ComplexMatrix embedSingleQubit(const ComplexMatrix& u, int qubit, int numQubits);

/// Lifts a two-qubit operator (ordered [first, second]) to an n-qubit register.
ComplexMatrix embedTwoQubit(const ComplexMatrix& u, int first, int second, int numQubits);

/// Embedded perceptron unitary for `site` on the two-layer register of `spec`.
ComplexMatrix embeddedPerceptron(const LayerUnitarySpec& spec, PerceptronSite site);

/// Product of all perceptrons of an interface in `spec.order`.
ComplexMatrix layerUnitary(const LayerUnitarySpec& spec);

/// Fixed single-qubit kets used for training inputs.
namespace ket {
ComplexVector zero();
ComplexVector one();
ComplexVector plus();
ComplexVector minus();
/// +1 eigenstate of Pauli Y.
ComplexVector plusI();
ComplexVector product(std::initializer_list<ComplexVector> factors);
}  // namespace ket

}  // namespace dqnn
