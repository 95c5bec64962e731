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

#include "dqnn/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dqnn {

using std::numbers::pi;

double canonicalAngle(double radians) {
  const double period = 4.0 * pi;
  double a = std::fmod(radians, period);
  if (a <= -2.0 * pi) a += period;
  if (a > 2.0 * pi) a -= period;
  return a;
}

void LayerUnitarySpec::validate() const {
  if (upWidth < 1 || downWidth < 1) {
    throw std::invalid_argument("LayerUnitarySpec: widths must be positive");
  }
  const auto cells = static_cast<std::size_t>(upWidth * downWidth);
  if (params.size() != cells) {
    throw std::invalid_argument("LayerUnitarySpec: parameter grid has " +
                                std::to_string(params.size()) + " entries, expected " +
                                std::to_string(cells));
  }
  if (order.size() != cells) {
    throw std::invalid_argument("LayerUnitarySpec: order lists " + std::to_string(order.size()) +
                                " perceptrons, expected " + std::to_string(cells));
  }
  std::vector<bool> seen(cells, false);
  for (const auto& s : order) {
    if (s.up < 0 || s.up >= upWidth || s.down < 0 || s.down >= downWidth) {
      throw std::invalid_argument("LayerUnitarySpec: perceptron (" + std::to_string(s.up + 1) +
                                  "," + std::to_string(s.down + 1) + ") outside the grid");
    }
    if (seen[index(s)]) {
      throw std::invalid_argument("LayerUnitarySpec: perceptron (" + std::to_string(s.up + 1) +
                                  "," + std::to_string(s.down + 1) + ") listed twice");
    }
    seen[index(s)] = true;
  }
}

std::vector<PerceptronSite> defaultPerceptronOrder(int upWidth, int downWidth) {
  std::vector<PerceptronSite> order;
  order.reserve(static_cast<std::size_t>(upWidth * downWidth));
  for (int j = 0; j < downWidth; ++j) {
    for (int i = 0; i < upWidth; ++i) order.push_back({i, j});
  }
  return order;
}

LayerUnitarySpec makeLayerSpec(int upWidth, int downWidth, double phi) {
  LayerUnitarySpec spec;
  spec.upWidth = upWidth;
  spec.downWidth = downWidth;
  spec.order = defaultPerceptronOrder(upWidth, downWidth);
  spec.params.assign(static_cast<std::size_t>(upWidth * downWidth), PerceptronParams{0.0, 0.0, phi});
  return spec;
}

ComplexMatrix rxGate(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  ComplexMatrix m(2, 2);
  m << c, Complex(0.0, -s), Complex(0.0, -s), c;
  return m;
}

ComplexMatrix rotXY(double axisAngle, double rotAngle) {
  const double c = std::cos(rotAngle / 2.0);
  const double s = std::sin(rotAngle / 2.0);
  // -i sin(.) (cos a X + sin a Y) has off-diagonals -i s e^{-ia} and -i s e^{ia}.
  const Complex upper = Complex(0.0, -s) * std::polar(1.0, -axisAngle);
  const Complex lower = Complex(0.0, -s) * std::polar(1.0, axisAngle);
  ComplexMatrix m(2, 2);
  m << c, upper, lower, c;
  return m;
}

ComplexMatrix controlledPhase(double phi) {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  m(3, 3) = std::polar(1.0, phi);
  return m;
}

ComplexMatrix perceptronUnitary(const PerceptronParams& p) {
  return controlledPhase(p.phi) * kron(rxGate(p.theta1), rxGate(p.theta2));
}

ComplexMatrix embedSingleQubit(const ComplexMatrix& u, int qubit, int numQubits) {
  if (qubit < 0 || qubit >= numQubits) throw std::out_of_range("embedSingleQubit: bad qubit");
  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  const int shift = numQubits - 1 - qubit;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Eigen::Index cb = (c >> shift) & 1;
    const Eigen::Index base = c & ~(Eigen::Index{1} << shift);
    for (Eigen::Index rb = 0; rb < 2; ++rb) {
      out(base | (rb << shift), c) = u(rb, cb);
    }
  }
  return out;
}

ComplexMatrix embedTwoQubit(const ComplexMatrix& u, int first, int second, int numQubits) {
  if (first < 0 || first >= numQubits || second < 0 || second >= numQubits || first == second) {
    throw std::out_of_range("embedTwoQubit: bad qubit pair");
  }
  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  const int s1 = numQubits - 1 - first;
  const int s2 = numQubits - 1 - second;
  const Eigen::Index mask = ~((Eigen::Index{1} << s1) | (Eigen::Index{1} << s2));
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Eigen::Index local = (((c >> s1) & 1) << 1) | ((c >> s2) & 1);
    const Eigen::Index base = c & mask;
    for (Eigen::Index r = 0; r < 4; ++r) {
      const Eigen::Index row = base | (((r >> 1) & 1) << s1) | ((r & 1) << s2);
      out(row, c) = u(r, local);
    }
  }
  return out;
}

ComplexMatrix embeddedPerceptron(const LayerUnitarySpec& spec, PerceptronSite site) {
  return embedTwoQubit(perceptronUnitary(spec.at(site)), site.up, spec.upWidth + site.down,
                       spec.numQubits());
}

ComplexMatrix layerUnitary(const LayerUnitarySpec& spec) {
  spec.validate();
  const Eigen::Index dim = Eigen::Index{1} << spec.numQubits();
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& site : spec.order) u = embeddedPerceptron(spec, site) * u;
  return u;
}

namespace ket {

ComplexVector zero() {
  ComplexVector v(2);
  v << 1.0, 0.0;
  return v;
}

ComplexVector one() {
  ComplexVector v(2);
  v << 0.0, 1.0;
  return v;
}

ComplexVector plus() {
  ComplexVector v(2);
  v << 1.0, 1.0;
  return v / std::sqrt(2.0);
}

ComplexVector minus() {
  ComplexVector v(2);
  v << 1.0, -1.0;
  return v / std::sqrt(2.0);
}

ComplexVector plusI() {
  ComplexVector v(2);
  v << 1.0, Complex(0.0, 1.0);
  return v / std::sqrt(2.0);
}

ComplexVector product(std::initializer_list<ComplexVector> factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out.col(0);
}

}  // namespace ket

}  // namespace dqnn
