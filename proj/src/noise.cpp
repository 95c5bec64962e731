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

#include "dqnn/noise.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dqnn {

namespace {

// Processor coherence times (us) for Q1..Q6.
constexpr std::array<double, 6> kProcessorT1 = {4.2, 6.1, 5.1, 8.2, 10.0, 10.6};
constexpr std::array<double, 6> kProcessorT2 = {2.2, 1.9, 4.8, 8.4, 18.2, 11.8};

int layerOffset(const NetworkTopology& topo, int layer) {
  int off = 0;
  for (int l = 0; l < layer; ++l) off += topo.widths[static_cast<std::size_t>(l)];
  return off;
}

std::size_t cellCount(const NetworkTopology& topo, int interface) {
  return static_cast<std::size_t>(topo.widths[static_cast<std::size_t>(interface)] *
                                  topo.widths[static_cast<std::size_t>(interface) + 1]);
}

}  // namespace

std::vector<ZZCoupling> interfaceCouplings(const NetworkTopology& topo, double zetaRadPerUs) {
  std::vector<ZZCoupling> out;
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    const int first = layerOffset(topo, l);
    const int count = topo.widths[static_cast<std::size_t>(l)] + topo.widths[static_cast<std::size_t>(l) + 1];
    for (int a = first; a < first + count; ++a) {
      for (int b = a + 1; b < first + count; ++b) {
        bool seen = false;
        for (const auto& c : out) seen = seen || (c.a == a && c.b == b);
        if (!seen) out.push_back({a, b, zetaRadPerUs});
      }
    }
  }
  return out;
}

NoiseModel NoiseModel::processorBaseline(const NetworkTopology& topo, double zetaRadPerUs) {
  NoiseModel m;
  std::vector<int> physical;
  if (topo.widths == std::vector<int>{2, 2, 2}) {
    physical = {0, 1, 2, 3, 4, 5};
    m.twoQubitNs = {{62.0, 92.0, 52.0, 82.0}, {64.0, 64.0, 60.0, 64.0}};
  } else if (topo.widths == std::vector<int>{1, 1, 1, 1, 1, 1}) {
    physical = {0, 2, 1, 3, 5, 4};
    m.twoQubitNs = {{62.0}, {52.0}, {82.0}, {64.0}, {60.0}};
  } else {
    throw std::invalid_argument("processor baseline is only defined for the dqnn1 and dqnn2 layouts");
  }
  for (int q : physical) {
    m.t1Us.push_back(kProcessorT1[static_cast<std::size_t>(q)]);
    m.t2Us.push_back(kProcessorT2[static_cast<std::size_t>(q)]);
  }
  m.couplings = interfaceCouplings(topo, zetaRadPerUs);
  return m;
}

NoiseModel NoiseModel::uniform(const NetworkTopology& topo, double t1Us, double t2Us,
                               double zetaRadPerUs, double twoQubitNs) {
  NoiseModel m;
  const auto n = static_cast<std::size_t>(topo.totalQubits());
  m.t1Us.assign(n, t1Us);
  m.t2Us.assign(n, t2Us);
  m.couplings = interfaceCouplings(topo, zetaRadPerUs);
  for (int l = 0; l < topo.numInterfaces(); ++l) m.twoQubitNs.emplace_back(cellCount(topo, l), twoQubitNs);
  return m;
}

NoiseModel NoiseModel::noiseless(const NetworkTopology& topo) {
  return uniform(topo, kInfiniteTime, kInfiniteTime, 0.0);
}

void NoiseModel::setZeta(double zetaRadPerUs) {
  for (auto& c : couplings) c.zetaRadPerUs = zetaRadPerUs;
}

void NoiseModel::validate(const NetworkTopology& topo) const {
  const auto n = static_cast<std::size_t>(topo.totalQubits());
  if (t1Us.size() != n || t2Us.size() != n) {
    throw std::invalid_argument("NoiseModel: need T1 and T2 for each of the " + std::to_string(n) +
                                " network qubits");
  }
  if (!(timeScale > 0.0)) throw std::invalid_argument("NoiseModel: time scale must be positive");
  for (std::size_t q = 0; q < n; ++q) {
    if (!(t1Us[q] > 0.0) || !(t2Us[q] > 0.0)) {
      throw std::invalid_argument("NoiseModel: T1 and T2 must be positive");
    }
    if (std::isfinite(t1Us[q]) && t2Us[q] > 2.0 * t1Us[q] * (1.0 + 1e-12)) {
      throw std::invalid_argument("NoiseModel: T2 exceeds 2 T1 on qubit " + std::to_string(q));
    }
  }
  if (!(singleGateNs >= 0.0)) throw std::invalid_argument("NoiseModel: negative gate duration");
  if (twoQubitNs.size() != static_cast<std::size_t>(topo.numInterfaces())) {
    throw std::invalid_argument("NoiseModel: two-qubit durations must cover every interface");
  }
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    const auto& d = twoQubitNs[static_cast<std::size_t>(l)];
    if (d.size() != cellCount(topo, l)) {
      throw std::invalid_argument("NoiseModel: interface " + std::to_string(l + 1) +
                                  " needs one two-qubit duration per perceptron");
    }
    for (double v : d) {
      if (!(v >= 0.0)) throw std::invalid_argument("NoiseModel: negative gate duration");
    }
  }
  for (const auto& c : couplings) {
    if (c.a < 0 || c.b < 0 || c.a >= static_cast<int>(n) || c.b >= static_cast<int>(n) || c.a == c.b) {
      throw std::invalid_argument("NoiseModel: coupling refers to an invalid qubit pair");
    }
    if (!std::isfinite(c.zetaRadPerUs)) throw std::invalid_argument("NoiseModel: non-finite ZZ strength");
  }
}

// ---------------------------------------------------------------------------
// Primitive channels

void applyKrausInPlace(ComplexMatrix& m, std::span<const ComplexMatrix> kraus, int qubit, int numQubits) {
  const int shift = numQubits - 1 - qubit;
  const Eigen::Index bit = Eigen::Index{1} << shift;
  const Eigen::Index dim = m.rows();
  Eigen::Matrix2cd block;
  Eigen::Matrix2cd acc;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & bit) continue;
      block << m(r, c), m(r, c | bit), m(r | bit, c), m(r | bit, c | bit);
      acc.setZero();
      for (const auto& k : kraus) {
        const Eigen::Matrix2cd k2 = k;
        acc += k2 * block * k2.adjoint();
      }
      m(r, c) = acc(0, 0);
      m(r, c | bit) = acc(0, 1);
      m(r | bit, c) = acc(1, 0);
      m(r | bit, c | bit) = acc(1, 1);
    }
  }
}

void applyDecoherenceInPlace(ComplexMatrix& m, int qubit, int numQubits, double durationNs,
                             double t1Us, double t2Us) {
  if (durationNs < 0.0) throw std::invalid_argument("decoherence: negative duration");
  if (!(t1Us > 0.0) || !(t2Us > 0.0)) throw std::invalid_argument("decoherence: T1 and T2 must be positive");
  if (std::isfinite(t1Us) && t2Us > 2.0 * t1Us * (1.0 + 1e-12)) {
    throw std::invalid_argument("decoherence: T2 > 2 T1 is unphysical");
  }
  if (durationNs == 0.0) return;
  const double t = durationNs * 1e-3;

  const double gamma = std::isfinite(t1Us) ? 1.0 - std::exp(-t / t1Us) : 0.0;
  const double dephasingRate = std::max(0.0, 1.0 / t2Us - (std::isfinite(t1Us) ? 0.5 / t1Us : 0.0));
  // Phase damping keeps off-diagonals scaled by exp(-t / T_phi).
  const double keep = std::exp(-t * dephasingRate);

  if (gamma > 0.0) {
    std::array<ComplexMatrix, 2> ad{ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)};
    ad[0](0, 0) = 1.0;
    ad[0](1, 1) = std::sqrt(1.0 - gamma);
    ad[1](0, 1) = std::sqrt(gamma);
    applyKrausInPlace(m, ad, qubit, numQubits);
  }
  if (keep < 1.0) {
    std::array<ComplexMatrix, 2> pd{ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)};
    pd[0](0, 0) = 1.0;
    pd[0](1, 1) = keep;
    pd[1](1, 1) = std::sqrt(1.0 - keep * keep);
    applyKrausInPlace(m, pd, qubit, numQubits);
  }
}

void applyZZInPlace(ComplexMatrix& m, int a, int b, int numQubits, double durationNs, double zetaRadPerUs) {
  if (durationNs < 0.0) throw std::invalid_argument("zzError: negative duration");
  const double angle = zetaRadPerUs * durationNs * 1e-3;
  if (angle == 0.0) return;
  const int sa = numQubits - 1 - a;
  const int sb = numQubits - 1 - b;
  const Eigen::Index dim = m.rows();
  // exp(-i angle/2 z) with z = +-1 the Z⊗Z eigenvalue of the basis state.
  std::vector<Complex> phase(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const bool odd = (((i >> sa) ^ (i >> sb)) & 1) != 0;
    phase[static_cast<std::size_t>(i)] = std::polar(1.0, -0.5 * angle * (odd ? -1.0 : 1.0));
  }
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) *= phase[static_cast<std::size_t>(r)] * std::conj(phase[static_cast<std::size_t>(c)]);
    }
  }
}

DensityMatrix decoherenceChannel(const DensityMatrix& rho, int qubit, double durationNs, double t1Us,
                                 double t2Us) {
  if (qubit < 0 || qubit >= rho.numQubits()) throw std::out_of_range("decoherenceChannel: bad qubit");
  ComplexMatrix m = rho.matrix();
  applyDecoherenceInPlace(m, qubit, rho.numQubits(), durationNs, t1Us, t2Us);
  return DensityMatrix::trusted(std::move(m));
}

DensityMatrix zzError(const DensityMatrix& rho, int a, int b, double durationNs, double zetaRadPerUs) {
  const int n = rho.numQubits();
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw std::out_of_range("zzError: bad qubit pair");
  ComplexMatrix m = rho.matrix();
  applyZZInPlace(m, a, b, n, durationNs, zetaRadPerUs);
  return DensityMatrix::trusted(std::move(m));
}

// ---------------------------------------------------------------------------
// Noisy interface channel

InterfaceNoise interfaceNoise(const NoiseModel& noise, const NetworkTopology& topo, int interface) {
  noise.validate(topo);
  const int first = layerOffset(topo, interface);
  const int count = topo.widths[static_cast<std::size_t>(interface)] +
                    topo.widths[static_cast<std::size_t>(interface) + 1];
  InterfaceNoise out;
  for (int q = first; q < first + count; ++q) {
    out.t1Us.push_back(noise.t1Us[static_cast<std::size_t>(q)] * noise.timeScale);
    out.t2Us.push_back(noise.t2Us[static_cast<std::size_t>(q)] * noise.timeScale);
  }
  for (const auto& c : noise.couplings) {
    const bool inside = c.a >= first && c.a < first + count && c.b >= first && c.b < first + count;
    if (inside) out.couplings.push_back({c.a - first, c.b - first, c.zetaRadPerUs});
  }
  out.singleGateNs = noise.singleGateNs;
  out.twoQubitNs = noise.twoQubitNs[static_cast<std::size_t>(interface)];
  return out;
}

DensityMatrix noisyForwardChannel(const DensityMatrix& rhoPrev, const LayerUnitarySpec& spec,
                                  const InterfaceNoise& noise) {
  spec.validate();
  const int n = spec.numQubits();
  if (rhoPrev.numQubits() != spec.upWidth) {
    throw std::invalid_argument("noisyForwardChannel: input does not match the upper layer");
  }
  if (noise.t1Us.size() != static_cast<std::size_t>(n) || noise.t2Us.size() != static_cast<std::size_t>(n) ||
      noise.twoQubitNs.size() != spec.params.size()) {
    throw std::invalid_argument("noisyForwardChannel: schedule does not match the interface");
  }

  const Eigen::Index lowDim = Eigen::Index{1} << spec.downWidth;
  ComplexMatrix m = kron(rhoPrev.matrix(), DensityMatrix::zeros(spec.downWidth).matrix());

  auto window = [&](double ns, int busyA, int busyB) {
    for (int q = 0; q < n; ++q) {
      applyDecoherenceInPlace(m, q, n, ns, noise.t1Us[static_cast<std::size_t>(q)],
                              noise.t2Us[static_cast<std::size_t>(q)]);
    }
    for (const auto& c : noise.couplings) {
      const bool driven = (c.a == busyA && c.b == busyB) || (c.a == busyB && c.b == busyA);
      if (!driven) applyZZInPlace(m, c.a, c.b, n, ns, c.zetaRadPerUs);
    }
  };
  auto rotate = [&](int qubit, double theta) {
    const ComplexMatrix rx = rxGate(theta);
    applyKrausInPlace(m, std::span<const ComplexMatrix>(&rx, 1), qubit, n);
  };

  for (const auto& site : spec.order) {
    const auto& p = spec.at(site);
    const int upper = site.up;
    const int lower = spec.upWidth + site.down;
    rotate(upper, p.theta1);
    window(noise.singleGateNs, -1, -1);
    rotate(lower, p.theta2);
    window(noise.singleGateNs, -1, -1);
    const ComplexMatrix cp = embedTwoQubit(controlledPhase(p.phi), upper, lower, n);
    m = cp * m * cp.adjoint();
    window(noise.twoQubitNs[spec.index(site)], upper, lower);
  }

  ComplexMatrix out = ComplexMatrix::Zero(lowDim, lowDim);
  for (Eigen::Index t = 0; t < m.rows() / lowDim; ++t) out += m.block(t * lowDim, t * lowDim, lowDim, lowDim);
  return DensityMatrix::trusted(std::move(out));
}

ForwardTrace noisyForwardPass(const DensityMatrix& rhoIn, const NetworkTopology& topo,
                              const NetworkParams& params, const NoiseModel& noise) {
  params.validate(topo);
  noise.validate(topo);
  if (rhoIn.numQubits() != topo.inputWidth()) {
    throw std::invalid_argument("noisyForwardPass: input does not match the input layer");
  }
  ForwardTrace trace;
  trace.states.push_back(rhoIn);
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    trace.states.push_back(
        noisyForwardChannel(trace.states.back(), layerSpec(topo, params, l), interfaceNoise(noise, topo, l)));
  }
  return trace;
}

}  // namespace dqnn
