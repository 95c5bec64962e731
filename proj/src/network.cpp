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

#include "dqnn/network.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dqnn {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Topology and parameters

NetworkTopology NetworkTopology::fromWidths(std::vector<int> widths) {
  NetworkTopology topo;
  topo.widths = std::move(widths);
  for (std::size_t l = 0; l + 1 < topo.widths.size(); ++l) {
    topo.orders.push_back(defaultPerceptronOrder(topo.widths[l], topo.widths[l + 1]));
  }
  topo.validate();
  return topo;
}

NetworkTopology NetworkTopology::dqnn1() { return fromWidths({2, 2, 2}); }

NetworkTopology NetworkTopology::dqnn1HardwareOrder() {
  auto topo = dqnn1();
  topo.orders[1] = {{0, 1}, {0, 0}, {1, 1}, {1, 0}};
  return topo;
}

NetworkTopology NetworkTopology::dqnn2() { return fromWidths({1, 1, 1, 1, 1, 1}); }

int NetworkTopology::totalQubits() const {
  return std::accumulate(widths.begin(), widths.end(), 0);
}

void NetworkTopology::validate() const {
  if (widths.size() < 2) {
    throw std::invalid_argument("NetworkTopology: need at least an input and an output layer");
  }
  for (int w : widths) {
    if (w < 1) throw std::invalid_argument("NetworkTopology: layer widths must be >= 1");
  }
  if (orders.size() != widths.size() - 1) {
    throw std::invalid_argument("NetworkTopology: one perceptron order per interface required");
  }
  for (int l = 0; l < numInterfaces(); ++l) {
    auto spec = makeLayerSpec(widths[static_cast<std::size_t>(l)], widths[static_cast<std::size_t>(l) + 1]);
    spec.order = orders[static_cast<std::size_t>(l)];
    spec.validate();
  }
}

NetworkParams NetworkParams::uniform(const NetworkTopology& topo, double phi) {
  NetworkParams p;
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    const auto cells = static_cast<std::size_t>(topo.widths[static_cast<std::size_t>(l)] *
                                                topo.widths[static_cast<std::size_t>(l) + 1]);
    p.interfaces.emplace_back(cells, PerceptronParams{0.0, 0.0, phi});
  }
  return p;
}

std::size_t NetworkParams::numThetas() const {
  std::size_t n = 0;
  for (const auto& grid : interfaces) n += 2 * grid.size();
  return n;
}

void NetworkParams::validate(const NetworkTopology& topo) const {
  if (interfaces.size() != static_cast<std::size_t>(topo.numInterfaces())) {
    throw std::invalid_argument("NetworkParams: interface count does not match topology");
  }
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    const auto cells = static_cast<std::size_t>(topo.widths[static_cast<std::size_t>(l)] *
                                                topo.widths[static_cast<std::size_t>(l) + 1]);
    const auto& grid = interfaces[static_cast<std::size_t>(l)];
    if (grid.size() != cells) {
      throw std::invalid_argument("NetworkParams: interface " + std::to_string(l + 1) +
                                  " has an incomplete parameter grid");
    }
    for (const auto& p : grid) {
      if (!std::isfinite(p.theta1) || !std::isfinite(p.theta2) || !std::isfinite(p.phi)) {
        throw std::invalid_argument("NetworkParams: non-finite angle");
      }
    }
  }
}

NetworkParams withHardwarePhases(const NetworkTopology& topo, NetworkParams params) {
  params.validate(topo);
  auto deg = [](double d) { return d * pi / 180.0; };
  auto set = [&](int l, int i, int j, double degrees) {
    const auto down = topo.widths[static_cast<std::size_t>(l) + 1];
    params.interfaces[static_cast<std::size_t>(l)][static_cast<std::size_t>((i - 1) * down + (j - 1))].phi =
        deg(degrees);
  };
  if (topo.widths == std::vector<int>{2, 2, 2}) {
    set(0, 1, 1, 175.0);
    set(0, 2, 1, 180.0);
    set(0, 1, 2, 180.0);
    set(0, 2, 2, -155.0);
    set(1, 1, 2, 176.0);
    set(1, 1, 1, -117.0);
    set(1, 2, 2, -157.0);
    set(1, 2, 1, -165.0);
  } else if (topo.widths == std::vector<int>{1, 1, 1, 1, 1, 1}) {
    const double phases[] = {175.0, 180.0, -155.0, -157.0, -130.0};
    for (int l = 0; l < 5; ++l) set(l, 1, 1, phases[l]);
  } else {
    throw std::invalid_argument("hardware phases are only recorded for the dqnn1 and dqnn2 layouts");
  }
  return params;
}

LayerUnitarySpec layerSpec(const NetworkTopology& topo, const NetworkParams& params, int interface) {
  if (interface < 0 || interface >= topo.numInterfaces()) {
    throw std::out_of_range("layerSpec: interface index out of range");
  }
  const auto l = static_cast<std::size_t>(interface);
  LayerUnitarySpec spec;
  spec.upWidth = topo.widths[l];
  spec.downWidth = topo.widths[l + 1];
  spec.order = topo.orders[l];
  spec.params = params.interfaces.at(l);
  return spec;
}

GradientScheme parseGradientScheme(const std::string& name) {
  if (name == "analytic") return GradientScheme::Analytic;
  if (name == "shift" || name == "parameter-shift") return GradientScheme::ParameterShift;
  throw std::invalid_argument("unknown gradient scheme '" + name + "' (expected analytic|shift)");
}

std::string toString(GradientScheme scheme) {
  return scheme == GradientScheme::Analytic ? "analytic" : "shift";
}

// ---------------------------------------------------------------------------
// Channels

namespace {

/// rho ⊗ |0..0><0..0| on `freshQubits` appended qubits.
ComplexMatrix attachFresh(const ComplexMatrix& rho, int freshQubits) {
  const Eigen::Index d = rho.rows();
  const int shift = freshQubits;
  ComplexMatrix out = ComplexMatrix::Zero(d << shift, d << shift);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) out(r << shift, c << shift) = rho(r, c);
  }
  return out;
}

/// Traces out the leading `upQubits` of a register whose trailing block has
/// dimension `lowDim`.
ComplexMatrix traceLeading(const ComplexMatrix& m, Eigen::Index lowDim) {
  const Eigen::Index upDim = m.rows() / lowDim;
  ComplexMatrix out = ComplexMatrix::Zero(lowDim, lowDim);
  for (Eigen::Index t = 0; t < upDim; ++t) out += m.block(t * lowDim, t * lowDim, lowDim, lowDim);
  return out;
}

/// I_up ⊗ sigma.
ComplexMatrix liftLower(const ComplexMatrix& sigma, int upWidth) {
  const Eigen::Index upDim = Eigen::Index{1} << upWidth;
  return kron(ComplexMatrix::Identity(upDim, upDim), sigma);
}

void checkQubits(int have, int want, const char* who) {
  if (have != want) {
    throw std::invalid_argument(std::string(who) + ": operator has " + std::to_string(have) +
                                " qubits, interface expects " + std::to_string(want));
  }
}

}  // namespace

DensityMatrix forwardChannel(const DensityMatrix& rhoPrev, const ComplexMatrix& layerU, int upWidth,
                             int downWidth) {
  checkQubits(rhoPrev.numQubits(), upWidth, "forwardChannel");
  const ComplexMatrix joint = layerU * attachFresh(rhoPrev.matrix(), downWidth) * layerU.adjoint();
  return DensityMatrix::trusted(traceLeading(joint, Eigen::Index{1} << downWidth));
}

DensityMatrix forwardChannel(const DensityMatrix& rhoPrev, const LayerUnitarySpec& spec) {
  return forwardChannel(rhoPrev, layerUnitary(spec), spec.upWidth, spec.downWidth);
}

ForwardTrace forwardPass(const DensityMatrix& rhoIn, const NetworkTopology& topo,
                         const NetworkParams& params) {
  params.validate(topo);
  checkQubits(rhoIn.numQubits(), topo.inputWidth(), "forwardPass");
  ForwardTrace trace;
  trace.states.reserve(static_cast<std::size_t>(topo.numLayers()));
  trace.states.push_back(rhoIn);
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    trace.states.push_back(forwardChannel(trace.states.back(), layerSpec(topo, params, l)));
  }
  return trace;
}

BackwardTerm backwardChannel(const BackwardTerm& sigma, const ComplexMatrix& layerU, int upWidth,
                             int downWidth) {
  checkQubits(sigma.numQubits(), downWidth, "backwardChannel");
  const ComplexMatrix x = layerU.adjoint() * liftLower(sigma.matrix(), upWidth) * layerU;
  // tr_l((I ⊗ |0><0|) X) picks the |0..0>_l block of X.
  const Eigen::Index upDim = Eigen::Index{1} << upWidth;
  ComplexMatrix out(upDim, upDim);
  for (Eigen::Index r = 0; r < upDim; ++r) {
    for (Eigen::Index c = 0; c < upDim; ++c) out(r, c) = x(r << downWidth, c << downWidth);
  }
  return BackwardTerm::trusted(std::move(out));
}

BackwardTerm backwardChannel(const BackwardTerm& sigma, const LayerUnitarySpec& spec) {
  return backwardChannel(sigma, layerUnitary(spec), spec.upWidth, spec.downWidth);
}

BackwardTrace backwardPass(const BackwardTerm& sigmaOut, const NetworkTopology& topo,
                           const NetworkParams& params) {
  params.validate(topo);
  checkQubits(sigmaOut.numQubits(), topo.outputWidth(), "backwardPass");
  std::vector<BackwardTerm> reversed;
  reversed.reserve(static_cast<std::size_t>(topo.numLayers()));
  reversed.push_back(sigmaOut);
  for (int l = topo.numInterfaces() - 1; l >= 0; --l) {
    reversed.push_back(backwardChannel(reversed.back(), layerSpec(topo, params, l)));
  }
  return {std::vector<BackwardTerm>(reversed.rbegin(), reversed.rend())};
}

BackwardTerm sigmaOutForFidelity(const DensityMatrix& rhoOut, const DensityMatrix& tauOut) {
  if (rhoOut.numQubits() != tauOut.numQubits()) {
    throw std::invalid_argument("sigmaOutForFidelity: qubit count mismatch");
  }
  const ComplexMatrix sqrtTau = matrixSqrt(tauOut.matrix());
  const ComplexMatrix a = hermitianPart(sqrtTau * rhoOut.matrix() * sqrtTau);
  return BackwardTerm::trusted(sqrtTau * matrixInvSqrt(a) * sqrtTau);
}

// ---------------------------------------------------------------------------
// Gradients

namespace {

int rotatedQubit(const LayerUnitarySpec& spec, PerceptronSite site, int which) {
  if (which != 0 && which != 1) throw std::invalid_argument("parameter selector must be 0 or 1");
  return which == 0 ? site.up : spec.upWidth + site.down;
}

std::size_t positionInOrder(const LayerUnitarySpec& spec, PerceptronSite site) {
  for (std::size_t p = 0; p < spec.order.size(); ++p) {
    if (spec.order[p] == site) return p;
  }
  throw std::invalid_argument("unknown perceptron (" + std::to_string(site.up + 1) + "," +
                              std::to_string(site.down + 1) + ")");
}

double& theta(LayerUnitarySpec& spec, PerceptronSite site, int which) {
  auto& p = spec.at(site);
  return which == 0 ? p.theta1 : p.theta2;
}

/// Shared pieces of the analytic gradient for one interface: the embedded
/// perceptrons in application order and W = (rho ⊗ |0><0|) U^dagger (I ⊗ sigma).
struct GradientContext {
  std::vector<ComplexMatrix> factors;
  ComplexMatrix w;
};

GradientContext makeContext(const DensityMatrix& rhoPrev, const BackwardTerm& sigma,
                            const LayerUnitarySpec& spec) {
  spec.validate();
  checkQubits(rhoPrev.numQubits(), spec.upWidth, "gradient");
  checkQubits(sigma.numQubits(), spec.downWidth, "gradient");
  GradientContext ctx;
  const Eigen::Index dim = Eigen::Index{1} << spec.numQubits();
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& site : spec.order) {
    ctx.factors.push_back(embeddedPerceptron(spec, site));
    u = ctx.factors.back() * u;
  }
  ctx.w = attachFresh(rhoPrev.matrix(), spec.downWidth) * u.adjoint() *
          liftLower(sigma.matrix(), spec.upWidth);
  return ctx;
}

}  // namespace

double analyticGradient(const DensityMatrix& rhoPrev, const BackwardTerm& sigma,
                        const LayerUnitarySpec& spec, PerceptronSite site, int which) {
  const auto ctx = makeContext(rhoPrev, sigma, spec);
  const std::size_t pos = positionInOrder(spec, site);
  const int n = spec.numQubits();
  const Eigen::Index dim = Eigen::Index{1} << n;

  // dU = (P_last ... P_pos) (-i/2 X_q) (P_{pos-1} ... P_first)
  ComplexMatrix before = ComplexMatrix::Identity(dim, dim);
  for (std::size_t p = 0; p < pos; ++p) before = ctx.factors[p] * before;
  ComplexMatrix after = ComplexMatrix::Identity(dim, dim);
  for (std::size_t p = pos; p < ctx.factors.size(); ++p) after = ctx.factors[p] * after;
  const ComplexMatrix generator =
      Complex(0.0, -0.5) * embedSingleQubit(pauli::x(), rotatedQubit(spec, site, which), n);
  const ComplexMatrix dU = after * generator * before;
  // tr(dU W) + h.c.
  return 2.0 * traceProductReal(dU, ctx.w);
}

double parameterShiftGradient(const DensityMatrix& rhoPrev, const BackwardTerm& sigma,
                              const LayerUnitarySpec& spec, PerceptronSite site, int which) {
  spec.validate();
  positionInOrder(spec, site);
  rotatedQubit(spec, site, which);
  checkQubits(sigma.numQubits(), spec.downWidth, "parameterShiftGradient");
  auto shifted = [&](double delta) {
    LayerUnitarySpec s = spec;
    theta(s, site, which) += delta;
    return traceProductReal(forwardChannel(rhoPrev, s).matrix(), sigma.matrix());
  };
  return 0.5 * (shifted(pi / 2.0) - shifted(-pi / 2.0));
}

std::vector<double> interfaceGradient(const DensityMatrix& rhoPrev, const BackwardTerm& sigma,
                                      const LayerUnitarySpec& spec, GradientScheme scheme) {
  std::vector<double> grad(2 * spec.params.size(), 0.0);
  if (scheme == GradientScheme::ParameterShift) {
    for (const auto& site : spec.order) {
      for (int k = 0; k < 2; ++k) {
        grad[2 * spec.index(site) + static_cast<std::size_t>(k)] =
            parameterShiftGradient(rhoPrev, sigma, spec, site, k);
      }
    }
    return grad;
  }

  const auto ctx = makeContext(rhoPrev, sigma, spec);
  const int n = spec.numQubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::size_t count = ctx.factors.size();

  // prefix[p] = P_{p-1} ... P_0, suffix[p] = P_last ... P_p
  std::vector<ComplexMatrix> prefix(count + 1, ComplexMatrix::Identity(dim, dim));
  for (std::size_t p = 0; p < count; ++p) prefix[p + 1] = ctx.factors[p] * prefix[p];
  std::vector<ComplexMatrix> suffix(count + 1, ComplexMatrix::Identity(dim, dim));
  for (std::size_t p = count; p-- > 0;) suffix[p] = suffix[p + 1] * ctx.factors[p];

  for (std::size_t p = 0; p < count; ++p) {
    // tr(S G R W) = tr(G (R W S))
    const ComplexMatrix y = prefix[p] * ctx.w * suffix[p];
    const auto site = spec.order[p];
    for (int k = 0; k < 2; ++k) {
      const ComplexMatrix generator =
          Complex(0.0, -0.5) * embedSingleQubit(pauli::x(), rotatedQubit(spec, site, k), n);
      grad[2 * spec.index(site) + static_cast<std::size_t>(k)] = 2.0 * traceProductReal(generator, y);
    }
  }
  return grad;
}

NetworkGradient NetworkGradient::zeros(const NetworkTopology& topo) {
  NetworkGradient g;
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    const auto cells = static_cast<std::size_t>(topo.widths[static_cast<std::size_t>(l)] *
                                                topo.widths[static_cast<std::size_t>(l) + 1]);
    g.interfaces.emplace_back(2 * cells, 0.0);
  }
  return g;
}

double& NetworkGradient::at(const ParamId& id, const NetworkTopology& topo) {
  const auto down = topo.widths.at(static_cast<std::size_t>(id.interface) + 1);
  return interfaces.at(static_cast<std::size_t>(id.interface))
      .at(static_cast<std::size_t>(2 * (id.site.up * down + id.site.down) + id.which));
}

double NetworkGradient::at(const ParamId& id, const NetworkTopology& topo) const {
  return const_cast<NetworkGradient*>(this)->at(id, topo);
}

void NetworkGradient::axpy(double alpha, const NetworkGradient& other) {
  for (std::size_t l = 0; l < interfaces.size(); ++l) {
    for (std::size_t i = 0; i < interfaces[l].size(); ++i) interfaces[l][i] += alpha * other.interfaces[l][i];
  }
}

double NetworkGradient::norm() const {
  double s = 0.0;
  for (const auto& g : interfaces) {
    for (double v : g) s += v * v;
  }
  return std::sqrt(s);
}

NetworkGradient networkGradient(const ForwardTrace& forward, const BackwardTrace& backward,
                                const NetworkTopology& topo, const NetworkParams& params,
                                GradientScheme scheme) {
  if (forward.states.size() != static_cast<std::size_t>(topo.numLayers()) ||
      backward.terms.size() != static_cast<std::size_t>(topo.numLayers())) {
    throw std::invalid_argument("networkGradient: trace length does not match topology");
  }
  NetworkGradient g;
  for (int l = 0; l < topo.numInterfaces(); ++l) {
    g.interfaces.push_back(interfaceGradient(forward.states[static_cast<std::size_t>(l)],
                                             backward.terms[static_cast<std::size_t>(l) + 1],
                                             layerSpec(topo, params, l), scheme));
  }
  return g;
}

void applyUpdate(NetworkParams& params, const NetworkGradient& gradient, double step) {
  for (std::size_t l = 0; l < params.interfaces.size(); ++l) {
    auto& grid = params.interfaces[l];
    const auto& g = gradient.interfaces.at(l);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      grid[c].theta1 += step * g[2 * c];
      grid[c].theta2 += step * g[2 * c + 1];
    }
  }
}

// ---------------------------------------------------------------------------
// Losses

double meanFidelityLoss(std::span<const DensityMatrix> outputs, std::span<const DensityMatrix> targets) {
  if (outputs.empty()) throw std::invalid_argument("meanFidelityLoss: empty dataset");
  if (outputs.size() != targets.size()) {
    throw std::invalid_argument("meanFidelityLoss: output and target counts differ");
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < outputs.size(); ++x) sum += fidelity(outputs[x], targets[x]);
  return sum / static_cast<double>(outputs.size());
}

double meanFidelityLoss(std::span<const ForwardTrace> traces, std::span<const DensityMatrix> targets) {
  std::vector<DensityMatrix> outputs;
  outputs.reserve(traces.size());
  for (const auto& t : traces) outputs.push_back(t.output());
  return meanFidelityLoss(std::span<const DensityMatrix>(outputs), targets);
}

double energyLoss(const DensityMatrix& rhoOut, const BackwardTerm& h) {
  if (rhoOut.numQubits() != h.numQubits()) {
    throw std::invalid_argument("energyLoss: qubit count mismatch");
  }
  return traceProductReal(rhoOut.matrix(), h.matrix());
}

BackwardTerm buildMolecularHamiltonian(const std::array<double, 6>& g) {
  for (double v : g) {
    if (!std::isfinite(v)) throw std::invalid_argument("buildMolecularHamiltonian: non-finite coefficient");
  }
  const ComplexMatrix i2 = pauli::identity();
  ComplexMatrix h = g[0] * pauli::identity(4);
  h += g[1] * kron(pauli::z(), i2);
  h += g[2] * kron(i2, pauli::z());
  h += g[3] * kron(pauli::z(), pauli::z());
  h += g[4] * kron(pauli::y(), pauli::y());
  h += g[5] * kron(pauli::x(), pauli::x());
  return BackwardTerm(std::move(h));
}

double groundEnergy(const BackwardTerm& h) {
  return hermitianEig(h.matrix()).values(0);
}

}  // namespace dqnn
