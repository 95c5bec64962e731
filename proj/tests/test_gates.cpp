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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dqnn/gates.hpp"
#include "oracles.hpp"

namespace dqnn {
namespace {

using std::numbers::pi;

double unitarityError(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

TEST(RxGate, Examples) {
  EXPECT_LT((rxGate(0) - pauli::identity()).norm(), 1e-15);
  const ComplexMatrix u = rxGate(pi);
  const ComplexMatrix rho = u * DensityMatrix::zeros(1).matrix() * u.adjoint();
  EXPECT_LT((rho - DensityMatrix::fromKet(ket::one()).matrix()).norm(), 1e-15);
  const ComplexVector half = rxGate(pi / 2) * ket::zero();
  EXPECT_NEAR(std::abs(half(0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(half(1) - Complex(0, -1.0 / std::sqrt(2.0))), 0.0, 1e-15);
}

TEST(RotXY, ReducesToRxAndRotatesAboutY) {
  for (double t : {0.3, 1.7, 4.0}) EXPECT_LT((rotXY(0.0, t) - rxGate(t)).norm(), 1e-14);
  const ComplexMatrix u = rotXY(pi / 2, pi);
  const ComplexMatrix rho = u * DensityMatrix::zeros(1).matrix() * u.adjoint();
  EXPECT_LT((rho - DensityMatrix::fromKet(ket::one()).matrix()).norm(), 1e-14);
  // exp(-i t/2 Y) is real
  EXPECT_LT(rotXY(pi / 2, 0.8).imag().norm(), 1e-15);
}

TEST(ControlledPhase, Examples) {
  const ComplexMatrix cz = controlledPhase(pi);
  EXPECT_NEAR(std::abs(cz(3, 3) + 1.0), 0.0, 1e-15);
  const ComplexMatrix cp = controlledPhase(0.42);
  const ComplexVector ten = cp * ket::product({ket::one(), ket::zero()});
  EXPECT_NEAR(std::abs(ten(2) - 1.0), 0.0, 1e-15);
  const double phi = 175.0 * pi / 180.0;
  EXPECT_NEAR(std::abs(controlledPhase(phi)(3, 3) - std::polar(1.0, phi)), 0.0, 1e-15);
}

TEST(PerceptronUnitary, Examples) {
  const ComplexMatrix cz = perceptronUnitary({0.0, 0.0, pi});
  EXPECT_LT((cz - controlledPhase(pi)).norm(), 1e-15);
  const ComplexMatrix xi = perceptronUnitary({pi, 0.0, 0.0});
  // Rx(pi) = -i X
  EXPECT_LT((xi - Complex(0, -1) * kron(pauli::x(), pauli::identity())).norm(), 1e-14);
}

TEST(PerceptronUnitary, MatchesDefinition) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 2 * pi);
  for (int i = 0; i < 10; ++i) {
    const PerceptronParams p{u(rng), u(rng), u(rng)};
    EXPECT_LT((perceptronUnitary(p) - oracle::perceptron(p.theta1, p.theta2, p.phi)).norm(), 1e-14);
    EXPECT_LT(unitarityError(perceptronUnitary(p)), 1e-12);
  }
}

TEST(LayerUnitary, ZeroAnglesGiveIdentity) {
  for (auto [a, b] : {std::pair{1, 1}, {2, 2}, {1, 2}, {2, 1}}) {
    const LayerUnitarySpec spec = makeLayerSpec(a, b, 0.0);
    EXPECT_LT((layerUnitary(spec) - ComplexMatrix::Identity(1 << (a + b), 1 << (a + b))).norm(), 1e-15);
  }
}

TEST(LayerUnitary, DefaultOrderIsExplicitProduct) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 2 * pi);
  LayerUnitarySpec spec = makeLayerSpec(2, 2);
  for (auto& p : spec.params) p = {u(rng), u(rng), u(rng)};
  const auto lifted = [&](int up, int down) {
    const auto& p = spec.at({up, down});
    return oracle::lift(oracle::perceptron(p.theta1, p.theta2, p.phi), {up, 2 + down}, 4);
  };
  // U_(2,2) U_(1,2) U_(2,1) U_(1,1) with one-based (i, j) = (up + 1, down + 1)
  const ComplexMatrix expected = lifted(1, 1) * lifted(0, 1) * lifted(1, 0) * lifted(0, 0);
  EXPECT_LT((layerUnitary(spec) - expected).norm(), 1e-12);
  EXPECT_LT(unitarityError(layerUnitary(spec)), 1e-10);
  const std::vector<PerceptronSite> expectedOrder{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(spec.order, expectedOrder);
}

TEST(LayerUnitary, DisjointPerceptronsCommute) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 2 * pi);
  LayerUnitarySpec spec = makeLayerSpec(2, 2);
  for (auto& p : spec.params) p = {u(rng), u(rng), u(rng)};
  // (1,0) and (0,1) share no qubit.
  LayerUnitarySpec swapped = spec;
  swapped.order = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_LT((layerUnitary(spec) - layerUnitary(swapped)).norm(), 1e-12);
  LayerUnitarySpec conflicting = spec;
  conflicting.order = {{1, 0}, {0, 0}, {0, 1}, {1, 1}};
  EXPECT_GT((layerUnitary(spec) - layerUnitary(conflicting)).norm(), 1e-6);
}

TEST(LayerUnitarySpec, ValidateRejectsBadOrders) {
  LayerUnitarySpec spec = makeLayerSpec(2, 2);
  spec.order.pop_back();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = makeLayerSpec(2, 2);
  spec.order[1] = spec.order[0];
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = makeLayerSpec(2, 2);
  spec.order[0] = {2, 0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = makeLayerSpec(2, 2);
  spec.params.pop_back();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Embedding, MatchesIndexLoopOracle) {
  std::mt19937_64 rng(14);
  const ComplexMatrix g = oracle::perceptron(0.4, 1.3, 2.2);
  for (auto [a, b] : {std::pair{0, 3}, {3, 0}, {1, 2}, {2, 1}}) {
    EXPECT_LT((embedTwoQubit(g, a, b, 4) - oracle::lift(g, {a, b}, 4)).norm(), 1e-14);
  }
  const ComplexMatrix r = oracle::rx(0.9);
  for (int q = 0; q < 3; ++q) EXPECT_LT((embedSingleQubit(r, q, 3) - oracle::lift(r, {q}, 3)).norm(), 1e-14);
}

TEST(Kets, AreNormalizedEigenstates) {
  for (const auto& k : {ket::zero(), ket::one(), ket::plus(), ket::minus(), ket::plusI()}) {
    EXPECT_NEAR(k.norm(), 1.0, 1e-15);
  }
  const ComplexVector y = pauli::y() * ket::plusI();
  EXPECT_LT((y - ket::plusI()).norm(), 1e-15);
  EXPECT_LT((pauli::x() * ket::minus() + ket::minus()).norm(), 1e-15);
}

TEST(CanonicalAngle, WrapsIntoRange) {
  EXPECT_NEAR(canonicalAngle(5 * pi), pi, 1e-12);
  EXPECT_NEAR(canonicalAngle(0.5), 0.5, 1e-15);
}

}  // namespace
}  // namespace dqnn
