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
#include <random>

#include "dqnn/gates.hpp"
#include "dqnn/linalg.hpp"
#include "oracles.hpp"

namespace dqnn {
namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_LT((kron(pauli::identity(), pauli::identity()) - pauli::identity(4)).norm(), 1e-15);
}

TEST(Kron, ZTimesZIsDiagonal) { EXPECT_LT((kron(pauli::z(), pauli::z()) - diag({1, -1, -1, 1})).norm(), 1e-15); }

TEST(Kron, XOnFirstQubitFlipsMostSignificantBit) {
  const ComplexVector out = kron(pauli::x(), pauli::identity()) * ket::product({ket::zero(), ket::zero()});
  EXPECT_NEAR(std::abs(out(2)), 1.0, 1e-15);
}

TEST(Kron, MatchesDefinitionOnRandomMatrices) {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = oracle::randomHermitian(1, rng);
  const ComplexMatrix b = oracle::randomHermitian(2, rng) * Complex(0.3, 0.7);
  EXPECT_LT((kron(a, b) - oracle::kron(a, b)).norm(), 1e-13);
}

TEST(PartialTrace, BellStateMarginalIsMaximallyMixed) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix rho = phi * phi.adjoint();
  EXPECT_LT((partialTrace(rho, {0}, 2) - pauli::identity() / 2.0).norm(), 1e-15);
  EXPECT_LT((partialTrace(rho, {1}, 2) - pauli::identity() / 2.0).norm(), 1e-15);
}

TEST(PartialTrace, ProductStateFactorizes) {
  std::mt19937_64 rng(2);
  const ComplexMatrix rho = oracle::randomMixedState(2, rng);
  const ComplexMatrix sigma = oracle::randomHermitian(1, rng);
  EXPECT_LT((partialTrace(kron(rho, sigma), {0, 1}, 3) - rho * sigma.trace()).norm(), 1e-12);
}

TEST(PartialTrace, MatchesSummationOracleForEveryKeepSet) {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = oracle::randomHermitian(4, rng);
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::vector<int> keep;
    for (int q = 0; q < 4; ++q)
      if (mask & (1U << q)) keep.push_back(q);
    const ComplexMatrix got = partialTrace(m, std::span<const int>(keep), 4);
    EXPECT_LT((got - oracle::partialTrace(m, keep, 4)).norm(), 1e-12) << "mask " << mask;
    EXPECT_NEAR(std::abs(got.trace() - m.trace()), 0.0, 1e-12);
  }
}

TEST(PartialTrace, ComposesOverDisjointSubsets) {
  std::mt19937_64 rng(4);
  const ComplexMatrix m = oracle::randomMixedState(4, rng);
  // Trace out qubit 1, then (old) qubit 3 == trace out {1, 3} at once.
  const ComplexMatrix step = partialTrace(partialTrace(m, {0, 2, 3}, 4), {0, 1}, 3);
  EXPECT_LT((step - partialTrace(m, {0, 2}, 4)).norm(), 1e-13);
}

TEST(PartialTrace, RejectsBadIndices) {
  const ComplexMatrix m = pauli::identity(4);
  EXPECT_THROW(partialTrace(m, {2}, 2), std::out_of_range);
  EXPECT_THROW(partialTrace(m, {-1}, 2), std::out_of_range);
}

TEST(HermitianEig, DiagonalInput) {
  const auto e = hermitianEig(diag({4, 9}));
  EXPECT_NEAR(e.values(0), 4.0, 1e-14);
  EXPECT_NEAR(e.values(1), 9.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1.0, 1e-14);
}

TEST(HermitianEig, PauliXSpectrum) {
  const auto e = hermitianEig(pauli::x());
  EXPECT_NEAR(e.values(0), -1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
}

TEST(HermitianEig, RejectsNonHermitian) {
  ComplexMatrix m = pauli::x();
  m(0, 1) = 2.0;
  EXPECT_THROW(hermitianEig(m), std::invalid_argument);
}

TEST(MatrixSqrt, DiagonalExamples) {
  EXPECT_LT((matrixSqrt(diag({4, 9})) - diag({2, 3})).norm(), 1e-14);
  EXPECT_LT((matrixInvSqrt(pauli::identity()) - pauli::identity()).norm(), 1e-14);
  EXPECT_LT((matrixInvSqrt(diag({4, 0})) - diag({0.5, 0})).norm(), 1e-14);
}

TEST(MatrixSqrt, SquaresBackOnRandomPsd) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 3; ++n) {
    const ComplexMatrix m = oracle::randomMixedState(n, rng) * 3.0;
    const ComplexMatrix s = matrixSqrt(m);
    EXPECT_LE((s * s - m).norm(), 1e-8 * m.norm());
  }
}

TEST(MatrixSqrt, RejectsClearlyNegativeSpectrum) {
  EXPECT_THROW(matrixSqrt(diag({1, -1e-3})), std::domain_error);
  EXPECT_NO_THROW(matrixSqrt(diag({1, -1e-9})));
}

TEST(Fidelity, SpecialCases) {
  const auto zero = DensityMatrix::zeros(1);
  const auto one = DensityMatrix::fromKet(ket::one());
  EXPECT_NEAR(fidelity(zero, zero), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(zero, one), 0.0, 1e-7);
  EXPECT_NEAR(fidelity(zero, DensityMatrix::maximallyMixed(1)), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Fidelity, SymmetricAndMatchesSvdOracle) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const DensityMatrix a(oracle::randomMixedState(n, rng));
    const DensityMatrix b(oracle::randomMixedState(n, rng));
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-8);
    EXPECT_NEAR(fidelity(a, b), oracle::fidelity(a.matrix(), b.matrix()), 1e-8);
    EXPECT_LT(fidelity(a, b), 1.0 - 1e-6);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-8);
  }
}

TEST(Fidelity, PureStateReducesToOverlap) {
  std::mt19937_64 rng(7);
  const ComplexMatrix psi = oracle::randomPureState(2, rng);
  const DensityMatrix tau(oracle::randomMixedState(2, rng));
  const double direct = std::sqrt((psi * tau.matrix()).trace().real());
  EXPECT_NEAR(fidelity(DensityMatrix(psi), tau), direct, 1e-8);
}

TEST(DensityMatrix, ValidatesInvariants) {
  EXPECT_THROW(DensityMatrix(diag({1, 1})), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(diag({1.5, -0.5})), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(3, 3) / 3.0), std::invalid_argument);
  ComplexMatrix nonHermitian = diag({0.5, 0.5});
  nonHermitian(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{nonHermitian}, std::invalid_argument);
  EXPECT_NO_THROW(DensityMatrix(diag({0.25, 0.75})));
}

TEST(DensityMatrix, PurityOfStandardStates) {
  EXPECT_NEAR(DensityMatrix::zeros(2).purity(), 1.0, 1e-15);
  EXPECT_NEAR(DensityMatrix::maximallyMixed(2).purity(), 0.25, 1e-15);
}

TEST(TraceDistance, OrthogonalPureStatesAreAtDistanceOne) {
  EXPECT_NEAR(traceDistance(DensityMatrix::zeros(1).matrix(), DensityMatrix::fromKet(ket::one()).matrix()), 1.0,
              1e-14);
}

}  // namespace
}  // namespace dqnn
