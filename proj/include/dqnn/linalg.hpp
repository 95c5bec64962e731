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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

/// Dense complex linear algebra for small qubit registers.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
/// computational basis index. Every routine in this library follows that
/// convention.
namespace dqnn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
/// Eigenvalues below this are treated as zero by the inverse square root.
inline constexpr double kEigenClamp = 1e-12;
/// Eigenvalues below this indicate an invalid density operator upstream.
inline constexpr double kNegativeEigenError = 1e-6;

namespace pauli {
ComplexMatrix identity(std::size_t dim = 2);
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// Number of qubits n such that dim == 2^n; throws if dim is not a power of two.
int qubitCount(Eigen::Index dim);

bool isHermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// (m + m^dagger) / 2
ComplexMatrix hermitianPart(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on the qubits listed in `keep` (kept in ascending order).
/// `m` acts on `total` qubits.
ComplexMatrix partialTrace(const ComplexMatrix& m, std::span<const int> keep, int total);
ComplexMatrix partialTrace(const ComplexMatrix& m, std::initializer_list<int> keep, int total);

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Spectral decomposition of a Hermitian matrix. Rejects non-Hermitian input.
HermitianEigen hermitianEig(const ComplexMatrix& m);

/// Principal square root of a PSD Hermitian matrix. Eigenvalues in
/// [-1e-6, 0) are clamped to zero; anything more negative throws.
ComplexMatrix matrixSqrt(const ComplexMatrix& m);

/// Moore-Penrose inverse square root: eigenvalues below kEigenClamp map to 0.
ComplexMatrix matrixInvSqrt(const ComplexMatrix& m);

/// Real part of tr(a * b) without forming the product.
double traceProductReal(const ComplexMatrix& a, const ComplexMatrix& b);

double frobeniusDistance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Half the trace norm of (a - b).
double traceDistance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Positive semidefinite, unit-trace Hermitian operator on a qubit register.
class DensityMatrix {
 public:
  /// Validates hermiticity, trace and positivity; throws std::invalid_argument.
  explicit DensityMatrix(ComplexMatrix m);

  /// Skips validation but still symmetrizes. For results of channels that
  /// preserve the invariants by construction.
  static DensityMatrix trusted(ComplexMatrix m);

  static DensityMatrix fromKet(const ComplexVector& ket);
  /// |0...0><0...0| on n qubits.
  static DensityMatrix zeros(int numQubits);
  static DensityMatrix maximallyMixed(int numQubits);

  int numQubits() const { return numQubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  double purity() const;

  /// Throws std::invalid_argument with a description when an invariant fails.
  void validate() const;

 private:
  struct TrustedTag {};
  DensityMatrix(ComplexMatrix m, TrustedTag);

  int numQubits_;
  ComplexMatrix matrix_;
};

/// Hermitian operator propagated backwards through a network. Not required to
/// be positive or normalized; Hamiltonians and observables use the same type.
class BackwardTerm {
 public:
  explicit BackwardTerm(ComplexMatrix m);
  static BackwardTerm trusted(ComplexMatrix m);
  static BackwardTerm identity(int numQubits);
  static BackwardTerm zero(int numQubits);

  int numQubits() const { return numQubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  struct TrustedTag {};
  BackwardTerm(ComplexMatrix m, TrustedTag);

  int numQubits_;
  ComplexMatrix matrix_;
};

/// Root Uhlmann fidelity tr sqrt(sqrt(tau) rho sqrt(tau)).
double fidelity(const DensityMatrix& rho, const DensityMatrix& tau);

}  // namespace dqnn
