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

#include "dqnn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dqnn {

namespace pauli {

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace pauli

int qubitCount(Eigen::Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

bool isHermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = r; c < m.cols(); ++c) {
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
    }
  }
  return true;
}

ComplexMatrix hermitianPart(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partialTrace(const ComplexMatrix& m, std::span<const int> keep, int total) {
  if (m.rows() != m.cols() || m.rows() != (Eigen::Index{1} << total)) {
    throw std::invalid_argument("partialTrace: matrix does not act on " + std::to_string(total) +
                                " qubits");
  }
  std::vector<bool> kept(static_cast<std::size_t>(total), false);
  for (int q : keep) {
    if (q < 0 || q >= total) {
      throw std::out_of_range("partialTrace: qubit index " + std::to_string(q) + " out of range");
    }
    if (kept[static_cast<std::size_t>(q)]) {
      throw std::invalid_argument("partialTrace: duplicate qubit index " + std::to_string(q));
    }
    kept[static_cast<std::size_t>(q)] = true;
  }

  // Bit positions (from the least significant end) of kept and traced qubits,
  // each list ordered from most to least significant.
  std::vector<int> keptShift;
  std::vector<int> tracedShift;
  for (int q = 0; q < total; ++q) {
    (kept[static_cast<std::size_t>(q)] ? keptShift : tracedShift).push_back(total - 1 - q);
  }

  auto scatter = [](Eigen::Index value, const std::vector<int>& shifts) {
    Eigen::Index out = 0;
    const auto n = static_cast<int>(shifts.size());
    for (int b = 0; b < n; ++b) {
      if ((value >> (n - 1 - b)) & 1) out |= Eigen::Index{1} << shifts[static_cast<std::size_t>(b)];
    }
    return out;
  };

  const Eigen::Index keptDim = Eigen::Index{1} << keptShift.size();
  const Eigen::Index tracedDim = Eigen::Index{1} << tracedShift.size();
  std::vector<Eigen::Index> keptIdx(static_cast<std::size_t>(keptDim));
  std::vector<Eigen::Index> tracedIdx(static_cast<std::size_t>(tracedDim));
  for (Eigen::Index k = 0; k < keptDim; ++k) keptIdx[static_cast<std::size_t>(k)] = scatter(k, keptShift);
  for (Eigen::Index t = 0; t < tracedDim; ++t) tracedIdx[static_cast<std::size_t>(t)] = scatter(t, tracedShift);

  ComplexMatrix out = ComplexMatrix::Zero(keptDim, keptDim);
  for (Eigen::Index r = 0; r < keptDim; ++r) {
    for (Eigen::Index c = 0; c < keptDim; ++c) {
      Complex acc = 0.0;
      for (Eigen::Index t : tracedIdx) {
        acc += m(keptIdx[static_cast<std::size_t>(r)] | t, keptIdx[static_cast<std::size_t>(c)] | t);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partialTrace(const ComplexMatrix& m, std::initializer_list<int> keep, int total) {
  return partialTrace(m, std::span<const int>(keep.begin(), keep.size()), total);
}

HermitianEigen hermitianEig(const ComplexMatrix& m) {
  if (!isHermitian(m, kHermitianTol)) {
    throw std::invalid_argument("hermitianEig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitianPart(m));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitianEig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

template <typename F>
ComplexMatrix spectralMap(const HermitianEigen& eig, F&& f) {
  const ComplexMatrix& v = eig.vectors;
  RealVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) mapped(i) = f(eig.values(i));
  return v * mapped.cast<Complex>().asDiagonal() * v.adjoint();
}

void rejectNegative(const RealVector& values, const char* who) {
  if (values.size() > 0 && values.minCoeff() < -kNegativeEigenError) {
    std::ostringstream os;
    os << who << ": eigenvalue " << values.minCoeff() << " is significantly negative";
    throw std::domain_error(os.str());
  }
}

}  // namespace

ComplexMatrix matrixSqrt(const ComplexMatrix& m) {
  const auto eig = hermitianEig(m);
  rejectNegative(eig.values, "matrixSqrt");
  return spectralMap(eig, [](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
}

ComplexMatrix matrixInvSqrt(const ComplexMatrix& m) {
  const auto eig = hermitianEig(m);
  rejectNegative(eig.values, "matrixInvSqrt");
  return spectralMap(eig, [](double v) { return v > kEigenClamp ? 1.0 / std::sqrt(v) : 0.0; });
}

double traceProductReal(const ComplexMatrix& a, const ComplexMatrix& b) {
  // tr(ab) = sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum().real();
}

double frobeniusDistance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm();
}

double traceDistance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto eig = hermitianEig(hermitianPart(a - b));
  return 0.5 * eig.values.cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m)
    : numQubits_(qubitCount(m.rows())), matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("DensityMatrix: matrix is not square");
  }
  validate();
  matrix_ = hermitianPart(matrix_);
}

DensityMatrix::DensityMatrix(ComplexMatrix m, TrustedTag)
    : numQubits_(qubitCount(m.rows())), matrix_(hermitianPart(m)) {}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m) {
  return DensityMatrix(std::move(m), TrustedTag{});
}

DensityMatrix DensityMatrix::fromKet(const ComplexVector& ket) {
  const double norm = ket.norm();
  if (norm == 0.0) throw std::invalid_argument("DensityMatrix::fromKet: zero vector");
  const ComplexVector psi = ket / norm;
  return DensityMatrix(psi * psi.adjoint(), TrustedTag{});
}

DensityMatrix DensityMatrix::zeros(int numQubits) {
  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m), TrustedTag{});
}

DensityMatrix DensityMatrix::maximallyMixed(int numQubits) {
  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), TrustedTag{});
}

double DensityMatrix::purity() const {
  return traceProductReal(matrix_, matrix_);
}

void DensityMatrix::validate() const {
  if (!isHermitian(matrix_, kHermitianTol)) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr.real() << " differs from 1";
    throw std::invalid_argument(os.str());
  }
  const double minEig = hermitianEig(matrix_).values.minCoeff();
  if (minEig < -kPsdTol) {
    std::ostringstream os;
    os << "DensityMatrix: minimum eigenvalue " << minEig << " is negative";
    throw std::invalid_argument(os.str());
  }
}

// ---------------------------------------------------------------------------
// BackwardTerm

BackwardTerm::BackwardTerm(ComplexMatrix m)
    : numQubits_(qubitCount(m.rows())), matrix_(std::move(m)) {
  if (!isHermitian(matrix_, kHermitianTol)) {
    throw std::invalid_argument("BackwardTerm: not Hermitian within 1e-10");
  }
  matrix_ = hermitianPart(matrix_);
}

BackwardTerm::BackwardTerm(ComplexMatrix m, TrustedTag)
    : numQubits_(qubitCount(m.rows())), matrix_(hermitianPart(m)) {}

BackwardTerm BackwardTerm::trusted(ComplexMatrix m) {
  return BackwardTerm(std::move(m), TrustedTag{});
}

BackwardTerm BackwardTerm::identity(int numQubits) {
  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  return BackwardTerm(ComplexMatrix::Identity(dim, dim), TrustedTag{});
}

BackwardTerm BackwardTerm::zero(int numQubits) {
  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  return BackwardTerm(ComplexMatrix::Zero(dim, dim), TrustedTag{});
}

// ---------------------------------------------------------------------------

double fidelity(const DensityMatrix& rho, const DensityMatrix& tau) {
  if (rho.numQubits() != tau.numQubits()) {
    throw std::invalid_argument("fidelity: qubit count mismatch");
  }
  const ComplexMatrix sqrtTau = matrixSqrt(tau.matrix());
  const ComplexMatrix a = hermitianPart(sqrtTau * rho.matrix() * sqrtTau);
  const auto eig = hermitianEig(a);
  double f = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > 0.0) f += std::sqrt(eig.values(i));
  }
  return f;
}

}  // namespace dqnn
