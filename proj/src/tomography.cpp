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

#include "dqnn/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dqnn/gates.hpp"
#include "dqnn/random.hpp"

namespace dqnn {

namespace {

using std::numbers::pi;

/// Basis-change unitary that maps |v> to |0> for v in {g, e, +, i}.
ComplexMatrix singleQubitRotation(char v) {
  switch (v) {
    case 'g':
      return pauli::identity();
    case 'e':
      return pauli::x();
    case '+': {
      // Ry(-pi/2): |+> -> |0>
      ComplexMatrix m(2, 2);
      const double s = 1.0 / std::sqrt(2.0);
      m << s, s, -s, s;
      return m;
    }
    case 'i':
      // Rx(pi/2): |+i> -> |0>
      return rxGate(pi / 2.0);
    default:
      throw std::invalid_argument(std::string("unknown basis symbol '") + v + "'");
  }
}

/// Rows of the measurement map: predicted frequency of row r is
/// (design * vec(M))(r) with vec column-major.
struct MeasurementMap {
  ComplexMatrix design;
  std::vector<ComplexMatrix> projectors;
  Eigen::VectorXd observed;
};

MeasurementMap buildMap(const std::vector<FrequencyRecord>& records, int numQubits) {
  const BasisSet basis = BasisSet::pauli(numQubits);
  std::map<std::string, const FrequencyRecord*> byLabel;
  for (const auto& r : records) byLabel[r.basisLabel] = &r;

  std::vector<std::string> missing;
  for (const auto& e : basis.elements) {
    if (!byLabel.count(e.label)) missing.push_back(e.label);
  }
  if (!missing.empty()) {
    std::string msg = "tomography: missing measurement settings:";
    for (const auto& m : missing) msg += " " + m;
    throw std::invalid_argument(msg);
  }

  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  MeasurementMap map;
  const auto rows = static_cast<Eigen::Index>(basis.elements.size()) * dim;
  map.design.resize(rows, dim * dim);
  map.observed.resize(rows);
  Eigen::Index row = 0;
  for (const auto& e : basis.elements) {
    const auto& freq = byLabel.at(e.label)->frequencies;
    if (freq.size() != static_cast<std::size_t>(dim)) {
      throw std::invalid_argument("tomography: setting " + e.label + " has the wrong number of outcomes");
    }
    for (Eigen::Index k = 0; k < dim; ++k, ++row) {
      // Pi = R^dagger |k><k| R
      const ComplexMatrix proj = e.rotation.row(k).adjoint() * e.rotation.row(k);
      // tr(Pi M) = sum_ij Pi_ji M_ij
      const ComplexMatrix pt = proj.transpose();
      map.design.row(row) = Eigen::Map<const ComplexVector>(pt.data(), dim * dim).transpose();
      map.projectors.push_back(proj);
      map.observed(row) = freq[static_cast<std::size_t>(k)];
    }
  }
  return map;
}

Eigen::VectorXd predicted(const MeasurementMap& map, const ComplexMatrix& m) {
  const ComplexVector v = Eigen::Map<const ComplexVector>(m.data(), m.size());
  return (map.design * v).real();
}

}  // namespace

BasisSet BasisSet::pauli(int numQubits) {
  if (numQubits < 1) throw std::invalid_argument("BasisSet: need at least one qubit");
  static constexpr char kSymbols[4] = {'g', 'e', '+', 'i'};
  BasisSet set;
  set.numQubits = numQubits;
  const std::size_t count = std::size_t{1} << (2 * numQubits);
  for (std::size_t idx = 0; idx < count; ++idx) {
    MeasurementBasis b;
    b.rotation = ComplexMatrix::Ones(1, 1);
    for (int q = 0; q < numQubits; ++q) {
      const char s = kSymbols[(idx >> (2 * (numQubits - 1 - q))) & 3];
      b.label.push_back(s);
      b.rotation = kron(b.rotation, singleQubitRotation(s));
    }
    set.elements.push_back(std::move(b));
  }
  return set;
}

const MeasurementBasis* BasisSet::find(const std::string& label) const {
  for (const auto& e : elements) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

void TomographyRecord::validate() const {
  if (shots <= 0) throw std::invalid_argument("TomographyRecord: shots must be positive");
  long sum = 0;
  for (long c : counts) {
    if (c < 0) throw std::invalid_argument("TomographyRecord: negative count");
    sum += c;
  }
  if (sum != shots) throw std::invalid_argument("TomographyRecord: counts do not sum to shots");
}

std::vector<FrequencyRecord> exactFrequencies(const DensityMatrix& rho, const BasisSet& basis) {
  if (rho.numQubits() != basis.numQubits) {
    throw std::invalid_argument("exactFrequencies: state and basis sizes differ");
  }
  std::vector<FrequencyRecord> out;
  for (const auto& e : basis.elements) {
    const ComplexMatrix rotated = e.rotation * rho.matrix() * e.rotation.adjoint();
    FrequencyRecord r{e.label, {}};
    for (Eigen::Index k = 0; k < rotated.rows(); ++k) r.frequencies.push_back(std::max(0.0, rotated(k, k).real()));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TomographyRecord> sampleMeasurements(const DensityMatrix& rho, const BasisSet& basis, long shots,
                                                 std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sampleMeasurements: shots must be >= 1");
  Rng rng(seed);
  std::vector<TomographyRecord> out;
  for (const auto& probs : exactFrequencies(rho, basis)) {
    std::vector<double> cumulative(probs.frequencies.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < cumulative.size(); ++k) cumulative[k] = (acc += probs.frequencies[k]);
    TomographyRecord rec{probs.basisLabel, shots, std::vector<long>(cumulative.size(), 0)};
    for (long s = 0; s < shots; ++s) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
      ++rec.counts[k];
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<FrequencyRecord> toFrequencies(const std::vector<TomographyRecord>& records) {
  std::vector<FrequencyRecord> out;
  for (const auto& r : records) {
    r.validate();
    FrequencyRecord f{r.basisLabel, {}};
    for (long c : r.counts) f.frequencies.push_back(static_cast<double>(c) / static_cast<double>(r.shots));
    out.push_back(std::move(f));
  }
  return out;
}

ComplexMatrix projectToDensityMatrix(const ComplexMatrix& hermitian) {
  const auto eig = hermitianEig(hermitianPart(hermitian));
  // Euclidean projection of the spectrum onto the probability simplex.
  std::vector<double> sorted(eig.values.data(), eig.values.data() + eig.values.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double candidate = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  RealVector projected = (eig.values.array() - shift).max(0.0);
  return eig.vectors * projected.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

DensityMatrix reconstructState(const std::vector<FrequencyRecord>& records, int numQubits,
                               const ReconstructionOptions& options) {
  const MeasurementMap map = buildMap(records, numQubits);
  const Eigen::Index dim = Eigen::Index{1} << numQubits;

  // Gradient of sum_r (tr(Pi_r M) - f_r)^2 is 2 sum_r residual_r Pi_r; its
  // Lipschitz constant is 2 sigma_max(design)^2.
  Eigen::JacobiSVD<ComplexMatrix> svd(map.design);
  const double lipschitz = 2.0 * svd.singularValues()(0) * svd.singularValues()(0);
  const double step = 1.0 / lipschitz;

  ComplexMatrix m = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  for (int it = 0; it < options.maxIterations; ++it) {
    const Eigen::VectorXd residual = predicted(map, m) - map.observed;
    ComplexMatrix grad = ComplexMatrix::Zero(dim, dim);
    for (std::size_t r = 0; r < map.projectors.size(); ++r) {
      grad += (2.0 * residual(static_cast<Eigen::Index>(r))) * map.projectors[r];
    }
    ComplexMatrix next = projectToDensityMatrix(m - step * grad);
    const double change = (next - m).norm();
    m = std::move(next);
    if (change < options.tolerance) break;
  }
  return DensityMatrix::trusted(m / m.trace().real());
}

DensityMatrix reconstructState(const std::vector<TomographyRecord>& records, int numQubits,
                               const ReconstructionOptions& options) {
  return reconstructState(toFrequencies(records), numQubits, options);
}

ComplexMatrix linearInversion(const std::vector<FrequencyRecord>& records, int numQubits) {
  const MeasurementMap map = buildMap(records, numQubits);
  const Eigen::Index dim = Eigen::Index{1} << numQubits;
  const ComplexVector rhs = map.observed.cast<Complex>();
  const ComplexVector v = map.design.completeOrthogonalDecomposition().solve(rhs);
  ComplexMatrix m = hermitianPart(Eigen::Map<const ComplexMatrix>(v.data(), dim, dim));
  return m / m.trace().real();
}

double frequencyResidual(const ComplexMatrix& m, const std::vector<FrequencyRecord>& records, int numQubits) {
  const MeasurementMap map = buildMap(records, numQubits);
  return (predicted(map, m) - map.observed).squaredNorm();
}

DensityMatrix tomographicEstimate(const DensityMatrix& rho, long shots, std::uint64_t seed) {
  const BasisSet basis = BasisSet::pauli(rho.numQubits());
  return reconstructState(sampleMeasurements(rho, basis, shots, seed), rho.numQubits());
}

std::string formatRecords(const std::vector<TomographyRecord>& records) {
  std::ostringstream os;
  for (const auto& r : records) {
    os << r.basisLabel << ' ' << r.shots;
    for (long c : r.counts) os << ' ' << c;
    os << '\n';
  }
  return os.str();
}

}  // namespace dqnn
