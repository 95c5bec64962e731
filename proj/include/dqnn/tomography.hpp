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

#include <cstdint>
#include <string>
#include <vector>

#include "dqnn/linalg.hpp"

namespace dqnn {

/// One measurement setting: rotate so that |label> maps to |0...0>, then read
/// out in the computational basis.
struct MeasurementBasis {
  std::string label;      // one character per qubit from {g, e, +, i}
  ComplexMatrix rotation;  // basis-change unitary applied before readout
};

/// Products of the single-qubit set {|g>, |e>, |+>, |i>}: 4 settings for one
/// qubit, 16 for two, 4^n in general.
struct BasisSet {
  int numQubits = 1;
  std::vector<MeasurementBasis> elements;

  static BasisSet pauli(int numQubits);
  const MeasurementBasis* find(const std::string& label) const;
};

struct TomographyRecord {
  std::string basisLabel;
  long shots = 0;
  std::vector<long> counts;  // per computational outcome

  void validate() const;
};

/// Relative frequencies of one setting; need not come from integer counts.
struct FrequencyRecord {
  std::string basisLabel;
  std::vector<double> frequencies;
};

/// Born probabilities of every outcome for every setting.
std::vector<FrequencyRecord> exactFrequencies(const DensityMatrix& rho, const BasisSet& basis);

/// Multinomial counts drawn from the Born probabilities, `shots` per setting.
std::vector<TomographyRecord> sampleMeasurements(const DensityMatrix& rho, const BasisSet& basis,
                                                 long shots, std::uint64_t seed);

std::vector<FrequencyRecord> toFrequencies(const std::vector<TomographyRecord>& records);

struct ReconstructionOptions {
  int maxIterations = 5000;
  double tolerance = 1e-10;
};

/// Physical state minimizing the squared distance between predicted and
/// observed frequencies, found by projected gradient descent onto the set of
/// density matrices. Throws if any setting of BasisSet::pauli is missing.
DensityMatrix reconstructState(const std::vector<FrequencyRecord>& records, int numQubits,
                               const ReconstructionOptions& options = {});
DensityMatrix reconstructState(const std::vector<TomographyRecord>& records, int numQubits,
                               const ReconstructionOptions& options = {});

/// Unconstrained least-squares inverse (Hermitian, unit trace, possibly not PSD).
ComplexMatrix linearInversion(const std::vector<FrequencyRecord>& records, int numQubits);

/// Sum of squared differences between predicted and observed frequencies.
double frequencyResidual(const ComplexMatrix& m, const std::vector<FrequencyRecord>& records, int numQubits);

/// Closest density matrix in Frobenius norm: eigenvalues projected onto the simplex.
ComplexMatrix projectToDensityMatrix(const ComplexMatrix& hermitian);

/// Sample-and-reconstruct estimate of a state, as done for every layer when
/// training in tomographic mode.
DensityMatrix tomographicEstimate(const DensityMatrix& rho, long shots, std::uint64_t seed);

/// One line per setting: "<label> <shots> <count_0> ... <count_k>".
std::string formatRecords(const std::vector<TomographyRecord>& records);

}  // namespace dqnn
