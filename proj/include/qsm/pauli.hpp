// Copyright 2026 The qsm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

#include "qsm/state.hpp"

namespace qsm::obs {

struct PauliTerm {
  double coefficient;
  std::string paulis;  // length m over {I,X,Y,Z}; character i acts on qubit i
};

// Weighted sum of Pauli strings with cached norm data and dense matrix.
class PauliObservable {
 public:
  PauliObservable(int qubits, std::vector<PauliTerm> terms);

  // One term per line: "<coeff> <PAULISTRING>"; blank lines and lines starting
  // with '#' are ignored. Throws ConfigError on malformed input or duplicate
  // strings.
  static PauliObservable parse_text(const std::string& text);
  std::string to_text() const;

  static PauliObservable identity(int qubits, double coefficient = 1.0);
  static PauliObservable single(int qubits, const std::string& paulis,
                                double coefficient = 1.0);
  static PauliObservable random(int qubits, int term_count, std::uint64_t seed);

  int qubits() const { return qubits_; }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  double l1_norm() const { return l1_norm_; }       // S = sum |alpha_p|
  double spectral_norm() const;                     // dense eigensolve, cached
  const sim::Matrix& dense() const;                 // cached

  // Importance-sampling tables: cumulative |alpha_p| and sgn(alpha_p).
  const std::vector<double>& weight_cdf() const { return weight_cdf_; }
  const std::vector<std::int8_t>& signs() const { return signs_; }

 private:
  int qubits_;
  std::vector<PauliTerm> terms_;
  double l1_norm_ = 0.0;
  std::vector<double> weight_cdf_;
  std::vector<std::int8_t> signs_;
  mutable sim::Matrix dense_;
  mutable double spectral_norm_ = -1.0;
};

// Dense matrix of one Pauli string; character i sits on bit i of the index.
sim::Matrix pauli_string_matrix(const std::string& paulis);

// out = P * in for a full-register Pauli string (in/out of dimension 2^m).
void apply_pauli_string(const std::string& paulis, const sim::Vector& in,
                        sim::Vector& out);

// (spectral norm, S, sqrt(n_P) * spectral norm); the chain
// ||O|| <= S <= sqrt(n_P) ||O|| is asserted.
struct NormReport {
  double spectral;
  double pauli_l1;
  double sqrt_terms_spectral;
};
NormReport norm_report(const PauliObservable& o);

// Unitary U = O' + i sqrt(I - O'^2) with O' = O / ||O||, so that
// O = ||O|| (U + U^dag) / 2.
struct LcuUnitary {
  sim::Matrix unitary;
  double spectral_norm;
};
LcuUnitary lcu_unitary(const PauliObservable& o);

}  // namespace qsm::obs
