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

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qsm::sim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Density operator with a cached eigendecomposition. Eigenvalues are sorted
// descending and clamped at zero (tolerance 1e-12) so that tiny negative
// values from matrix exponentials never leak into sampling.
class MixedState {
 public:
  // Validates hermiticity (1e-12), unit trace (1e-12) and positivity, then
  // diagonalizes. Throws ConfigError on violation.
  static MixedState from_matrix(const Matrix& rho);

  // Diagonal state in the computational basis.
  static MixedState diagonal(const Eigen::VectorXd& probabilities);

  static MixedState pure_zero(int qubits);
  static MixedState maximally_mixed(int qubits);

  // Haar-random pure state / random full-rank mixed state, for tests.
  static MixedState random_pure(int qubits, std::uint64_t seed);
  static MixedState random_mixed(int qubits, std::uint64_t seed);

  int qubits() const { return qubits_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }
  // Descending, clamped at 0, renormalized to sum 1.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  const std::vector<double>& eigenvalue_cdf() const { return cdf_; }

  // max_i |(V diag(w) V^dagger - rho)_ij|, used by the reconstruction check.
  double reconstruction_error() const;

  bool is_pure(double tol = 1e-10) const {
    return eigenvalues_.size() > 0 && eigenvalues_[0] >= 1.0 - tol;
  }

 private:
  MixedState() = default;
  void finalize();

  int qubits_ = 0;
  Matrix rho_;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
  std::vector<double> cdf_;
};

// Statevector with qubit q mapped to bit q of the basis index.
struct PureState {
  int qubits = 0;
  std::vector<Complex> amplitudes;

  static PureState zero(int qubits);
  double norm_squared() const;
};

}  // namespace qsm::sim
