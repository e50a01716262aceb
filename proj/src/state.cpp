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

#include "qsm/state.hpp"

#include <algorithm>
#include <cmath>

#include "qsm/errors.hpp"
#include "qsm/rng.hpp"

namespace qsm::sim {

namespace {

int qubits_for_dim(Eigen::Index d) {
  int m = 0;
  while ((Eigen::Index{1} << m) < d) ++m;
  if ((Eigen::Index{1} << m) != d) {
    throw ConfigError("state dimension is not a power of two");
  }
  return m;
}

}  // namespace

MixedState MixedState::from_matrix(const Matrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() < 1) {
    throw ConfigError("density matrix must be square");
  }
  MixedState s;
  s.qubits_ = qubits_for_dim(rho.rows());
  s.rho_ = rho;
  s.finalize();
  return s;
}

MixedState MixedState::diagonal(const Eigen::VectorXd& probabilities) {
  Matrix rho = probabilities.cast<Complex>().asDiagonal();
  return from_matrix(rho);
}

MixedState MixedState::pure_zero(int qubits) {
  const Eigen::Index d = Eigen::Index{1} << qubits;
  Matrix rho = Matrix::Zero(d, d);
  rho(0, 0) = 1.0;
  return from_matrix(rho);
}

MixedState MixedState::maximally_mixed(int qubits) {
  const Eigen::Index d = Eigen::Index{1} << qubits;
  return from_matrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

MixedState MixedState::random_pure(int qubits, std::uint64_t seed) {
  const Eigen::Index d = Eigen::Index{1} << qubits;
  ShotRng rng(seed, 0);
  Vector psi(d);
  for (Eigen::Index i = 0; i < d; ++i) psi[i] = Complex(rng.normal(), rng.normal());
  psi.normalize();
  return from_matrix(psi * psi.adjoint());
}

MixedState MixedState::random_mixed(int qubits, std::uint64_t seed) {
  const Eigen::Index d = Eigen::Index{1} << qubits;
  ShotRng rng(seed, 1);
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return from_matrix(rho);
}

void MixedState::finalize() {
  constexpr double kTol = 1e-12;
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kTol) throw ConfigError("density matrix is not Hermitian");
  const Complex tr = rho_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10) {
    throw ConfigError("density matrix trace must be 1");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Eigen::VectorXd w = es.eigenvalues();
  Matrix v = es.eigenvectors();
  if (w.minCoeff() < -kTol) throw ConfigError("density matrix has a negative eigenvalue");

  // Descending order, clamp, renormalize to unit sum.
  const Eigen::Index d = w.size();
  eigenvalues_.resize(d);
  eigenvectors_.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    eigenvalues_[i] = std::max(0.0, w[d - 1 - i]);
    eigenvectors_.col(i) = v.col(d - 1 - i);
  }
  eigenvalues_ /= eigenvalues_.sum();

  std::vector<double> w_std(eigenvalues_.data(), eigenvalues_.data() + d);
  cdf_ = cumulative(w_std);
  cdf_.back() = 1.0;
}

double MixedState::reconstruction_error() const {
  const Matrix rebuilt =
      eigenvectors_ * eigenvalues_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
  return (rebuilt - rho_).cwiseAbs().maxCoeff();
}

PureState PureState::zero(int qubits) {
  PureState s;
  s.qubits = qubits;
  s.amplitudes.assign(std::size_t{1} << qubits, Complex(0.0, 0.0));
  s.amplitudes[0] = 1.0;
  return s;
}

double PureState::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amplitudes) n += std::norm(a);
  return n;
}

}  // namespace qsm::sim
