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

#include "qsm/heisenberg.hpp"

#include <cmath>

#include "qsm/errors.hpp"

namespace qsm::apps {

obs::PauliObservable heisenberg_hamiltonian(const HeisenbergSpec& spec) {
  if (spec.sites < 2) throw ConfigError("Heisenberg chain needs at least 2 sites");
  if (spec.sites > 8) throw BudgetError("Heisenberg chain exceeds the dense cap");
  const int n = spec.sites;
  std::vector<obs::PauliTerm> terms;
  const char bond[3] = {'X', 'Y', 'Z'};
  for (int i = 0; i + 1 < n; ++i) {
    for (char p : bond) {
      if (spec.coupling == 0.0) continue;
      std::string s(static_cast<std::size_t>(n), 'I');
      s[static_cast<std::size_t>(i)] = p;
      s[static_cast<std::size_t>(i + 1)] = p;
      terms.push_back({spec.coupling, s});
    }
  }
  for (int i = 0; i < n; ++i) {
    if (spec.field == 0.0) continue;
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(i)] = 'Z';
    terms.push_back({spec.field, s});
  }
  return obs::PauliObservable(n, std::move(terms));
}

sim::MixedState gibbs_state(const obs::PauliObservable& hamiltonian, double beta) {
  Eigen::SelfAdjointEigenSolver<sim::Matrix> es(hamiltonian.dense());
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd energy = es.eigenvalues();
  const double ground = energy.minCoeff();
  Eigen::VectorXd weights(energy.size());
  for (Eigen::Index i = 0; i < energy.size(); ++i) {
    weights[i] = std::exp(-beta * (energy[i] - ground));
  }
  weights /= weights.sum();
  const sim::Matrix rho = es.eigenvectors() *
                          weights.cast<sim::Complex>().asDiagonal() *
                          es.eigenvectors().adjoint();
  return sim::MixedState::from_matrix(rho);
}

double exact_cooled_energy(const sim::MixedState& rho,
                           const obs::PauliObservable& hamiltonian, int k) {
  if (k < 1) throw ConfigError("cooling order must be >= 1");
  const auto& w = rho.eigenvalues();
  const auto& v = rho.eigenvectors();
  const sim::Matrix h_in_basis = v.adjoint() * hamiltonian.dense() * v;
  double numerator = 0.0;
  double denominator = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double wk = std::pow(w[i], k);
    numerator += wk * h_in_basis(i, i).real();
    denominator += wk;
  }
  if (denominator < 1e-300) {
    throw NumericalError("Tr(rho^k) underflowed; reduce k or beta");
  }
  return numerator / denominator;
}

double ground_state_energy(const obs::PauliObservable& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<sim::Matrix> es(hamiltonian.dense(),
                                                Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace qsm::apps
