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

#include "qsm/pauli.hpp"
#include "qsm/state.hpp"

namespace qsm::apps {

// Open-boundary spin-1/2 Heisenberg chain
//   H = J sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}) + h sum_i Z_i.
struct HeisenbergSpec {
  int sites = 2;
  double coupling = 1.0;  // J
  double field = 1.0;     // h
};

// 3(n-1) coupling terms plus n field terms (zero-coefficient terms omitted).
obs::PauliObservable heisenberg_hamiltonian(const HeisenbergSpec& spec);

// exp(-beta H) / Tr(exp(-beta H)) by dense eigendecomposition.
sim::MixedState gibbs_state(const obs::PauliObservable& hamiltonian, double beta);

// Tr(H rho^k) / Tr(rho^k); throws NumericalError when Tr(rho^k) underflows.
double exact_cooled_energy(const sim::MixedState& rho,
                           const obs::PauliObservable& hamiltonian, int k);

double ground_state_energy(const obs::PauliObservable& hamiltonian);

}  // namespace qsm::apps
