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
#include <vector>

#include "qsm/circuit.hpp"

namespace qsm::apps {

// S_alpha = log(Tr rho^alpha) / (1 - alpha); natural log by default.
// Throws NumericalError on a nonpositive moment (increase shots).
double renyi_entropy(double moment_alpha, int alpha, bool base_two = false);
double renyi_entropy_exact(const sim::MixedState& rho, int alpha,
                           bool base_two = false);

// Two-qubit fragment R_y(theta) + CNOT with theta = 2 arctan(e^beta); the
// first qubit's reduced state is Gibbs-Z(beta).
sim::Circuit gibbs_z_circuit(double beta);
double gibbs_z_angle(double beta);

struct RenyiEstimate {
  int alpha = 0;
  double moment = 0.0;        // Tr(rho^alpha) estimate
  double moment_stderr = 0.0;
  double entropy = 0.0;
  double exact_entropy = 0.0;
};

// Noiseless run of the purified-preparation chain: each register holds the
// two-qubit R_y + CNOT block, the CSWAPs exchange the system qubits only, and
// the running ancilla products give Tr(rho^alpha) for every alpha <= max.
std::vector<RenyiEstimate> renyi_experiment(double beta, int alpha_max,
                                            std::int64_t shots,
                                            std::uint64_t seed, bool base_two,
                                            int threads = 1);

// The 5-qubit circuit itself (one ancilla, two purification pairs).
sim::Circuit renyi_chain_circuit(double beta, int alpha_max);

}  // namespace qsm::apps
