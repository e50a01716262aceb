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

#include <Eigen/Sparse>
#include <span>
#include <vector>

#include "qsm/circuit.hpp"

namespace qsm::sim {

using SparseGate = Eigen::SparseMatrix<Complex>;

// Dense/sparse unitary of a single (non-measurement) instruction on the full
// register, mostly for unitarity checks and channel tests.
SparseGate instruction_unitary(const Instruction& op, int num_qubits);

// Exact expectation E[prod of the listed slots' outcomes], computed by
// density-operator evolution: recorded slots apply the signed instrument
// sigma -> M+ sigma M+^dag - M- sigma M-^dag, unrecorded measurements apply
// the unsigned sum, resets trace out and replace, PrepareMixed tensors in the
// registered density matrix. Deterministic, no sampling.
//
// For a MeasureSampledPauli slot the instrument is additionally averaged over
// the term distribution (signed version weighted by the term signs), so the
// returned value matches the expectation of the shot-sampled product.
double signed_expectation(const Circuit& circuit, std::span<const int> slots);

// Same evolution, returning the final operator (a density matrix when no
// signed slot is involved). Used by channel-equality tests.
Matrix evolve_signed(const Circuit& circuit, std::span<const int> slots,
                     const Matrix* initial = nullptr);

// Tr(P_k rho^{tensor k}) with the cyclic permutation built explicitly.
// Requires k*m <= 14.
double permutation_trace_check(const MixedState& rho, int k);

}  // namespace qsm::sim
