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
#include <memory>
#include <vector>

#include "qsm/circuit.hpp"
#include "qsm/pauli.hpp"
#include "qsm/qsf.hpp"

namespace qsm::obs {

enum class Scheme { kPauli, kLcu };

struct WeightedMoments {
  int k = 0;
  Scheme scheme = Scheme::kPauli;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<double> estimates;  // Tr(O rho^1) .. Tr(O rho^k)
  std::vector<double> stderrs;
};

// Moment chain with the observable coupled once at the end:
//   pauli: importance-sampled Pauli measurement on register one; order j+1
//          estimator S sgn(alpha_p) m_p times the product of the last j
//          ancilla outcomes.
//   lcu:   one extra ancilla in |+>, controlled-U on register one, X readout
//          multiplied into the same suffix products and rescaled by ||O||.
sim::Circuit build_weighted_chain_circuit(std::shared_ptr<const sim::MixedState> rho,
                                          const PauliObservable& o, int k,
                                          Scheme scheme);

// All of Tr(O rho), Tr(O rho^2), ..., Tr(O rho^k) from one shot stream.
WeightedMoments estimate_weighted_moments(std::shared_ptr<const sim::MixedState> rho,
                                          const PauliObservable& o, int k,
                                          std::int64_t shots, std::uint64_t seed,
                                          Scheme scheme, int threads = 1);

// f_i(O, rho) = sum_j beta_{i,j} Tr(O rho^j) by coefficient contraction of a
// single shared weighted-moment stream. Throws when a degree exceeds the
// estimated order.
struct WeightedFunctionalEstimate {
  double value = 0.0;
  double error_bound = 0.0;
};

// Coefficient contraction of an existing weighted-moment run.
std::vector<WeightedFunctionalEstimate> contract_functionals(
    const WeightedMoments& wm, const std::vector<qsf::PolynomialFunctional>& fs);

std::vector<WeightedFunctionalEstimate> estimate_weighted_functionals(
    std::shared_ptr<const sim::MixedState> rho, const PauliObservable& o,
    const std::vector<qsf::PolynomialFunctional>& fs, std::int64_t shots,
    std::uint64_t seed, Scheme scheme, int threads = 1);

// Exact Tr(O rho^j) for j = 1..k by dense algebra (oracle route).
std::vector<double> exact_weighted_moments(const sim::MixedState& rho,
                                           const PauliObservable& o, int k);

}  // namespace qsm::obs
