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
#include "qsm/rng.hpp"

namespace qsm::moments {

struct MomentPlan {
  int k = 2;
  double epsilon = 0.1;
  std::int64_t shots = 0;  // 0: derive from required_shots(k, epsilon)
  std::uint64_t seed = 0;
};

struct MomentEstimates {
  int k = 0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<double> estimates;  // Tr(rho^2) .. Tr(rho^k)
  std::vector<double> stderrs;    // population sd / sqrt(n), always <= 1/sqrt(n)
  std::int64_t executions = 0;    // chain circuit runs consumed
};

// ceil(2 ln(6k) / eps^2): one shot stream covering all k-1 moment estimators
// at additive error eps with success probability 2/3.
std::int64_t required_shots(int k, double epsilon);

// Tr(rho^2)..Tr(rho^k) from the eigenvalues.
std::vector<double> exact_moments(const sim::MixedState& rho, int k);

// Qubit layout of the reset chain: register one holds the persistent copy,
// register two is reset and re-prepared every round, one ancilla on top.
struct ChainLayout {
  std::vector<int> register_one;
  std::vector<int> register_two;
  int ancilla;
};
ChainLayout chain_layout(int m);

// The (2m+1)-qubit chain with k-1 rounds: each round re-prepares register two,
// runs one Hadamard-CSWAP block and X-measures the ancilla into slot j-1.
sim::Circuit chain_circuit(std::shared_ptr<const sim::MixedState> rho, int k);

// Runs the chain `plan.shots` times; estimate for Tr(rho^{l+1}) is the mean
// of the product x_1..x_l over shots.
MomentEstimates estimate_moments(std::shared_ptr<const sim::MixedState> rho,
                                 const MomentPlan& plan, int threads = 1);

// One trajectory of the reset chain per call. In rho's eigenbasis every
// prepared copy is a basis vector and the register state stays a single
// eigenvector throughout, so the trajectory reduces to an index Markov chain
// costing O(k) per shot: each round accepts (+1) when the fresh index matches
// the register, otherwise the outcome is a fair coin and the register hops to
// the fresh index with probability 1/2 under the discard measurement. The
// outcome distribution is identical to run_shot on chain_circuit; tests pin
// both against the exact oracle.
class FactorChain {
 public:
  FactorChain(const sim::MixedState& rho, int k);

  // Fills outcomes[0..k-2]; the final register-one state is available as an
  // eigenstate index or as a vector.
  void run(ShotRng& rng, std::int8_t* outcomes);

  Eigen::Index state_index() const { return index_; }
  const sim::Vector& eigenbasis_state() const;
  void fill_computational_state(sim::Vector& out) const;

  int order() const { return k_; }

 private:
  const sim::MixedState& rho_;
  int k_;
  Eigen::Index dim_;
  Eigen::Index index_ = 0;
  mutable sim::Vector chi_;
};

struct SwapTestEstimate {
  double estimate = 0.0;     // Tr(rho^k), or Tr(O rho^k) when weighted
  double stderr = 0.0;
  double denominator = 1.0;  // mean ancilla outcome (= Tr(rho^k) estimate)
  std::int64_t shots = 0;
};

// Hadamard test of the controlled cyclic permutation on k fresh copies.
// With `weighted`, the sampled Pauli term is additionally measured on copy 1
// and the estimate is S sgn(alpha_p) m_p x rescaled to Tr(O rho^k).
// Sampled through a product-state factorization, so no k*m+1-qubit
// statevector is allocated.
SwapTestEstimate generalized_swap_test(const sim::MixedState& rho, int k,
                                       std::int64_t shots, std::uint64_t seed,
                                       int threads = 1,
                                       const obs::PauliObservable* weighted = nullptr);

}  // namespace qsm::moments
