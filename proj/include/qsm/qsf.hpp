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
#include "qsm/moments.hpp"

namespace qsm::qsf {

// f(rho) = sum_j alpha_j Tr(rho^j), j = 1..k.
class PolynomialFunctional {
 public:
  explicit PolynomialFunctional(std::vector<double> coefficients);

  int degree() const { return static_cast<int>(coefficients_.size()); }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double l1_norm() const { return l1_norm_; }
  // lambda_j = |alpha_j| / ||f||_1 (all zero when ||f||_1 = 0).
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<int>& sign_vector() const { return signs_; }
  // True when sum_j sgn(alpha_j) < 0: the circuit then estimates -f and the
  // classical side flips the result back.
  bool majority_negative() const { return majority_negative_; }

  // Gray labels |i-1> whose branches need a CZ under the majority rule.
  std::vector<int> negative_basis() const;

  double evaluate(const std::vector<double>& moments_2_to_k) const;

 private:
  std::vector<double> coefficients_;
  std::vector<double> weights_;
  std::vector<int> signs_;
  double l1_norm_ = 0.0;
  bool majority_negative_ = false;
};

// Binary-reflected Gray code.
std::uint32_t gray_code(std::uint32_t i);
std::string gray_code_string(std::uint32_t i, int width);
int gray_register_width(int k);  // ceil(log2 k), 0 for k = 1

struct GivensRotation {
  int target_bit;
  std::vector<sim::ControlBit> controls;  // bit index within the register
  double angle;
};

struct GivensLadder {
  int width = 0;
  std::vector<GivensRotation> rotations;   // at most k-1
  std::vector<std::uint32_t> gray_labels;  // g(0)..g(k-1)
  std::vector<double> cumulative;          // Lambda_1..Lambda_k
};

// Rotations mapping |0...0> to sum_i sqrt(lambda_i) |g(i-1)>. Throws when
// ||f||_1 = 0. A zero trailing tail ends the ladder early; a zero lambda_j
// mid-sequence yields angle pi (rotate fully past).
GivensLadder build_givens_ladder(const PolynomialFunctional& f);

// Applies the ladder to |0...0> on a width-qubit register (test hook).
std::vector<sim::Complex> ladder_state(const GivensLadder& ladder);

// The 2m + ceil(log2 k) + 1 qubit circuit whose ancilla X expectation is
// sum_i s_i lambda_i Tr(rho^i), with s_i = -1 on the negative basis.
sim::Circuit build_qsf_circuit(const PolynomialFunctional& f,
                               std::shared_ptr<const sim::MixedState> rho);

struct FunctionalEstimate {
  double value = 0.0;
  double stderr = 0.0;
  std::int64_t shots = 0;
};

// ||f||_1 * mean(x), flipped when the majority flag is set; degree-1
// functionals short-circuit to the constant alpha_1.
FunctionalEstimate estimate_functional(std::shared_ptr<const sim::MixedState> rho,
                                       const PolynomialFunctional& f,
                                       std::int64_t shots, std::uint64_t seed,
                                       int threads = 1);

// alpha_1 + sum_{j>=2} alpha_j p_j from an existing moment run; error_bound
// (optional out) receives sum |alpha_j| stderr_j.
double functional_from_moments(const moments::MomentEstimates& est,
                               const PolynomialFunctional& f,
                               double* error_bound = nullptr);

enum class MultiStrategy { kMomentReuse, kParallelCircuit };

// Shared circuit for several functionals: one pair of state registers, one
// (ancilla, control register) block per functional, CSWAPs interleaved on the
// shared fresh copy of each round.
sim::Circuit build_parallel_circuit(
    const std::vector<PolynomialFunctional>& fs,
    std::shared_ptr<const sim::MixedState> rho);

std::vector<FunctionalEstimate> estimate_multiple_functionals(
    std::shared_ptr<const sim::MixedState> rho,
    const std::vector<PolynomialFunctional>& fs, std::int64_t shots,
    std::uint64_t seed, MultiStrategy strategy, int threads = 1);

}  // namespace qsm::qsf
