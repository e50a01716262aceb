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
#include "qsm/rng.hpp"
#include "qsm/state.hpp"

namespace qsm::sim {

// Simulator-wide qubit cap for explicit statevector / density allocations.
// Default 14; the MOMENT_SPEC_MAX_QUBITS environment variable overrides it.
int qubit_cap();
void set_qubit_cap(int cap);

// Statevector over `n` qubits with qubit q on bit q of the basis index.
// Measurements collapse the state and consume the shot's random stream.
class Statevector {
 public:
  explicit Statevector(int num_qubits);

  int num_qubits() const { return n_; }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  std::vector<Complex>& amplitudes() { return amp_; }
  PureState to_pure_state() const { return {n_, amp_}; }

  void apply_hadamard(int q);
  void apply_ry(int q, double angle);
  void apply_cnot(int control, int target);
  void apply_cz(const std::vector<ControlBit>& controls, int target);
  void apply_mcry(const std::vector<ControlBit>& controls, int target, double angle);
  void apply_cswap(const std::vector<ControlBit>& controls,
                   const std::vector<int>& reg_a, const std::vector<int>& reg_b);
  void apply_controlled_unitary(const std::vector<ControlBit>& controls,
                                const std::vector<int>& targets, const Matrix& u);

  // Z-basis measurement; returns 0 or 1 and collapses.
  int measure_z(int q, ShotRng& rng);
  // H then Z; returns the +/-1 record value.
  int measure_x_signed(int q, ShotRng& rng);
  // Projective +/-1 measurement of a Pauli string.
  int measure_pauli(const std::string& paulis, const std::vector<int>& qubits,
                    ShotRng& rng);

  // Measures the listed qubits jointly in the computational basis and maps
  // them to |0...0>; equivalent to per-qubit measure-and-flip.
  void reset_to_zero(const std::vector<int>& qubits, ShotRng& rng);

  // Samples an eigenstate of `state` (probability = eigenvalue) and writes it
  // into `qubits`, which must carry no population away from |0...0>.
  void prepare_mixed(const std::vector<int>& qubits, const MixedState& state,
                     ShotRng& rng);

  double probability_of_bit(int q) const;

 private:
  std::uint64_t control_mask(const std::vector<ControlBit>& controls,
                             std::uint64_t& value) const;

  int n_;
  std::vector<Complex> amp_;
  std::vector<Complex> scratch_;
};

// Executes the circuit once on |0...0> with the given per-shot stream.
ShotRecord run_shot(const Circuit& circuit, ShotRng& rng);

}  // namespace qsm::sim
