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
#include <string>
#include <variant>
#include <vector>

#include "qsm/state.hpp"

namespace qsm::sim {

// A control wire together with the required condition bit.
struct ControlBit {
  int qubit = 0;
  bool value = true;
};

struct Hadamard {
  int qubit;
};

struct RotationY {
  int qubit;
  double angle;  // radians
};

struct ControlledNot {
  int control;
  int target;
};

struct ControlledZ {
  std::vector<ControlBit> controls;
  int target;
};

struct MultiControlledRotationY {
  std::vector<ControlBit> controls;
  int target;
  double angle;
};

// Swaps register_a with register_b (pairwise by position) when every control
// matches its condition bit.
struct ControlledSwap {
  std::vector<ControlBit> controls;
  std::vector<int> register_a;
  std::vector<int> register_b;
};

// Dense unitary on `targets` (first listed qubit = least significant bit of
// the block index), applied when all controls match.
struct ControlledUnitary {
  std::vector<ControlBit> controls;
  std::vector<int> targets;
  Matrix matrix;
};

struct MeasureX {
  int qubit;
  int slot;
};

struct MeasureZ {
  int qubit;
  int slot;
};

// Projective +/-1 measurement of a Pauli string; character i of `paulis`
// acts on qubits[i].
struct MeasurePauliString {
  std::string paulis;  // over {I, X, Y, Z}
  std::vector<int> qubits;
  int slot;
};

// Importance-sampled Pauli measurement: per shot, draws term t with
// probability weight[t] / sum(weight), measures strings[t] projectively and
// records the outcome together with (term index, sign) metadata.
struct MeasureSampledPauli {
  std::vector<std::string> strings;
  std::vector<double> weight_cdf;  // cumulative |alpha_p|
  std::vector<std::int8_t> signs;  // sgn(alpha_p)
  std::vector<int> qubits;
  int slot;
};

struct ResetToZero {
  std::vector<int> qubits;
};

// Writes a sampled eigenstate of the registered MixedState into `qubits`,
// which must currently be in |0...0>.
struct PrepareMixed {
  std::vector<int> qubits;
  int state_id;
};

using Instruction =
    std::variant<Hadamard, RotationY, ControlledNot, ControlledZ,
                 MultiControlledRotationY, ControlledSwap, ControlledUnitary,
                 MeasureX, MeasureZ, MeasurePauliString, MeasureSampledPauli,
                 ResetToZero, PrepareMixed>;

struct ShotRecord {
  std::vector<std::int8_t> outcomes;  // one of {+1, -1} per record slot
  int sampled_term = -1;              // MeasureSampledPauli metadata
  std::int8_t sampled_sign = 0;
};

class Circuit {
 public:
  Circuit(int num_qubits, int num_slots)
      : num_qubits_(num_qubits), num_slots_(num_slots) {}

  int num_qubits() const { return num_qubits_; }
  int num_slots() const { return num_slots_; }
  const std::vector<Instruction>& instructions() const { return ops_; }

  void append(Instruction op) { ops_.push_back(std::move(op)); }

  // Registers a state and returns its id for PrepareMixed.
  int add_state(std::shared_ptr<const MixedState> state) {
    states_.push_back(std::move(state));
    return static_cast<int>(states_.size()) - 1;
  }
  const MixedState& state(int id) const { return *states_.at(id); }
  std::size_t state_count() const { return states_.size(); }

  // Structural invariants: indices in range, swap registers aligned and
  // disjoint, each record slot written exactly once, PrepareMixed arity.
  // Throws ConfigError on the first violation.
  void validate() const;

  template <class T>
  int count() const {
    int n = 0;
    for (const auto& op : ops_)
      if (std::holds_alternative<T>(op)) ++n;
    return n;
  }

 private:
  int num_qubits_;
  int num_slots_;
  std::vector<Instruction> ops_;
  std::vector<std::shared_ptr<const MixedState>> states_;
};

}  // namespace qsm::sim
