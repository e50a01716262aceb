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

#include "qsm/circuit.hpp"

#include <set>

#include "qsm/errors.hpp"

namespace qsm::sim {

namespace {

struct Validator {
  const Circuit& c;
  std::vector<int> slot_writes;

  void qubit(int q) const {
    if (q < 0 || q >= c.num_qubits()) throw ConfigError("qubit index out of range");
  }
  void qubits(const std::vector<int>& qs) const {
    std::set<int> seen;
    for (int q : qs) {
      qubit(q);
      if (!seen.insert(q).second) throw ConfigError("duplicate qubit in list");
    }
  }
  void controls(const std::vector<ControlBit>& cs) const {
    std::set<int> seen;
    for (const auto& cb : cs) {
      qubit(cb.qubit);
      if (!seen.insert(cb.qubit).second) throw ConfigError("duplicate control qubit");
    }
  }
  void slot(int s) {
    if (s < 0 || s >= c.num_slots()) throw ConfigError("record slot out of range");
    ++slot_writes[static_cast<std::size_t>(s)];
  }

  void operator()(const Hadamard& g) const { qubit(g.qubit); }
  void operator()(const RotationY& g) const { qubit(g.qubit); }
  void operator()(const ControlledNot& g) const {
    qubit(g.control);
    qubit(g.target);
    if (g.control == g.target) throw ConfigError("control equals target");
  }
  void operator()(const ControlledZ& g) const {
    controls(g.controls);
    qubit(g.target);
    for (const auto& cb : g.controls)
      if (cb.qubit == g.target) throw ConfigError("control equals target");
  }
  void operator()(const MultiControlledRotationY& g) const {
    controls(g.controls);
    qubit(g.target);
    for (const auto& cb : g.controls)
      if (cb.qubit == g.target) throw ConfigError("control equals target");
  }
  void operator()(const ControlledSwap& g) const {
    controls(g.controls);
    if (g.register_a.size() != g.register_b.size()) {
      throw ConfigError("swap registers differ in length");
    }
    std::vector<int> all = g.register_a;
    all.insert(all.end(), g.register_b.begin(), g.register_b.end());
    qubits(all);  // also enforces disjointness
    for (const auto& cb : g.controls)
      for (int q : all)
        if (cb.qubit == q) throw ConfigError("swap register overlaps a control");
  }
  void operator()(const ControlledUnitary& g) const {
    controls(g.controls);
    qubits(g.targets);
    const Eigen::Index d = Eigen::Index{1} << g.targets.size();
    if (g.matrix.rows() != d || g.matrix.cols() != d) {
      throw ConfigError("controlled-unitary matrix does not match target count");
    }
  }
  void operator()(const MeasureX& g) {
    qubit(g.qubit);
    slot(g.slot);
  }
  void operator()(const MeasureZ& g) {
    qubit(g.qubit);
    slot(g.slot);
  }
  void operator()(const MeasurePauliString& g) {
    qubits(g.qubits);
    if (g.paulis.size() != g.qubits.size()) {
      throw ConfigError("pauli string length does not match qubit list");
    }
    for (char ch : g.paulis)
      if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
        throw ConfigError("pauli string contains an invalid character");
    slot(g.slot);
  }
  void operator()(const MeasureSampledPauli& g) {
    qubits(g.qubits);
    if (g.strings.empty() || g.strings.size() != g.weight_cdf.size() ||
        g.strings.size() != g.signs.size()) {
      throw ConfigError("sampled-pauli term table is inconsistent");
    }
    for (const auto& s : g.strings)
      if (s.size() != g.qubits.size())
        throw ConfigError("sampled-pauli string length does not match qubit list");
    slot(g.slot);
  }
  void operator()(const ResetToZero& g) const { qubits(g.qubits); }
  void operator()(const PrepareMixed& g) const {
    qubits(g.qubits);
    if (g.state_id < 0 || static_cast<std::size_t>(g.state_id) >= c.state_count()) {
      throw ConfigError("PrepareMixed references an unregistered state");
    }
    if (static_cast<int>(g.qubits.size()) != c.state(g.state_id).qubits()) {
      throw ConfigError("PrepareMixed target count does not match state size");
    }
  }
};

}  // namespace

void Circuit::validate() const {
  Validator v{*this, std::vector<int>(static_cast<std::size_t>(num_slots_), 0)};
  for (const auto& op : ops_) std::visit(v, op);
  for (int s = 0; s < num_slots_; ++s) {
    if (v.slot_writes[static_cast<std::size_t>(s)] != 1) {
      throw ConfigError("record slot " + std::to_string(s) +
                        " must be written exactly once per shot");
    }
  }
}

}  // namespace qsm::sim
