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

#include "qsm/statevector.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "qsm/errors.hpp"

namespace qsm::sim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::atomic<int> g_qubit_cap{0};

int read_cap_from_env() {
  if (const char* env = std::getenv("MOMENT_SPEC_MAX_QUBITS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 14;
}

std::uint64_t gather_bits(std::uint64_t index, const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (std::size_t r = 0; r < qubits.size(); ++r) {
    out |= ((index >> qubits[r]) & 1ULL) << r;
  }
  return out;
}

std::uint64_t scatter_bits(std::uint64_t packed, const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (std::size_t r = 0; r < qubits.size(); ++r) {
    out |= ((packed >> r) & 1ULL) << qubits[r];
  }
  return out;
}

std::uint64_t qubit_list_mask(const std::vector<int>& qubits) {
  std::uint64_t m = 0;
  for (int q : qubits) m |= 1ULL << q;
  return m;
}

}  // namespace

int qubit_cap() {
  int cap = g_qubit_cap.load(std::memory_order_relaxed);
  if (cap == 0) {
    cap = read_cap_from_env();
    g_qubit_cap.store(cap, std::memory_order_relaxed);
  }
  return cap;
}

void set_qubit_cap(int cap) { g_qubit_cap.store(cap, std::memory_order_relaxed); }

Statevector::Statevector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1) throw ConfigError("statevector needs at least one qubit");
  if (num_qubits > qubit_cap()) {
    throw BudgetError("circuit needs " + std::to_string(num_qubits) +
                      " qubits, cap is " + std::to_string(qubit_cap()));
  }
  amp_.assign(std::size_t{1} << n_, Complex(0.0, 0.0));
  amp_[0] = 1.0;
}

std::uint64_t Statevector::control_mask(const std::vector<ControlBit>& controls,
                                        std::uint64_t& value) const {
  std::uint64_t mask = 0;
  value = 0;
  for (const auto& cb : controls) {
    mask |= 1ULL << cb.qubit;
    if (cb.value) value |= 1ULL << cb.qubit;
  }
  return mask;
}

void Statevector::apply_hadamard(int q) {
  const std::uint64_t step = 1ULL << q;
  const std::uint64_t size = amp_.size();
  for (std::uint64_t base = 0; base < size; base += 2 * step) {
    for (std::uint64_t i = base; i < base + step; ++i) {
      const Complex a = amp_[i];
      const Complex b = amp_[i + step];
      amp_[i] = (a + b) * kInvSqrt2;
      amp_[i + step] = (a - b) * kInvSqrt2;
    }
  }
}

void Statevector::apply_ry(int q, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::uint64_t step = 1ULL << q;
  const std::uint64_t size = amp_.size();
  for (std::uint64_t base = 0; base < size; base += 2 * step) {
    for (std::uint64_t i = base; i < base + step; ++i) {
      const Complex a = amp_[i];
      const Complex b = amp_[i + step];
      amp_[i] = c * a - s * b;
      amp_[i + step] = s * a + c * b;
    }
  }
}

void Statevector::apply_cnot(int control, int target) {
  const std::uint64_t cbit = 1ULL << control;
  const std::uint64_t tbit = 1ULL << target;
  const std::uint64_t size = amp_.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amp_[i], amp_[i | tbit]);
  }
}

void Statevector::apply_cz(const std::vector<ControlBit>& controls, int target) {
  std::uint64_t cval = 0;
  const std::uint64_t cmask = control_mask(controls, cval);
  const std::uint64_t tbit = 1ULL << target;
  const std::uint64_t size = amp_.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & cmask) == cval && (i & tbit)) amp_[i] = -amp_[i];
  }
}

void Statevector::apply_mcry(const std::vector<ControlBit>& controls, int target,
                             double angle) {
  std::uint64_t cval = 0;
  const std::uint64_t cmask = control_mask(controls, cval);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::uint64_t tbit = 1ULL << target;
  const std::uint64_t size = amp_.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & cmask) == cval && !(i & tbit)) {
      const Complex a = amp_[i];
      const Complex b = amp_[i | tbit];
      amp_[i] = c * a - s * b;
      amp_[i | tbit] = s * a + c * b;
    }
  }
}

void Statevector::apply_cswap(const std::vector<ControlBit>& controls,
                              const std::vector<int>& reg_a,
                              const std::vector<int>& reg_b) {
  std::uint64_t cval = 0;
  const std::uint64_t cmask = control_mask(controls, cval);
  const std::uint64_t size = amp_.size();
  const std::size_t pairs = reg_a.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & cmask) != cval) continue;
    std::uint64_t j = i;
    for (std::size_t p = 0; p < pairs; ++p) {
      const std::uint64_t ba = (i >> reg_a[p]) & 1ULL;
      const std::uint64_t bb = (i >> reg_b[p]) & 1ULL;
      if (ba != bb) j ^= (1ULL << reg_a[p]) | (1ULL << reg_b[p]);
    }
    if (j > i) std::swap(amp_[i], amp_[j]);
  }
}

void Statevector::apply_controlled_unitary(const std::vector<ControlBit>& controls,
                                           const std::vector<int>& targets,
                                           const Matrix& u) {
  std::uint64_t cval = 0;
  const std::uint64_t cmask = control_mask(controls, cval);
  const std::uint64_t tmask = qubit_list_mask(targets);
  const std::uint64_t dim = 1ULL << targets.size();
  std::vector<std::uint64_t> offset(dim);
  for (std::uint64_t p = 0; p < dim; ++p) offset[p] = scatter_bits(p, targets);

  std::vector<Complex> in(dim), out(dim);
  const std::uint64_t size = amp_.size();
  for (std::uint64_t base = 0; base < size; ++base) {
    if ((base & tmask) != 0 || (base & cmask) != cval) continue;
    for (std::uint64_t p = 0; p < dim; ++p) in[p] = amp_[base | offset[p]];
    for (std::uint64_t r = 0; r < dim; ++r) {
      Complex acc(0.0, 0.0);
      for (std::uint64_t p = 0; p < dim; ++p) acc += u(r, p) * in[p];
      out[r] = acc;
    }
    for (std::uint64_t p = 0; p < dim; ++p) amp_[base | offset[p]] = out[p];
  }
}

double Statevector::probability_of_bit(int q) const {
  const std::uint64_t bit = 1ULL << q;
  double p1 = 0.0;
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) p1 += std::norm(amp_[i]);
  }
  return p1;
}

int Statevector::measure_z(int q, ShotRng& rng) {
  const double p1 = probability_of_bit(q);
  const int outcome = rng.uniform() < p1 ? 1 : 0;
  const double p = outcome ? p1 : 1.0 - p1;
  const double scale = 1.0 / std::sqrt(std::max(p, 1e-300));
  const std::uint64_t bit = 1ULL << q;
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    if (((i & bit) != 0) == (outcome != 0)) {
      amp_[i] *= scale;
    } else {
      amp_[i] = Complex(0.0, 0.0);
    }
  }
  return outcome;
}

int Statevector::measure_x_signed(int q, ShotRng& rng) {
  apply_hadamard(q);
  return measure_z(q, rng) == 0 ? 1 : -1;
}

int Statevector::measure_pauli(const std::string& paulis,
                               const std::vector<int>& qubits, ShotRng& rng) {
  // phi = P|psi>: X/Y flip the bit, Y and Z contribute phases.
  std::uint64_t flip = 0;
  std::uint64_t ymask = 0;
  std::uint64_t zmask = 0;
  int y_count = 0;
  for (std::size_t c = 0; c < paulis.size(); ++c) {
    const std::uint64_t bit = 1ULL << qubits[c];
    switch (paulis[c]) {
      case 'X':
        flip |= bit;
        break;
      case 'Y':
        flip |= bit;
        ymask |= bit;
        ++y_count;
        break;
      case 'Z':
        zmask |= bit;
        break;
      default:
        break;
    }
  }
  const Complex i_pow[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                            Complex(0, -1)};
  const Complex base_phase = i_pow[y_count & 3];

  scratch_.assign(amp_.size(), Complex(0.0, 0.0));
  double expectation = 0.0;
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    const int minus = (std::popcount(i & ymask) + std::popcount(i & zmask)) & 1;
    Complex phase = base_phase;
    if (minus) phase = -phase;
    const std::uint64_t j = i ^ flip;
    scratch_[j] = phase * amp_[i];
  }
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    expectation += (std::conj(amp_[i]) * scratch_[i]).real();
  }

  const double p_plus = std::clamp((1.0 + expectation) / 2.0, 0.0, 1.0);
  const int m = rng.uniform() < p_plus ? 1 : -1;
  const double p = m > 0 ? p_plus : 1.0 - p_plus;
  const double scale = 0.5 / std::sqrt(std::max(p, 1e-300));
  const double sgn = static_cast<double>(m);
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    amp_[i] = (amp_[i] + sgn * scratch_[i]) * scale;
  }
  return m;
}

void Statevector::reset_to_zero(const std::vector<int>& qubits, ShotRng& rng) {
  const std::uint64_t gmask = qubit_list_mask(qubits);
  const std::uint64_t groups = 1ULL << qubits.size();
  std::vector<double> prob(groups, 0.0);
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    prob[gather_bits(i, qubits)] += std::norm(amp_[i]);
  }
  double total = 0.0;
  for (double p : prob) total += p;
  const double u = rng.uniform() * total;
  std::uint64_t outcome = 0;
  double acc = 0.0;
  for (std::uint64_t g = 0; g < groups; ++g) {
    acc += prob[g];
    if (u < acc || g + 1 == groups) {
      outcome = g;
      break;
    }
  }
  const double scale = 1.0 / std::sqrt(std::max(prob[outcome], 1e-300));
  if (outcome != 0) {
    const std::uint64_t shift = scatter_bits(outcome, qubits);
    for (std::uint64_t i = 0; i < amp_.size(); ++i) {
      if ((i & gmask) == 0) amp_[i] = amp_[i | shift] * scale;
    }
  } else {
    for (std::uint64_t i = 0; i < amp_.size(); ++i) {
      if ((i & gmask) == 0) amp_[i] *= scale;
    }
  }
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    if ((i & gmask) != 0) amp_[i] = Complex(0.0, 0.0);
  }
}

void Statevector::prepare_mixed(const std::vector<int>& qubits,
                                const MixedState& state, ShotRng& rng) {
  const std::uint64_t gmask = qubit_list_mask(qubits);
  double stray = 0.0;
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    if ((i & gmask) != 0) stray += std::norm(amp_[i]);
  }
  if (stray > 1e-9) {
    throw ConfigError("PrepareMixed target qubits are not in |0...0>");
  }

  const std::size_t eig = rng.sample_cdf(state.eigenvalue_cdf());
  const auto& vecs = state.eigenvectors();
  const std::uint64_t dim = 1ULL << qubits.size();
  std::vector<std::uint64_t> offset(dim);
  for (std::uint64_t p = 0; p < dim; ++p) offset[p] = scatter_bits(p, qubits);

  for (std::uint64_t base = 0; base < amp_.size(); ++base) {
    if ((base & gmask) != 0) continue;
    const Complex a = amp_[base];
    for (std::uint64_t p = 0; p < dim; ++p) {
      amp_[base | offset[p]] = a * vecs(static_cast<Eigen::Index>(p),
                                        static_cast<Eigen::Index>(eig));
    }
  }
}

namespace {

struct ShotVisitor {
  Statevector& sv;
  const Circuit& circuit;
  ShotRng& rng;
  ShotRecord& record;
  std::vector<bool> written;

  void record_outcome(int slot, int value) {
    if (written[static_cast<std::size_t>(slot)]) {
      throw ConfigError("record slot overwritten within a shot");
    }
    written[static_cast<std::size_t>(slot)] = true;
    record.outcomes[static_cast<std::size_t>(slot)] =
        static_cast<std::int8_t>(value);
  }

  void operator()(const Hadamard& g) { sv.apply_hadamard(g.qubit); }
  void operator()(const RotationY& g) { sv.apply_ry(g.qubit, g.angle); }
  void operator()(const ControlledNot& g) { sv.apply_cnot(g.control, g.target); }
  void operator()(const ControlledZ& g) { sv.apply_cz(g.controls, g.target); }
  void operator()(const MultiControlledRotationY& g) {
    sv.apply_mcry(g.controls, g.target, g.angle);
  }
  void operator()(const ControlledSwap& g) {
    sv.apply_cswap(g.controls, g.register_a, g.register_b);
  }
  void operator()(const ControlledUnitary& g) {
    sv.apply_controlled_unitary(g.controls, g.targets, g.matrix);
  }
  void operator()(const MeasureX& g) {
    record_outcome(g.slot, sv.measure_x_signed(g.qubit, rng));
  }
  void operator()(const MeasureZ& g) {
    record_outcome(g.slot, sv.measure_z(g.qubit, rng) == 0 ? 1 : -1);
  }
  void operator()(const MeasurePauliString& g) {
    record_outcome(g.slot, sv.measure_pauli(g.paulis, g.qubits, rng));
  }
  void operator()(const MeasureSampledPauli& g) {
    const std::size_t term = rng.sample_cdf(g.weight_cdf);
    record.sampled_term = static_cast<int>(term);
    record.sampled_sign = g.signs[term];
    record_outcome(g.slot, sv.measure_pauli(g.strings[term], g.qubits, rng));
  }
  void operator()(const ResetToZero& g) { sv.reset_to_zero(g.qubits, rng); }
  void operator()(const PrepareMixed& g) {
    sv.prepare_mixed(g.qubits, circuit.state(g.state_id), rng);
  }
};

}  // namespace

ShotRecord run_shot(const Circuit& circuit, ShotRng& rng) {
  Statevector sv(circuit.num_qubits());
  ShotRecord record;
  record.outcomes.assign(static_cast<std::size_t>(circuit.num_slots()), 0);
  ShotVisitor visitor{sv, circuit, rng, record,
                      std::vector<bool>(static_cast<std::size_t>(circuit.num_slots()), false)};
  for (const auto& op : circuit.instructions()) std::visit(visitor, op);
  return record;
}

}  // namespace qsm::sim
