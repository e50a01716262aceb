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

#include "qsm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "qsm/errors.hpp"
#include "qsm/statevector.hpp"

namespace qsm::sim {

namespace {

using Triplet = Eigen::Triplet<Complex>;

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

void control_mask(const std::vector<ControlBit>& controls, std::uint64_t& mask,
                  std::uint64_t& value) {
  mask = 0;
  value = 0;
  for (const auto& cb : controls) {
    mask |= 1ULL << cb.qubit;
    if (cb.value) value |= 1ULL << cb.qubit;
  }
}

// Sparse Pauli-string operator (phase-permutation).
SparseGate pauli_operator(const std::string& paulis, const std::vector<int>& qubits,
                          int num_qubits) {
  const std::uint64_t d = 1ULL << num_qubits;
  std::uint64_t flip = 0, ymask = 0, zmask = 0;
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
  std::vector<Triplet> trips;
  trips.reserve(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    Complex phase = i_pow[y_count & 3];
    if ((std::popcount(i & ymask) + std::popcount(i & zmask)) & 1) phase = -phase;
    trips.emplace_back(static_cast<int>(i ^ flip), static_cast<int>(i), phase);
  }
  SparseGate p(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  p.setFromTriplets(trips.begin(), trips.end());
  return p;
}

struct GateBuilder {
  int n;
  std::uint64_t d() const { return 1ULL << n; }

  SparseGate from_triplets(std::vector<Triplet>& trips) const {
    SparseGate g(static_cast<Eigen::Index>(d()), static_cast<Eigen::Index>(d()));
    g.setFromTriplets(trips.begin(), trips.end());
    return g;
  }

  SparseGate single_qubit(int q, const Eigen::Matrix2cd& u) const {
    std::vector<Triplet> trips;
    trips.reserve(2 * d());
    const std::uint64_t bit = 1ULL << q;
    for (std::uint64_t i = 0; i < d(); ++i) {
      const int b = (i & bit) ? 1 : 0;
      for (int r = 0; r < 2; ++r) {
        const Complex v = u(r, b);
        if (v != Complex(0.0, 0.0)) {
          const std::uint64_t j = r ? (i | bit) : (i & ~bit);
          trips.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
        }
      }
    }
    return from_triplets(trips);
  }

  SparseGate operator()(const Hadamard& g) const {
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    h *= 0.70710678118654752440;
    return single_qubit(g.qubit, h);
  }
  SparseGate operator()(const RotationY& g) const {
    Eigen::Matrix2cd u;
    const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
    u << c, -s, s, c;
    return single_qubit(g.qubit, u);
  }
  SparseGate operator()(const ControlledNot& g) const {
    std::vector<Triplet> trips;
    trips.reserve(d());
    const std::uint64_t cbit = 1ULL << g.control, tbit = 1ULL << g.target;
    for (std::uint64_t i = 0; i < d(); ++i) {
      const std::uint64_t j = (i & cbit) ? (i ^ tbit) : i;
      trips.emplace_back(static_cast<int>(j), static_cast<int>(i), Complex(1, 0));
    }
    return from_triplets(trips);
  }
  SparseGate operator()(const ControlledZ& g) const {
    std::uint64_t cmask, cval;
    control_mask(g.controls, cmask, cval);
    const std::uint64_t tbit = 1ULL << g.target;
    std::vector<Triplet> trips;
    trips.reserve(d());
    for (std::uint64_t i = 0; i < d(); ++i) {
      const bool hit = ((i & cmask) == cval) && (i & tbit);
      trips.emplace_back(static_cast<int>(i), static_cast<int>(i),
                         hit ? Complex(-1, 0) : Complex(1, 0));
    }
    return from_triplets(trips);
  }
  SparseGate operator()(const MultiControlledRotationY& g) const {
    std::uint64_t cmask, cval;
    control_mask(g.controls, cmask, cval);
    const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
    const std::uint64_t tbit = 1ULL << g.target;
    std::vector<Triplet> trips;
    trips.reserve(2 * d());
    for (std::uint64_t i = 0; i < d(); ++i) {
      if ((i & cmask) != cval) {
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(1, 0));
        continue;
      }
      if (i & tbit) {
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(c, 0));
        trips.emplace_back(static_cast<int>(i & ~tbit), static_cast<int>(i),
                           Complex(-s, 0));
      } else {
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(c, 0));
        trips.emplace_back(static_cast<int>(i | tbit), static_cast<int>(i),
                           Complex(s, 0));
      }
    }
    return from_triplets(trips);
  }
  SparseGate operator()(const ControlledSwap& g) const {
    std::uint64_t cmask, cval;
    control_mask(g.controls, cmask, cval);
    std::vector<Triplet> trips;
    trips.reserve(d());
    for (std::uint64_t i = 0; i < d(); ++i) {
      std::uint64_t j = i;
      if ((i & cmask) == cval) {
        for (std::size_t p = 0; p < g.register_a.size(); ++p) {
          const std::uint64_t ba = (i >> g.register_a[p]) & 1ULL;
          const std::uint64_t bb = (i >> g.register_b[p]) & 1ULL;
          if (ba != bb) j ^= (1ULL << g.register_a[p]) | (1ULL << g.register_b[p]);
        }
      }
      trips.emplace_back(static_cast<int>(j), static_cast<int>(i), Complex(1, 0));
    }
    return from_triplets(trips);
  }
  SparseGate operator()(const ControlledUnitary& g) const {
    std::uint64_t cmask, cval;
    control_mask(g.controls, cmask, cval);
    const std::uint64_t tmask = qubit_list_mask(g.targets);
    const std::uint64_t dim = 1ULL << g.targets.size();
    std::vector<std::uint64_t> offset(dim);
    for (std::uint64_t p = 0; p < dim; ++p) offset[p] = scatter_bits(p, g.targets);
    std::vector<Triplet> trips;
    for (std::uint64_t i = 0; i < d(); ++i) {
      if ((i & cmask) != cval) {
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(1, 0));
        continue;
      }
      const std::uint64_t base = i & ~tmask;
      const std::uint64_t col = gather_bits(i, g.targets);
      for (std::uint64_t r = 0; r < dim; ++r) {
        const Complex v = g.matrix(static_cast<Eigen::Index>(r),
                                   static_cast<Eigen::Index>(col));
        if (v != Complex(0.0, 0.0)) {
          trips.emplace_back(static_cast<int>(base | offset[r]),
                             static_cast<int>(i), v);
        }
      }
    }
    return from_triplets(trips);
  }

  template <class T>
  SparseGate operator()(const T&) const {
    throw ConfigError("instruction has no unitary representation");
  }
};

class DensityEvolver {
 public:
  DensityEvolver(const Circuit& circuit, std::span<const int> slots)
      : circuit_(circuit), builder_{circuit.num_qubits()} {
    if (circuit.num_qubits() > qubit_cap()) {
      throw BudgetError("density-operator dimension exceeds the configured cap");
    }
    signed_.insert(slots.begin(), slots.end());
    const std::uint64_t d = 1ULL << circuit.num_qubits();
    rho_ = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    rho_(0, 0) = 1.0;
  }

  void set_initial(const Matrix& rho) { rho_ = rho; }

  void run() {
    for (const auto& op : circuit_.instructions()) std::visit(*this, op);
  }

  const Matrix& density() const { return rho_; }

  void operator()(const Hadamard& g) { unitary(builder_(g)); }
  void operator()(const RotationY& g) { unitary(builder_(g)); }
  void operator()(const ControlledNot& g) { unitary(builder_(g)); }
  void operator()(const ControlledZ& g) { unitary(builder_(g)); }
  void operator()(const MultiControlledRotationY& g) { unitary(builder_(g)); }
  void operator()(const ControlledSwap& g) { unitary(builder_(g)); }
  void operator()(const ControlledUnitary& g) { unitary(builder_(g)); }

  void operator()(const MeasureX& g) {
    unitary(builder_(Hadamard{g.qubit}));
    z_instrument(g.qubit, signed_.count(g.slot) > 0);
  }
  void operator()(const MeasureZ& g) {
    z_instrument(g.qubit, signed_.count(g.slot) > 0);
  }
  void operator()(const MeasurePauliString& g) {
    pauli_instrument(pauli_operator(g.paulis, g.qubits, circuit_.num_qubits()),
                     signed_.count(g.slot) > 0);
  }
  void operator()(const MeasureSampledPauli& g) {
    // Average of the per-term instruments under the sampling distribution;
    // the signed variant additionally weighs each term by its sign, so the
    // result matches E[sgn * outcome * ...].
    const bool is_signed = signed_.count(g.slot) > 0;
    const double total = g.weight_cdf.back();
    Matrix acc = Matrix::Zero(rho_.rows(), rho_.cols());
    double prev = 0.0;
    for (std::size_t t = 0; t < g.strings.size(); ++t) {
      const double prob = (g.weight_cdf[t] - prev) / total;
      prev = g.weight_cdf[t];
      const SparseGate p =
          pauli_operator(g.strings[t], g.qubits, circuit_.num_qubits());
      if (is_signed) {
        const double w = prob * static_cast<double>(g.signs[t]);
        acc += w * 0.5 * (p * rho_ + rho_ * p);
      } else {
        acc += prob * 0.5 * (rho_ + Matrix(p * rho_ * p));
      }
    }
    rho_ = acc;
  }

  void operator()(const ResetToZero& g) {
    const std::uint64_t d = 1ULL << circuit_.num_qubits();
    const std::uint64_t gmask = qubit_list_mask(g.qubits);
    const std::uint64_t groups = 1ULL << g.qubits.size();
    Matrix out = Matrix::Zero(rho_.rows(), rho_.cols());
    for (std::uint64_t b = 0; b < groups; ++b) {
      const std::uint64_t shift = scatter_bits(b, g.qubits);
      for (std::uint64_t i = 0; i < d; ++i) {
        if ((i & gmask) != 0) continue;
        for (std::uint64_t j = 0; j < d; ++j) {
          if ((j & gmask) != 0) continue;
          out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
              rho_(static_cast<Eigen::Index>(i | shift),
                   static_cast<Eigen::Index>(j | shift));
        }
      }
    }
    rho_ = std::move(out);
  }

  void operator()(const PrepareMixed& g) {
    const std::uint64_t d = 1ULL << circuit_.num_qubits();
    const std::uint64_t gmask = qubit_list_mask(g.qubits);
    double stray = 0.0;
    for (std::uint64_t i = 0; i < d; ++i) {
      if ((i & gmask) != 0) {
        stray += std::abs(rho_(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(i)));
      }
    }
    if (stray > 1e-9) {
      throw ConfigError("PrepareMixed target qubits are not in |0...0>");
    }
    const Matrix& rm = circuit_.state(g.state_id).matrix();
    const std::uint64_t dim = 1ULL << g.qubits.size();
    std::vector<std::uint64_t> offset(dim);
    for (std::uint64_t p = 0; p < dim; ++p) offset[p] = scatter_bits(p, g.qubits);
    Matrix out = Matrix::Zero(rho_.rows(), rho_.cols());
    for (std::uint64_t i = 0; i < d; ++i) {
      if ((i & gmask) != 0) continue;
      for (std::uint64_t j = 0; j < d; ++j) {
        if ((j & gmask) != 0) continue;
        const Complex base =
            rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (base == Complex(0.0, 0.0)) continue;
        for (std::uint64_t a = 0; a < dim; ++a) {
          for (std::uint64_t b = 0; b < dim; ++b) {
            out(static_cast<Eigen::Index>(i | offset[a]),
                static_cast<Eigen::Index>(j | offset[b])) +=
                base * rm(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
          }
        }
      }
    }
    rho_ = std::move(out);
  }

 private:
  void unitary(const SparseGate& g) { rho_ = g * rho_ * g.adjoint(); }

  void z_instrument(int q, bool is_signed) {
    const std::uint64_t d = 1ULL << circuit_.num_qubits();
    const std::uint64_t bit = 1ULL << q;
    for (std::uint64_t i = 0; i < d; ++i) {
      for (std::uint64_t j = 0; j < d; ++j) {
        const bool bi = (i & bit) != 0, bj = (j & bit) != 0;
        auto& entry =
            rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (bi != bj) {
          entry = Complex(0.0, 0.0);
        } else if (is_signed && bi) {
          entry = -entry;  // outcome |1> carries record value -1
        }
      }
    }
  }

  void pauli_instrument(const SparseGate& p, bool is_signed) {
    if (is_signed) {
      rho_ = 0.5 * (p * rho_ + rho_ * p);
    } else {
      rho_ = 0.5 * (rho_ + Matrix(p * rho_ * p));
    }
  }

  const Circuit& circuit_;
  GateBuilder builder_;
  std::set<int> signed_;
  Matrix rho_;
};

}  // namespace

SparseGate instruction_unitary(const Instruction& op, int num_qubits) {
  return std::visit(GateBuilder{num_qubits}, op);
}

double signed_expectation(const Circuit& circuit, std::span<const int> slots) {
  DensityEvolver ev(circuit, slots);
  ev.run();
  return ev.density().trace().real();
}

Matrix evolve_signed(const Circuit& circuit, std::span<const int> slots,
                     const Matrix* initial) {
  DensityEvolver ev(circuit, slots);
  if (initial != nullptr) ev.set_initial(*initial);
  ev.run();
  return ev.density();
}

double permutation_trace_check(const MixedState& rho, int k) {
  const int m = rho.qubits();
  if (k < 1) throw ConfigError("permutation order must be >= 1");
  if (k * m > 14) {
    throw BudgetError("k copies exceed the permutation-trace dimension cap");
  }
  const std::uint64_t dm = 1ULL << m;
  const std::uint64_t d = 1ULL << (k * m);
  const std::uint64_t group_mask = dm - 1;

  // Cyclic left shift on register contents: |a_1>|a_2>...|a_k> ->
  // |a_2>...|a_k>|a_1>, built explicitly as a permutation of basis indices.
  std::vector<std::uint64_t> perm(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    std::uint64_t out = 0;
    for (int g = 0; g < k; ++g) {
      const std::uint64_t a = (i >> (g * m)) & group_mask;
      const int dest = g == 0 ? k - 1 : g - 1;
      out |= a << (dest * m);
    }
    perm[i] = out;
  }

  // Tr(P M) = sum_j M(j, perm(j)); entries of M = rho^{tensor k} are
  // products of rho entries, evaluated directly.
  const Matrix& r = rho.matrix();
  Complex trace(0.0, 0.0);
  for (std::uint64_t row = 0; row < d; ++row) {
    const std::uint64_t col = perm[row];
    Complex v(1.0, 0.0);
    for (int g = 0; g < k; ++g) {
      const std::uint64_t a = (row >> (g * m)) & group_mask;
      const std::uint64_t b = (col >> (g * m)) & group_mask;
      v *= r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (v == Complex(0.0, 0.0)) break;
    }
    trace += v;
  }
  return trace.real();
}

}  // namespace qsm::sim
