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

#include "qsm/qsf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "qsm/errors.hpp"
#include "qsm/parallel.hpp"
#include "qsm/statevector.hpp"

namespace qsm::qsf {

PolynomialFunctional::PolynomialFunctional(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw ConfigError("functional needs coefficients");
  int sign_sum = 0;
  for (double a : coefficients_) {
    l1_norm_ += std::abs(a);
    signs_.push_back(a > 0 ? 1 : (a < 0 ? -1 : 0));
    sign_sum += signs_.back();
  }
  majority_negative_ = sign_sum < 0;
  weights_.resize(coefficients_.size(), 0.0);
  if (l1_norm_ > 0.0) {
    for (std::size_t j = 0; j < coefficients_.size(); ++j) {
      weights_[j] = std::abs(coefficients_[j]) / l1_norm_;
    }
  }
}

std::vector<int> PolynomialFunctional::negative_basis() const {
  std::vector<int> basis;
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    const bool flip = majority_negative_ ? signs_[i] > 0 : signs_[i] < 0;
    if (flip) basis.push_back(static_cast<int>(i));  // Gray label g(i) = |i+1-1>
  }
  return basis;
}

double PolynomialFunctional::evaluate(const std::vector<double>& moments_2_to_k) const {
  double value = coefficients_[0];  // Tr(rho) = 1
  for (std::size_t j = 1; j < coefficients_.size(); ++j) {
    value += coefficients_[j] * moments_2_to_k.at(j - 1);
  }
  return value;
}

std::uint32_t gray_code(std::uint32_t i) { return i ^ (i >> 1); }

std::string gray_code_string(std::uint32_t i, int width) {
  const std::uint32_t g = gray_code(i);
  std::string out(static_cast<std::size_t>(width), '0');
  for (int b = 0; b < width; ++b) {
    if ((g >> b) & 1u) out[static_cast<std::size_t>(width - 1 - b)] = '1';
  }
  return out;
}

int gray_register_width(int k) {
  if (k < 1) throw ConfigError("functional degree must be >= 1");
  int w = 0;
  while ((1 << w) < k) ++w;
  return w;
}

GivensLadder build_givens_ladder(const PolynomialFunctional& f) {
  if (!(f.l1_norm() > 0.0)) {
    throw ConfigError("functional with zero l1 norm has no ladder");
  }
  const int k = f.degree();
  const auto& lambda = f.weights();

  GivensLadder ladder;
  ladder.width = gray_register_width(k);
  ladder.gray_labels.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    ladder.gray_labels[static_cast<std::size_t>(i)] =
        gray_code(static_cast<std::uint32_t>(i));
  }
  ladder.cumulative.resize(static_cast<std::size_t>(k));
  double tail = 0.0;
  for (int j = k - 1; j >= 0; --j) {
    tail += lambda[static_cast<std::size_t>(j)];
    ladder.cumulative[static_cast<std::size_t>(j)] = tail;
  }

  for (int j = 1; j <= k - 1; ++j) {
    const double big = ladder.cumulative[static_cast<std::size_t>(j - 1)];
    if (big <= 1e-15) break;  // all remaining weight is zero
    const double ratio =
        std::clamp(lambda[static_cast<std::size_t>(j - 1)] / big, 0.0, 1.0);
    const std::uint32_t from = ladder.gray_labels[static_cast<std::size_t>(j - 1)];
    const std::uint32_t to = ladder.gray_labels[static_cast<std::size_t>(j)];
    const std::uint32_t diff = from ^ to;
    const int target = std::countr_zero(diff);
    GivensRotation rot;
    rot.target_bit = target;
    rot.angle = 2.0 * std::acos(std::sqrt(ratio));
    for (int b = 0; b < ladder.width; ++b) {
      if (b == target) continue;
      rot.controls.push_back({b, ((to >> b) & 1u) != 0});
    }
    ladder.rotations.push_back(std::move(rot));
  }
  return ladder;
}

std::vector<sim::Complex> ladder_state(const GivensLadder& ladder) {
  const int width = std::max(1, ladder.width);
  sim::Statevector sv(width);
  for (const auto& rot : ladder.rotations) {
    sv.apply_mcry(rot.controls, rot.target_bit, rot.angle);
  }
  return sv.amplitudes();
}

namespace {

std::vector<sim::ControlBit> register_condition(std::uint32_t label,
                                                const std::vector<int>& reg) {
  std::vector<sim::ControlBit> controls;
  for (std::size_t b = 0; b < reg.size(); ++b) {
    controls.push_back({reg[b], ((label >> b) & 1u) != 0});
  }
  return controls;
}

// Round-j ladder rotation, remapped onto the functional's control register.
void append_rotation(sim::Circuit& c, const GivensLadder& ladder,
                     const std::vector<int>& control_reg, int j) {
  if (j > static_cast<int>(ladder.rotations.size())) return;
  const auto& rot = ladder.rotations[static_cast<std::size_t>(j - 1)];
  std::vector<sim::ControlBit> controls;
  for (const auto& cb : rot.controls) {
    controls.push_back({control_reg[static_cast<std::size_t>(cb.qubit)], cb.value});
  }
  const int target = control_reg[static_cast<std::size_t>(rot.target_bit)];
  if (controls.empty()) {
    c.append(sim::RotationY{target, rot.angle});
  } else {
    c.append(sim::MultiControlledRotationY{std::move(controls), target, rot.angle});
  }
}

// CSWAP active when the ancilla is |1> and the control register reads g(j).
void append_swap(sim::Circuit& c, const GivensLadder& ladder,
                 const std::vector<int>& control_reg, int ancilla, int j,
                 const std::vector<int>& reg_one, const std::vector<int>& reg_two) {
  std::vector<sim::ControlBit> swap_controls = register_condition(
      ladder.gray_labels[static_cast<std::size_t>(j)], control_reg);
  swap_controls.push_back({ancilla, true});
  c.append(sim::ControlledSwap{std::move(swap_controls), reg_one, reg_two});
}

void append_sign_flips(sim::Circuit& c, const PolynomialFunctional& f,
                       const GivensLadder& ladder,
                       const std::vector<int>& control_reg, int ancilla) {
  for (int i : f.negative_basis()) {
    c.append(sim::ControlledZ{
        register_condition(ladder.gray_labels[static_cast<std::size_t>(i)],
                           control_reg),
        ancilla});
  }
}

}  // namespace

sim::Circuit build_qsf_circuit(const PolynomialFunctional& f,
                               std::shared_ptr<const sim::MixedState> rho) {
  const int k = f.degree();
  const int m = rho->qubits();
  const int width = gray_register_width(k);
  const int ancilla = 2 * m + width;

  sim::Circuit c(2 * m + width + 1, 1);
  const int state = c.add_state(std::move(rho));
  std::vector<int> reg_one(static_cast<std::size_t>(m));
  std::vector<int> reg_two(static_cast<std::size_t>(m));
  std::iota(reg_one.begin(), reg_one.end(), 0);
  std::iota(reg_two.begin(), reg_two.end(), m);
  std::vector<int> control_reg(static_cast<std::size_t>(width));
  std::iota(control_reg.begin(), control_reg.end(), 2 * m);

  c.append(sim::PrepareMixed{reg_one, state});
  c.append(sim::Hadamard{ancilla});
  if (k >= 2) {
    const GivensLadder ladder = build_givens_ladder(f);
    for (int j = 1; j <= k - 1; ++j) {
      append_rotation(c, ladder, control_reg, j);
      if (j > 1) c.append(sim::ResetToZero{reg_two});
      c.append(sim::PrepareMixed{reg_two, state});
      append_swap(c, ladder, control_reg, ancilla, j, reg_one, reg_two);
    }
    append_sign_flips(c, f, ladder, control_reg, ancilla);
  }
  // Degree-1 functionals have no swap and no CZ; a lone negative coefficient
  // is handled by the classical majority flip.
  c.append(sim::MeasureX{ancilla, 0});
  c.validate();
  return c;
}

FunctionalEstimate estimate_functional(std::shared_ptr<const sim::MixedState> rho,
                                       const PolynomialFunctional& f,
                                       std::int64_t shots, std::uint64_t seed,
                                       int threads) {
  FunctionalEstimate out;
  if (f.l1_norm() == 0.0) return out;
  if (f.degree() == 1) {
    out.value = f.coefficients()[0];
    return out;
  }
  if (shots < 1) throw ConfigError("shot count must be >= 1");

  const sim::Circuit circuit = build_qsf_circuit(f, std::move(rho));
  struct Acc {
    std::int64_t sum = 0;
  };
  const auto acc = parallel_chunked<Acc>(
      shots, threads,
      [&](std::int64_t first, std::int64_t last, Acc& a) {
        for (std::int64_t s = first; s < last; ++s) {
          ShotRng rng = shot_stream(seed, static_cast<std::uint64_t>(s));
          const sim::ShotRecord rec = sim::run_shot(circuit, rng);
          a.sum += rec.outcomes[0];
        }
      },
      [](Acc& total, const Acc& part) { total.sum += part.sum; });

  const double mean = static_cast<double>(acc.sum) / static_cast<double>(shots);
  const double sign = f.majority_negative() ? -1.0 : 1.0;
  out.value = sign * f.l1_norm() * mean;
  out.stderr = f.l1_norm() *
               std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(shots));
  out.shots = shots;
  return out;
}

double functional_from_moments(const moments::MomentEstimates& est,
                               const PolynomialFunctional& f, double* error_bound) {
  if (f.degree() > est.k) {
    throw ConfigError("functional degree exceeds the estimated moment order");
  }
  double value = f.coefficients()[0];
  double bound = 0.0;
  for (int j = 2; j <= f.degree(); ++j) {
    const double alpha = f.coefficients()[static_cast<std::size_t>(j - 1)];
    value += alpha * est.estimates[static_cast<std::size_t>(j - 2)];
    bound += std::abs(alpha) * est.stderrs[static_cast<std::size_t>(j - 2)];
  }
  if (error_bound != nullptr) *error_bound = bound;
  return value;
}

sim::Circuit build_parallel_circuit(const std::vector<PolynomialFunctional>& fs,
                                    std::shared_ptr<const sim::MixedState> rho) {
  if (fs.empty()) throw ConfigError("no functionals given");
  const int m = rho->qubits();
  int max_k = 1;
  for (const auto& f : fs) max_k = std::max(max_k, f.degree());

  int total = 2 * m;
  std::vector<std::vector<int>> control_regs;
  std::vector<int> ancillas;
  for (const auto& f : fs) {
    const int width = gray_register_width(f.degree());
    std::vector<int> reg(static_cast<std::size_t>(width));
    std::iota(reg.begin(), reg.end(), total);
    control_regs.push_back(std::move(reg));
    total += width;
    ancillas.push_back(total);
    total += 1;
  }
  if (total > sim::qubit_cap()) {
    throw BudgetError(
        "parallel-circuit strategy exceeds the qubit cap; use moment-reuse");
  }

  sim::Circuit c(total, static_cast<int>(fs.size()));
  const int state = c.add_state(std::move(rho));
  std::vector<int> reg_one(static_cast<std::size_t>(m));
  std::vector<int> reg_two(static_cast<std::size_t>(m));
  std::iota(reg_one.begin(), reg_one.end(), 0);
  std::iota(reg_two.begin(), reg_two.end(), m);

  std::vector<GivensLadder> ladders;
  for (const auto& f : fs) {
    ladders.push_back(f.l1_norm() > 0.0 && f.degree() >= 2 ? build_givens_ladder(f)
                                                           : GivensLadder{});
  }

  c.append(sim::PrepareMixed{reg_one, state});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    c.append(sim::Hadamard{ancillas[i]});
  }
  for (int j = 1; j <= max_k - 1; ++j) {
    bool fresh_copy_added = false;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (fs[i].degree() < j + 1 || fs[i].l1_norm() == 0.0) continue;
      if (!fresh_copy_added) {
        if (j > 1) c.append(sim::ResetToZero{reg_two});
        c.append(sim::PrepareMixed{reg_two, state});
        fresh_copy_added = true;
      }
      append_rotation(c, ladders[i], control_regs[i], j);
      append_swap(c, ladders[i], control_regs[i], ancillas[i], j, reg_one, reg_two);
    }
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].degree() >= 2 && fs[i].l1_norm() > 0.0) {
      append_sign_flips(c, fs[i], ladders[i], control_regs[i], ancillas[i]);
    }
    c.append(sim::MeasureX{ancillas[i], static_cast<int>(i)});
  }
  c.validate();
  return c;
}

std::vector<FunctionalEstimate> estimate_multiple_functionals(
    std::shared_ptr<const sim::MixedState> rho,
    const std::vector<PolynomialFunctional>& fs, std::int64_t shots,
    std::uint64_t seed, MultiStrategy strategy, int threads) {
  if (fs.empty()) return {};
  std::vector<FunctionalEstimate> out(fs.size());

  if (strategy == MultiStrategy::kMomentReuse) {
    int max_k = 1;
    for (const auto& f : fs) max_k = std::max(max_k, f.degree());
    if (max_k == 1) {
      for (std::size_t i = 0; i < fs.size(); ++i) {
        out[i].value = fs[i].coefficients()[0];
      }
      return out;
    }
    moments::MomentPlan plan;
    plan.k = max_k;
    plan.shots = shots;
    plan.seed = seed;
    const moments::MomentEstimates est = moments::estimate_moments(rho, plan, threads);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      double bound = 0.0;
      out[i].value = functional_from_moments(est, fs[i], &bound);
      out[i].stderr = bound;
      out[i].shots = shots;
    }
    return out;
  }

  const sim::Circuit circuit = build_parallel_circuit(fs, std::move(rho));
  struct Acc {
    std::vector<std::int64_t> sums;
  };
  const auto acc = parallel_chunked<Acc>(
      shots, threads,
      [&](std::int64_t first, std::int64_t last, Acc& a) {
        a.sums.assign(fs.size(), 0);
        for (std::int64_t s = first; s < last; ++s) {
          ShotRng rng = shot_stream(seed, static_cast<std::uint64_t>(s));
          const sim::ShotRecord rec = sim::run_shot(circuit, rng);
          for (std::size_t i = 0; i < fs.size(); ++i) {
            a.sums[i] += rec.outcomes[i];
          }
        }
      },
      [&](Acc& total, const Acc& part) {
        if (total.sums.empty()) total.sums.assign(fs.size(), 0);
        for (std::size_t i = 0; i < part.sums.size(); ++i)
          total.sums[i] += part.sums[i];
      });

  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].l1_norm() == 0.0) continue;
    if (fs[i].degree() == 1) {
      out[i].value = fs[i].coefficients()[0];
      continue;
    }
    const double mean =
        static_cast<double>(acc.sums[i]) / static_cast<double>(shots);
    const double sign = fs[i].majority_negative() ? -1.0 : 1.0;
    out[i].value = sign * fs[i].l1_norm() * mean;
    out[i].stderr =
        fs[i].l1_norm() *
        std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(shots));
    out[i].shots = shots;
  }
  return out;
}

}  // namespace qsm::qsf
