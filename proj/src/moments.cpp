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

#include "qsm/moments.hpp"

#include <cmath>
#include <numeric>

#include "qsm/errors.hpp"
#include "qsm/parallel.hpp"
#include "qsm/statevector.hpp"

namespace qsm::moments {

using sim::Complex;

std::int64_t required_shots(int k, double epsilon) {
  if (k < 2) throw ConfigError("moment order k must be >= 2");
  if (!(epsilon > 0.0)) throw ConfigError("target error must be positive");
  const double n = 2.0 * std::log(6.0 * k) / (epsilon * epsilon);
  return static_cast<std::int64_t>(std::ceil(n));
}

std::vector<double> exact_moments(const sim::MixedState& rho, int k) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(0, k - 1)));
  const auto& w = rho.eigenvalues();
  Eigen::VectorXd power = w;
  for (int j = 2; j <= k; ++j) {
    power = power.cwiseProduct(w);
    out.push_back(power.sum());
  }
  return out;
}

ChainLayout chain_layout(int m) {
  ChainLayout layout;
  layout.register_one.resize(static_cast<std::size_t>(m));
  layout.register_two.resize(static_cast<std::size_t>(m));
  std::iota(layout.register_one.begin(), layout.register_one.end(), 0);
  std::iota(layout.register_two.begin(), layout.register_two.end(), m);
  layout.ancilla = 2 * m;
  return layout;
}

sim::Circuit chain_circuit(std::shared_ptr<const sim::MixedState> rho, int k) {
  if (k < 2) throw ConfigError("moment order k must be >= 2");
  const int m = rho->qubits();
  const ChainLayout lay = chain_layout(m);
  sim::Circuit c(2 * m + 1, k - 1);
  const int state = c.add_state(std::move(rho));

  c.append(sim::PrepareMixed{lay.register_one, state});
  for (int round = 1; round <= k - 1; ++round) {
    if (round > 1) {
      c.append(sim::ResetToZero{lay.register_two});
      c.append(sim::ResetToZero{{lay.ancilla}});
    }
    c.append(sim::PrepareMixed{lay.register_two, state});
    c.append(sim::Hadamard{lay.ancilla});
    c.append(sim::ControlledSwap{{{lay.ancilla, true}},
                                 lay.register_one,
                                 lay.register_two});
    c.append(sim::MeasureX{lay.ancilla, round - 1});
  }
  c.validate();
  return c;
}

namespace {

struct SumAccumulator {
  std::vector<std::int64_t> sums;
  std::int64_t count = 0;
};

}  // namespace

MomentEstimates estimate_moments(std::shared_ptr<const sim::MixedState> rho,
                                 const MomentPlan& plan, int threads) {
  if (plan.k < 2) throw ConfigError("moment order k must be >= 2");
  const std::int64_t n =
      plan.shots > 0 ? plan.shots : required_shots(plan.k, plan.epsilon);
  if (n < 1) throw ConfigError("shot count must be >= 1");

  const sim::Circuit circuit = chain_circuit(std::move(rho), plan.k);
  const std::size_t orders = static_cast<std::size_t>(plan.k - 1);

  auto acc = parallel_chunked<SumAccumulator>(
      n, threads,
      [&](std::int64_t first, std::int64_t last, SumAccumulator& a) {
        a.sums.assign(orders, 0);
        for (std::int64_t s = first; s < last; ++s) {
          ShotRng rng = shot_stream(plan.seed, static_cast<std::uint64_t>(s));
          const sim::ShotRecord rec = sim::run_shot(circuit, rng);
          int prod = 1;
          for (std::size_t l = 0; l < orders; ++l) {
            prod *= rec.outcomes[l];
            a.sums[l] += prod;
          }
          ++a.count;
        }
      },
      [&](SumAccumulator& total, const SumAccumulator& part) {
        if (total.sums.empty()) total.sums.assign(orders, 0);
        for (std::size_t l = 0; l < part.sums.size(); ++l)
          total.sums[l] += part.sums[l];
        total.count += part.count;
      });

  MomentEstimates out;
  out.k = plan.k;
  out.shots = n;
  out.seed = plan.seed;
  out.executions = acc.count;
  out.estimates.resize(orders);
  out.stderrs.resize(orders);
  for (std::size_t l = 0; l < orders; ++l) {
    const double mean = static_cast<double>(acc.sums[l]) / static_cast<double>(n);
    out.estimates[l] = mean;
    out.stderrs[l] =
        std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(n));
  }
  return out;
}

FactorChain::FactorChain(const sim::MixedState& rho, int k)
    : rho_(rho), k_(k), dim_(rho.matrix().rows()) {
  if (k < 1) throw ConfigError("moment order k must be >= 1");
}

void FactorChain::run(ShotRng& rng, std::int8_t* outcomes) {
  index_ = static_cast<Eigen::Index>(rng.sample_cdf(rho_.eigenvalue_cdf()));
  for (int round = 0; round < k_ - 1; ++round) {
    const Eigen::Index fresh =
        static_cast<Eigen::Index>(rng.sample_cdf(rho_.eigenvalue_cdf()));
    if (fresh == index_) {
      outcomes[round] = 1;
      continue;
    }
    outcomes[round] = rng.uniform() < 0.5 ? 1 : -1;
    // The discarded register's measurement lands on the old or the fresh
    // index with equal weight; in the latter branch register one keeps its
    // state, in the former it ends up holding the fresh copy.
    if (rng.uniform() < 0.5) index_ = fresh;
  }
}

const sim::Vector& FactorChain::eigenbasis_state() const {
  chi_.setZero(dim_);
  chi_[index_] = 1.0;
  return chi_;
}

void FactorChain::fill_computational_state(sim::Vector& out) const {
  out = rho_.eigenvectors().col(index_);
}

namespace {

struct SwapAccumulator {
  std::int64_t x_sum = 0;
  std::int64_t weighted_sum = 0;  // sgn * m * x
  std::int64_t count = 0;
};

}  // namespace

SwapTestEstimate generalized_swap_test(const sim::MixedState& rho, int k,
                                       std::int64_t shots, std::uint64_t seed,
                                       int threads,
                                       const obs::PauliObservable* weighted) {
  if (k < 1) throw ConfigError("permutation order must be >= 1");
  if (shots < 1) throw ConfigError("shot count must be >= 1");
  if (weighted != nullptr && weighted->qubits() != rho.qubits()) {
    throw ConfigError("observable qubit count does not match the state");
  }

  // <psi_i | P_t | psi_i> diagonals in the eigenbasis, one per Pauli term.
  // Off-diagonal elements only enter multiplied by the overlap product Q,
  // which vanishes unless all sampled indices coincide.
  std::vector<Eigen::VectorXd> term_diag;
  if (weighted != nullptr) {
    const sim::Matrix& vecs = rho.eigenvectors();
    sim::Vector column(vecs.rows()), image(vecs.rows());
    for (const auto& term : weighted->terms()) {
      Eigen::VectorXd diag(vecs.cols());
      for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
        column = vecs.col(j);
        obs::apply_pauli_string(term.paulis, column, image);
        diag[j] = (column.adjoint() * image)(0).real();
      }
      term_diag.push_back(std::move(diag));
    }
  }

  const auto& cdf = rho.eigenvalue_cdf();
  auto acc = parallel_chunked<SwapAccumulator>(
      shots, threads,
      [&](std::int64_t first, std::int64_t last, SwapAccumulator& a) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(k));
        for (std::int64_t s = first; s < last; ++s) {
          ShotRng rng = shot_stream(seed, static_cast<std::uint64_t>(s));
          int term = -1;
          if (weighted != nullptr) {
            term = static_cast<int>(rng.sample_cdf(weighted->weight_cdf()));
          }
          bool all_equal = true;
          for (int c = 0; c < k; ++c) {
            idx[static_cast<std::size_t>(c)] = rng.sample_cdf(cdf);
            if (idx[static_cast<std::size_t>(c)] != idx[0]) all_equal = false;
          }
          // Copies are sampled eigenstates, so the cyclic-overlap product
          // Re<Psi|S|Psi> is 1 when all indices coincide and 0 otherwise.
          const double c_re = all_equal ? 1.0 : 0.0;
          const int x = rng.uniform() < 0.5 * (1.0 + c_re) ? 1 : -1;
          a.x_sum += x;

          if (weighted != nullptr) {
            const auto& diag = term_diag[static_cast<std::size_t>(term)];
            const Eigen::Index i1 = static_cast<Eigen::Index>(idx[0]);
            const Eigen::Index ik =
                static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k - 1)]);
            const double e1 = diag[i1];
            const double ek = diag[ik];
            // Q = prod of consecutive overlaps; nonzero only when all equal.
            const double ap_q = all_equal ? diag[i1] : 0.0;
            const double a1_q = all_equal ? 1.0 : 0.0;
            double w_plus = 0.5 * (1.0 + e1) + 0.5 * (1.0 + ek) +
                            static_cast<double>(x) * (a1_q + ap_q);
            double w_minus = 0.5 * (1.0 - e1) + 0.5 * (1.0 - ek) +
                             static_cast<double>(x) * (a1_q - ap_q);
            w_plus = std::max(0.0, w_plus);
            w_minus = std::max(0.0, w_minus);
            const double p_plus =
                w_plus + w_minus > 0.0 ? w_plus / (w_plus + w_minus) : 0.5;
            const int m = rng.uniform() < p_plus ? 1 : -1;
            const int sgn = weighted->signs()[static_cast<std::size_t>(term)];
            a.weighted_sum += sgn * m * x;
          }
          ++a.count;
        }
      },
      [](SwapAccumulator& total, const SwapAccumulator& part) {
        total.x_sum += part.x_sum;
        total.weighted_sum += part.weighted_sum;
        total.count += part.count;
      });

  SwapTestEstimate out;
  out.shots = shots;
  out.denominator = static_cast<double>(acc.x_sum) / static_cast<double>(shots);
  if (weighted == nullptr) {
    out.estimate = out.denominator;
    out.stderr = std::sqrt(std::max(0.0, 1.0 - out.estimate * out.estimate) /
                           static_cast<double>(shots));
  } else {
    const double s = weighted->l1_norm();
    out.estimate =
        s * static_cast<double>(acc.weighted_sum) / static_cast<double>(shots);
    out.stderr = std::sqrt(std::max(0.0, s * s - out.estimate * out.estimate) /
                           static_cast<double>(shots));
  }
  return out;
}

}  // namespace qsm::moments
