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

#include "qsm/weighted.hpp"

#include <cmath>

#include "qsm/errors.hpp"
#include "qsm/moments.hpp"
#include "qsm/parallel.hpp"
#include "qsm/statevector.hpp"

namespace qsm::obs {

sim::Circuit build_weighted_chain_circuit(std::shared_ptr<const sim::MixedState> rho,
                                          const PauliObservable& o, int k,
                                          Scheme scheme) {
  if (k < 1) throw ConfigError("weighted moment order must be >= 1");
  if (o.qubits() != rho->qubits()) {
    throw ConfigError("observable qubit count does not match the state");
  }
  const int m = rho->qubits();
  const auto lay = moments::chain_layout(m);
  const int extra = scheme == Scheme::kLcu ? 1 : 0;
  sim::Circuit c(2 * m + 1 + extra, k);
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

  const int final_slot = k - 1;
  if (scheme == Scheme::kPauli) {
    sim::MeasureSampledPauli sampled;
    for (const auto& term : o.terms()) sampled.strings.push_back(term.paulis);
    sampled.weight_cdf = o.weight_cdf();
    sampled.signs = o.signs();
    sampled.qubits = lay.register_one;
    sampled.slot = final_slot;
    c.append(std::move(sampled));
  } else {
    const int lcu_ancilla = 2 * m + 1;
    LcuUnitary u = lcu_unitary(o);
    c.append(sim::Hadamard{lcu_ancilla});
    c.append(sim::ControlledUnitary{{{lcu_ancilla, true}},
                                    lay.register_one,
                                    std::move(u.unitary)});
    c.append(sim::MeasureX{lcu_ancilla, final_slot});
  }
  c.validate();
  return c;
}

namespace {

struct WeightedAccumulator {
  std::vector<std::int64_t> sums;  // orders 1..k
};

}  // namespace

WeightedMoments estimate_weighted_moments(std::shared_ptr<const sim::MixedState> rho,
                                          const PauliObservable& o, int k,
                                          std::int64_t shots, std::uint64_t seed,
                                          Scheme scheme, int threads) {
  if (shots < 1) throw ConfigError("shot count must be >= 1");
  const sim::Circuit circuit =
      build_weighted_chain_circuit(std::move(rho), o, k, scheme);
  const std::size_t orders = static_cast<std::size_t>(k);
  const int final_slot = k - 1;

  const auto acc = parallel_chunked<WeightedAccumulator>(
      shots, threads,
      [&](std::int64_t first, std::int64_t last, WeightedAccumulator& a) {
        a.sums.assign(orders, 0);
        for (std::int64_t s = first; s < last; ++s) {
          ShotRng rng = shot_stream(seed, static_cast<std::uint64_t>(s));
          const sim::ShotRecord rec = sim::run_shot(circuit, rng);
          int readout = rec.outcomes[static_cast<std::size_t>(final_slot)];
          if (scheme == Scheme::kPauli) readout *= rec.sampled_sign;
          // Suffix products ending at the last chain round: earlier unsigned
          // rounds leave the register in rho, the signed window builds the
          // Jordan product, and the observable reads it out at the end.
          int value = readout;
          a.sums[0] += value;
          for (int j = 1; j <= k - 1; ++j) {
            value *= rec.outcomes[static_cast<std::size_t>(k - 1 - j)];
            a.sums[static_cast<std::size_t>(j)] += value;
          }
        }
      },
      [&](WeightedAccumulator& total, const WeightedAccumulator& part) {
        if (total.sums.empty()) total.sums.assign(orders, 0);
        for (std::size_t i = 0; i < part.sums.size(); ++i)
          total.sums[i] += part.sums[i];
      });

  const double scale = scheme == Scheme::kPauli ? o.l1_norm() : o.spectral_norm();
  WeightedMoments out;
  out.k = k;
  out.scheme = scheme;
  out.shots = shots;
  out.seed = seed;
  out.estimates.resize(orders);
  out.stderrs.resize(orders);
  for (std::size_t j = 0; j < orders; ++j) {
    const double mean = static_cast<double>(acc.sums[j]) / static_cast<double>(shots);
    out.estimates[j] = scale * mean;
    out.stderrs[j] = std::sqrt(
        std::max(0.0, scale * scale - out.estimates[j] * out.estimates[j]) /
        static_cast<double>(shots));
  }
  return out;
}

std::vector<WeightedFunctionalEstimate> contract_functionals(
    const WeightedMoments& wm, const std::vector<qsf::PolynomialFunctional>& fs) {
  std::vector<WeightedFunctionalEstimate> out(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].degree() > wm.k) {
      throw ConfigError("functional degree exceeds the estimated moment order");
    }
    for (int j = 1; j <= fs[i].degree(); ++j) {
      const double beta = fs[i].coefficients()[static_cast<std::size_t>(j - 1)];
      out[i].value += beta * wm.estimates[static_cast<std::size_t>(j - 1)];
      out[i].error_bound +=
          std::abs(beta) * wm.stderrs[static_cast<std::size_t>(j - 1)];
    }
  }
  return out;
}

std::vector<WeightedFunctionalEstimate> estimate_weighted_functionals(
    std::shared_ptr<const sim::MixedState> rho, const PauliObservable& o,
    const std::vector<qsf::PolynomialFunctional>& fs, std::int64_t shots,
    std::uint64_t seed, Scheme scheme, int threads) {
  int k = 1;
  for (const auto& f : fs) k = std::max(k, f.degree());
  const WeightedMoments wm =
      estimate_weighted_moments(std::move(rho), o, k, shots, seed, scheme, threads);
  return contract_functionals(wm, fs);
}

std::vector<double> exact_weighted_moments(const sim::MixedState& rho,
                                           const PauliObservable& o, int k) {
  std::vector<double> out;
  sim::Matrix power = rho.matrix();
  for (int j = 1; j <= k; ++j) {
    out.push_back((o.dense() * power).trace().real());
    power *= rho.matrix();
  }
  return out;
}

}  // namespace qsm::obs
