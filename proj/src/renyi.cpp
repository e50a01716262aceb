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

#include "qsm/renyi.hpp"

#include <cmath>

#include "qsm/errors.hpp"
#include "qsm/parallel.hpp"
#include "qsm/statevector.hpp"

namespace qsm::apps {

double renyi_entropy(double moment_alpha, int alpha, bool base_two) {
  if (alpha < 2) throw ConfigError("Renyi order must be an integer >= 2");
  if (!(moment_alpha > 0.0)) {
    throw NumericalError(
        "nonpositive moment estimate; increase shots to resolve Tr(rho^alpha)");
  }
  double s = std::log(moment_alpha) / (1.0 - alpha);
  if (base_two) s /= std::log(2.0);
  return s;
}

double renyi_entropy_exact(const sim::MixedState& rho, int alpha, bool base_two) {
  if (alpha < 2) throw ConfigError("Renyi order must be an integer >= 2");
  const auto& w = rho.eigenvalues();
  double moment = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) moment += std::pow(w[i], alpha);
  return renyi_entropy(moment, alpha, base_two);
}

double gibbs_z_angle(double beta) { return 2.0 * std::atan(std::exp(beta)); }

sim::Circuit gibbs_z_circuit(double beta) {
  sim::Circuit c(2, 0);
  c.append(sim::RotationY{0, gibbs_z_angle(beta)});
  c.append(sim::ControlledNot{0, 1});
  c.validate();
  return c;
}

sim::Circuit renyi_chain_circuit(double beta, int alpha_max) {
  if (alpha_max < 2) throw ConfigError("Renyi order must be >= 2");
  // Qubits: system one = 0, environment one = 1, system two = 2,
  // environment two = 3, ancilla = 4. Swaps touch the system qubits only.
  const double theta = gibbs_z_angle(beta);
  sim::Circuit c(5, alpha_max - 1);
  c.append(sim::RotationY{0, theta});
  c.append(sim::ControlledNot{0, 1});
  for (int round = 1; round <= alpha_max - 1; ++round) {
    if (round > 1) {
      c.append(sim::ResetToZero{{2, 3}});
      c.append(sim::ResetToZero{{4}});
    }
    c.append(sim::RotationY{2, theta});
    c.append(sim::ControlledNot{2, 3});
    c.append(sim::Hadamard{4});
    c.append(sim::ControlledSwap{{{4, true}}, {0}, {2}});
    c.append(sim::MeasureX{4, round - 1});
  }
  c.validate();
  return c;
}

std::vector<RenyiEstimate> renyi_experiment(double beta, int alpha_max,
                                            std::int64_t shots,
                                            std::uint64_t seed, bool base_two,
                                            int threads) {
  if (shots < 1) throw ConfigError("shot count must be >= 1");
  const sim::Circuit circuit = renyi_chain_circuit(beta, alpha_max);

  struct Acc {
    std::vector<std::int64_t> sums;
  };
  const std::size_t orders = static_cast<std::size_t>(alpha_max - 1);
  const auto acc = parallel_chunked<Acc>(
      shots, threads,
      [&](std::int64_t first, std::int64_t last, Acc& a) {
        a.sums.assign(orders, 0);
        for (std::int64_t s = first; s < last; ++s) {
          ShotRng rng = shot_stream(seed, static_cast<std::uint64_t>(s));
          const sim::ShotRecord rec = sim::run_shot(circuit, rng);
          int prod = 1;
          for (std::size_t l = 0; l < orders; ++l) {
            prod *= rec.outcomes[l];
            a.sums[l] += prod;
          }
        }
      },
      [&](Acc& total, const Acc& part) {
        if (total.sums.empty()) total.sums.assign(orders, 0);
        for (std::size_t i = 0; i < part.sums.size(); ++i)
          total.sums[i] += part.sums[i];
      });

  // Exact reference from the reduced state of the purification.
  const double z = std::exp(-beta) + std::exp(beta);
  Eigen::VectorXd probs(2);
  probs << std::exp(-beta) / z, std::exp(beta) / z;
  const auto rho = sim::MixedState::diagonal(probs);

  std::vector<RenyiEstimate> out;
  for (int alpha = 2; alpha <= alpha_max; ++alpha) {
    RenyiEstimate est;
    est.alpha = alpha;
    const double mean =
        static_cast<double>(acc.sums[static_cast<std::size_t>(alpha - 2)]) /
        static_cast<double>(shots);
    est.moment = mean;
    est.moment_stderr =
        std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(shots));
    est.entropy = renyi_entropy(mean, alpha, base_two);
    est.exact_entropy = renyi_entropy_exact(rho, alpha, base_two);
    out.push_back(est);
  }
  return out;
}

}  // namespace qsm::apps
