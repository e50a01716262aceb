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

#include "qsm/qvc.hpp"

#include <algorithm>
#include <cmath>

#include "qsm/errors.hpp"
#include "qsm/moments.hpp"
#include "qsm/parallel.hpp"

namespace qsm::apps {

namespace {

// One chain run: per shot, the factorized trajectory plus an importance
// sampled Pauli readout of the final register-one state. Returns numerator
// and denominator estimates for all orders 1..k.
struct RunEstimate {
  std::vector<double> numerator;    // Tr(H rho^k') estimates
  std::vector<double> denominator;  // Tr(rho^k') estimates
};

RunEstimate chain_run(const sim::MixedState& rho,
                      const obs::PauliObservable& hamiltonian, int k,
                      std::int64_t shots, std::uint64_t run_seed, int threads) {
  // <psi_i | P_t | psi_i> in rho's eigenbasis, one diagonal per Pauli term;
  // the chain's final register state is always a single eigenvector.
  const sim::Matrix& vecs = rho.eigenvectors();
  std::vector<Eigen::VectorXd> term_diag;
  term_diag.reserve(static_cast<std::size_t>(hamiltonian.term_count()));
  {
    sim::Vector column(vecs.rows()), image(vecs.rows());
    for (const auto& term : hamiltonian.terms()) {
      Eigen::VectorXd diag(vecs.cols());
      for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
        column = vecs.col(j);
        obs::apply_pauli_string(term.paulis, column, image);
        diag[j] = (column.adjoint() * image)(0).real();
      }
      term_diag.push_back(std::move(diag));
    }
  }

  struct Acc {
    std::vector<std::int64_t> num;
    std::vector<std::int64_t> den;
  };
  const std::size_t orders = static_cast<std::size_t>(k);
  const auto acc = parallel_chunked<Acc>(
      shots, threads,
      [&](std::int64_t first, std::int64_t last, Acc& a) {
        a.num.assign(orders, 0);
        a.den.assign(orders, 0);
        moments::FactorChain chain(rho, k);
        std::vector<std::int8_t> xs(static_cast<std::size_t>(std::max(1, k - 1)));
        for (std::int64_t s = first; s < last; ++s) {
          ShotRng rng = shot_stream(run_seed, static_cast<std::uint64_t>(s));
          const std::size_t term = rng.sample_cdf(hamiltonian.weight_cdf());
          chain.run(rng, xs.data());
          const double expectation = std::clamp(
              term_diag[term][chain.state_index()], -1.0, 1.0);
          const double p_plus = 0.5 * (1.0 + expectation);
          const int m = rng.uniform() < p_plus ? 1 : -1;
          const int sgn = hamiltonian.signs()[term];

          int suffix = 1;
          a.num[0] += sgn * m;
          a.den[0] += 1;
          for (int j = 1; j <= k - 1; ++j) {
            suffix *= xs[static_cast<std::size_t>(k - 1 - j)];
            a.num[static_cast<std::size_t>(j)] += sgn * m * suffix;
            a.den[static_cast<std::size_t>(j)] += suffix;
          }
        }
      },
      [&](Acc& total, const Acc& part) {
        if (total.num.empty()) {
          total.num.assign(orders, 0);
          total.den.assign(orders, 0);
        }
        for (std::size_t i = 0; i < part.num.size(); ++i) {
          total.num[i] += part.num[i];
          total.den[i] += part.den[i];
        }
      });

  RunEstimate out;
  const double s_norm = hamiltonian.l1_norm();
  const double n = static_cast<double>(shots);
  out.numerator.resize(orders);
  out.denominator.resize(orders);
  for (std::size_t j = 0; j < orders; ++j) {
    out.numerator[j] = s_norm * static_cast<double>(acc.num[j]) / n;
    out.denominator[j] = static_cast<double>(acc.den[j]) / n;
  }
  return out;
}

RunEstimate baseline_run(const sim::MixedState& rho,
                         const obs::PauliObservable& hamiltonian, int k,
                         std::int64_t shots_per_order, std::uint64_t run_seed,
                         int threads) {
  RunEstimate out;
  out.numerator.resize(static_cast<std::size_t>(k));
  out.denominator.resize(static_cast<std::size_t>(k));
  for (int order = 1; order <= k; ++order) {
    const auto est = moments::generalized_swap_test(
        rho, order, shots_per_order, derive_seed(run_seed, order), threads,
        &hamiltonian);
    out.numerator[static_cast<std::size_t>(order - 1)] = est.estimate;
    out.denominator[static_cast<std::size_t>(order - 1)] = est.denominator;
  }
  return out;
}

}  // namespace

std::int64_t baseline_shots_per_order(std::int64_t chain_shots, int k) {
  // Copies: chain uses shots * k; the baseline spends n_b * sum_{k'=1}^k k'
  // = n_b k(k+1)/2, so n_b = 2 shots / (k+1).
  return std::max<std::int64_t>(1, 2 * chain_shots / (k + 1));
}

QvcResult virtual_cooling_estimate(const sim::MixedState& rho,
                                   const obs::PauliObservable& hamiltonian, int k,
                                   std::int64_t shots, int runs,
                                   std::uint64_t seed, QvcScheme scheme,
                                   int threads) {
  if (k < 1) throw ConfigError("cooling order must be >= 1");
  if (runs < 1) throw ConfigError("need at least one run");
  if (shots < 1) throw ConfigError("shot count must be >= 1");
  if (hamiltonian.qubits() != rho.qubits()) {
    throw ConfigError("Hamiltonian qubit count does not match the state");
  }

  QvcResult result;
  result.shots = shots;
  result.runs = runs;
  for (int order = 1; order <= k; ++order) {
    result.orders.push_back(order);
    result.exact_energy.push_back(exact_cooled_energy(rho, hamiltonian, order));
  }

  // energies[order][run], NaN marking invalid runs.
  std::vector<std::vector<double>> energies(
      static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(runs)));
  const std::int64_t baseline_shots = baseline_shots_per_order(shots, k);
  for (int run = 0; run < runs; ++run) {
    const std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(run));
    const RunEstimate est =
        scheme == QvcScheme::kChain
            ? chain_run(rho, hamiltonian, k, shots, run_seed, threads)
            : baseline_run(rho, hamiltonian, k, baseline_shots, run_seed, threads);
    for (int j = 0; j < k; ++j) {
      const double den = est.denominator[static_cast<std::size_t>(j)];
      energies[static_cast<std::size_t>(j)][static_cast<std::size_t>(run)] =
          den == 0.0 ? std::nan("")
                     : est.numerator[static_cast<std::size_t>(j)] / den;
    }
  }

  for (int j = 0; j < k; ++j) {
    const auto& row = energies[static_cast<std::size_t>(j)];
    double sum = 0.0;
    int valid = 0;
    for (double e : row) {
      if (!std::isnan(e)) {
        sum += e;
        ++valid;
      }
    }
    result.invalid_runs.push_back(runs - valid);
    if (valid == 0) {
      result.mean_energy.push_back(std::nan(""));
      result.sigma_energy.push_back(std::nan(""));
      result.mad.push_back(std::nan(""));
      continue;
    }
    const double mean = sum / valid;
    double sq = 0.0;
    double abs_dev = 0.0;
    for (double e : row) {
      if (std::isnan(e)) continue;
      sq += (e - mean) * (e - mean);
      abs_dev += std::abs(e - result.exact_energy[static_cast<std::size_t>(j)]);
    }
    result.mean_energy.push_back(mean);
    result.sigma_energy.push_back(valid > 1 ? std::sqrt(sq / (valid - 1)) : 0.0);
    result.mad.push_back(abs_dev / valid);
  }
  return result;
}

ScalingResult error_scaling_study(const HeisenbergSpec& spec, double beta,
                                  int k_max,
                                  const std::vector<std::int64_t>& shot_grid,
                                  int runs, std::uint64_t seed, int threads) {
  const auto hamiltonian = heisenberg_hamiltonian(spec);
  const auto rho = gibbs_state(hamiltonian, beta);

  ScalingResult result;
  result.sites = spec.sites;
  for (int order = 1; order <= k_max; ++order) result.orders.push_back(order);

  // mean |dE| per (order, shot count), averaged over runs.
  std::vector<std::vector<double>> mean_err(
      static_cast<std::size_t>(k_max),
      std::vector<double>(shot_grid.size(), 0.0));
  for (std::size_t g = 0; g < shot_grid.size(); ++g) {
    const auto qvc = virtual_cooling_estimate(
        rho, hamiltonian, k_max, shot_grid[g], runs,
        derive_seed(seed, 7000 + g), QvcScheme::kChain, threads);
    for (int j = 0; j < k_max; ++j) {
      mean_err[static_cast<std::size_t>(j)][g] = qvc.mad[static_cast<std::size_t>(j)];
      ScalingPoint point;
      point.k = j + 1;
      point.shots = shot_grid[g];
      point.mean_abs_error = qvc.mad[static_cast<std::size_t>(j)];
      result.points.push_back(point);
    }
  }

  // Least-squares slope of log(mean |dE|) against log N.
  for (int j = 0; j < k_max; ++j) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t g = 0; g < shot_grid.size(); ++g) {
      const double err = mean_err[static_cast<std::size_t>(j)][g];
      if (!(err > 0.0) || std::isnan(err)) continue;
      const double x = std::log10(static_cast<double>(shot_grid[g]));
      const double y = std::log10(err);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n < 2) {
      result.slopes.push_back(std::nan(""));
      continue;
    }
    const double denom = n * sxx - sx * sx;
    result.slopes.push_back((n * sxy - sx * sy) / denom);
  }
  return result;
}

}  // namespace qsm::apps
