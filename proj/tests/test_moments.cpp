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

#include <cmath>

#include "doctest.h"
#include "qsm/errors.hpp"
#include "qsm/moments.hpp"
#include "qsm/oracle.hpp"
#include "testutil.hpp"

using namespace qsm;
using test::gibbs_z;
using test::shared_state;
using test::slot_range;

namespace {

// Closed-form moments of Gibbs-Z(beta), independent of the eigensolver.
std::vector<double> gibbs_moments(double beta, int k) {
  const double z = std::exp(-beta) + std::exp(beta);
  const double q = std::exp(-beta) / z;
  const double p = std::exp(beta) / z;
  std::vector<double> out;
  for (int j = 2; j <= k; ++j) out.push_back(std::pow(p, j) + std::pow(q, j));
  return out;
}

}  // namespace

TEST_CASE("required_shots evaluates the Hoeffding formula") {
  CHECK(moments::required_shots(4, 0.1) == 636);
  CHECK(moments::required_shots(2, 1.0) == 5);
  CHECK(moments::required_shots(16, 0.05) == 3652);
  CHECK_THROWS_AS(moments::required_shots(4, 0.0), ConfigError);
  CHECK_THROWS_AS(moments::required_shots(1, 0.1), ConfigError);
}

TEST_CASE("exact moments from the spectrum") {
  const auto g = moments::exact_moments(*gibbs_z(0.5), 4);
  const auto ref = gibbs_moments(0.5, 4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
  CHECK(g[0] == doctest::Approx(0.606776).epsilon(1e-5));
  CHECK(g[1] == doctest::Approx(0.410164).epsilon(1e-5));
  CHECK(g[2] == doctest::Approx(0.290865).epsilon(1e-5));

  const auto pure = moments::exact_moments(sim::MixedState::random_pure(2, 3), 5);
  for (double v : pure) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  for (int m = 1; m <= 2; ++m) {
    const auto mm = moments::exact_moments(sim::MixedState::maximally_mixed(m), 4);
    for (int j = 2; j <= 4; ++j) {
      CHECK(mm[static_cast<std::size_t>(j - 2)] ==
            doctest::Approx(std::pow(2.0, -m * (j - 1))).epsilon(1e-12));
    }
  }

  // Monotone nonincreasing in the order.
  const auto r = moments::exact_moments(sim::MixedState::random_mixed(2, 8), 6);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] <= r[i - 1] + 1e-12);
}

TEST_CASE("chain circuit structure") {
  const auto rho1 = gibbs_z(0.5);
  const auto c2 = moments::chain_circuit(rho1, 2);
  CHECK(c2.num_qubits() == 3);
  CHECK(c2.num_slots() == 1);
  CHECK(c2.count<sim::ControlledSwap>() == 1);

  const auto c5 = moments::chain_circuit(rho1, 5);
  CHECK(c5.num_qubits() == 3);
  CHECK(c5.num_slots() == 4);
  CHECK(c5.count<sim::ControlledSwap>() == 4);

  const auto rho2 = shared_state(sim::MixedState::random_mixed(2, 4));
  const auto c3 = moments::chain_circuit(rho2, 3);
  CHECK(c3.num_qubits() == 5);
  for (const auto& op : c3.instructions()) {
    if (const auto* sw = std::get_if<sim::ControlledSwap>(&op)) {
      CHECK(sw->register_a.size() == 2);  // register swap = per-qubit swaps
      CHECK(sw->register_b.size() == 2);
    }
  }
}

TEST_CASE("estimate_moments: pure state gives exactly one") {
  const auto pure = shared_state(sim::MixedState::random_pure(1, 12));
  moments::MomentPlan plan{.k = 4, .epsilon = 0.1, .shots = 2000, .seed = 5};
  const auto est = moments::estimate_moments(pure, plan);
  for (double p : est.estimates) CHECK(p == 1.0);
  CHECK(est.executions == 2000);
}

TEST_CASE("estimate_moments: Gibbs-Z within five standard errors") {
  moments::MomentPlan plan{.k = 4, .epsilon = 0.1, .shots = 100000, .seed = 40};
  const auto est = moments::estimate_moments(gibbs_z(0.5), plan);
  const auto exact = gibbs_moments(0.5, 4);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    CHECK(est.estimates[i] >= -1.0);
    CHECK(est.estimates[i] <= 1.0);
    CHECK(est.stderrs[i] <= 1.0 / std::sqrt(100000.0));
    CHECK(std::abs(est.estimates[i] - exact[i]) < 5.0 * est.stderrs[i] + 1e-12);
    // Single-shot variance 1 - Tr(rho^{l+1})^2, empirically within 10%.
    const double var_emp = 1.0 - est.estimates[i] * est.estimates[i];
    const double var_exact = 1.0 - exact[i] * exact[i];
    CHECK(var_emp == doctest::Approx(var_exact).epsilon(0.1));
  }

  // Simultaneity: one stream, n executions total, all orders from it.
  CHECK(est.executions == plan.shots);
  CHECK(est.estimates.size() == 3);
}

TEST_CASE("estimate_moments: maximally mixed single qubit") {
  moments::MomentPlan plan{.k = 3, .epsilon = 0.1, .shots = 100000, .seed = 41};
  const auto est =
      moments::estimate_moments(shared_state(sim::MixedState::maximally_mixed(1)), plan);
  CHECK(std::abs(est.estimates[0] - 0.5) < 5.0 * est.stderrs[0]);
  CHECK(std::abs(est.estimates[1] - 0.25) < 5.0 * est.stderrs[1]);
}

TEST_CASE("thread count does not change estimates") {
  moments::MomentPlan plan{.k = 4, .epsilon = 0.1, .shots = 20000, .seed = 9};
  const auto a = moments::estimate_moments(gibbs_z(0.4), plan, 1);
  const auto b = moments::estimate_moments(gibbs_z(0.4), plan, 4);
  CHECK(a.estimates == b.estimates);
  CHECK(a.stderrs == b.stderrs);
}

TEST_CASE("factorized chain trajectory matches the circuit sampler") {
  const auto rho = shared_state(sim::MixedState::random_mixed(1, 77));
  const int k = 4;
  const auto exact = moments::exact_moments(*rho, k);

  moments::FactorChain fast(*rho, k);
  const std::int64_t n = 200000;
  std::vector<std::int64_t> sums(static_cast<std::size_t>(k - 1), 0);
  std::int8_t xs[8];
  for (std::int64_t s = 0; s < n; ++s) {
    ShotRng rng = shot_stream(500, static_cast<std::uint64_t>(s));
    fast.run(rng, xs);
    int prod = 1;
    for (int l = 0; l < k - 1; ++l) {
      prod *= xs[l];
      sums[static_cast<std::size_t>(l)] += prod;
    }
  }
  for (int l = 0; l < k - 1; ++l) {
    const double mean =
        static_cast<double>(sums[static_cast<std::size_t>(l)]) / static_cast<double>(n);
    CHECK(std::abs(mean - exact[static_cast<std::size_t>(l)]) <
          5.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("factorized chain final state feeds Pauli measurements correctly") {
  // E[m * x_suffix] must equal Tr(P rho^{j+1}); validated against dense algebra.
  const auto rho = gibbs_z(0.5);
  const auto z = obs::PauliObservable::single(1, "Z");
  const sim::Matrix rho2 = rho->matrix() * rho->matrix();
  const double expected = (z.dense() * rho2).trace().real();  // Tr(Z rho^2)

  const int k = 3;
  moments::FactorChain fast(*rho, k);
  sim::Vector chi;
  const std::int64_t n = 200000;
  std::int64_t sum = 0;
  std::int8_t xs[4];
  for (std::int64_t s = 0; s < n; ++s) {
    ShotRng rng = shot_stream(501, static_cast<std::uint64_t>(s));
    fast.run(rng, xs);
    fast.fill_computational_state(chi);
    sim::Vector img;
    obs::apply_pauli_string("Z", chi, img);
    const double e = (chi.adjoint() * img)(0).real();
    const int m = rng.uniform() < 0.5 * (1.0 + e) ? 1 : -1;
    sum += m * xs[k - 2];  // suffix product of length 1
  }
  const double mean = static_cast<double>(sum) / static_cast<double>(n);
  CHECK(std::abs(mean - expected) < 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("generalized swap test") {
  const auto pure = sim::MixedState::random_pure(1, 15);
  const auto pure_est = moments::generalized_swap_test(pure, 3, 2000, 3);
  CHECK(pure_est.estimate == 1.0);  // every shot accepts

  const auto rho = gibbs_z(0.5);
  const auto est = moments::generalized_swap_test(*rho, 3, 100000, 4);
  CHECK(std::abs(est.estimate - 0.4101642) < 5.0 * est.stderr);

  const auto z = obs::PauliObservable::single(1, "Z");
  const auto w = moments::generalized_swap_test(*rho, 2, 100000, 5, 1, &z);
  CHECK(std::abs(w.estimate - (-0.4621172)) < 5.0 * w.stderr);

  // Baseline equivalence with the chain estimator at combined five sigma.
  moments::MomentPlan plan{.k = 3, .epsilon = 0.1, .shots = 100000, .seed = 6};
  const auto chain = moments::estimate_moments(rho, plan);
  const double combined =
      std::sqrt(est.stderr * est.stderr + chain.stderrs[1] * chain.stderrs[1]);
  CHECK(std::abs(est.estimate - chain.estimates[1]) < 5.0 * combined);
}

TEST_CASE("generalized swap test enumeration is exactly unbiased") {
  // Enumerate eigenstate combinations and term choices explicitly; the
  // sampler's conditional probabilities must integrate to Tr(O rho^k).
  for (std::uint64_t seed : {61u, 62u}) {
    const auto rho = sim::MixedState::random_mixed(1, seed);
    const auto o = obs::PauliObservable::random(1, 3, seed + 10);
    const int k = 3;
    const auto& w = rho.eigenvalues();
    const sim::Matrix& vecs = rho.eigenvectors();

    sim::Matrix rho_k = rho.matrix();
    for (int j = 1; j < k; ++j) rho_k *= rho.matrix();
    const double expected = (o.dense() * rho_k).trace().real();

    // E[S sgn m x] = sum_p alpha_p sum_{all-equal combos} lambda_i^k <i|P_p|i>.
    double total = 0.0;
    for (const auto& term : o.terms()) {
      const sim::Matrix p = obs::pauli_string_matrix(term.paulis);
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double diag =
            (vecs.col(i).adjoint() * p * vecs.col(i))(0).real();
        total += term.coefficient * std::pow(w[i], k) * diag;
      }
    }
    CHECK(total == doctest::Approx(expected).epsilon(1e-9));

    const auto est = moments::generalized_swap_test(rho, k, 150000, 9, 1, &o);
    CHECK(std::abs(est.estimate - expected) < 5.0 * est.stderr);
  }
}
