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
#include "qsm/oracle.hpp"
#include "qsm/qsf.hpp"
#include "qsm/rng.hpp"
#include "qsm/statevector.hpp"
#include "testutil.hpp"

using namespace qsm;
using test::gibbs_z;
using test::shared_state;

namespace {

// sum alpha_j Tr(rho^j) straight from the spectrum.
double exact_functional(const qsf::PolynomialFunctional& f,
                        const sim::MixedState& rho) {
  double value = f.coefficients()[0];
  const auto& w = rho.eigenvalues();
  for (int j = 2; j <= f.degree(); ++j) {
    double moment = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) moment += std::pow(w[i], j);
    value += f.coefficients()[static_cast<std::size_t>(j - 1)] * moment;
  }
  return value;
}

double qsf_oracle_value(const qsf::PolynomialFunctional& f,
                        std::shared_ptr<const sim::MixedState> rho) {
  const auto circuit = qsf::build_qsf_circuit(f, std::move(rho));
  const double raw = sim::signed_expectation(circuit, std::vector<int>{0});
  return (f.majority_negative() ? -1.0 : 1.0) * f.l1_norm() * raw;
}

qsf::PolynomialFunctional random_functional(int k, std::uint64_t seed) {
  ShotRng rng(seed, 3);
  std::vector<double> coeffs(static_cast<std::size_t>(k));
  bool has_negative = false;
  for (auto& a : coeffs) {
    a = 2.0 * rng.uniform() - 1.0;
    if (a < 0) has_negative = true;
  }
  if (!has_negative) coeffs[0] = -std::abs(coeffs[0]) - 0.1;  // force mixed signs
  return qsf::PolynomialFunctional(coeffs);
}

}  // namespace

TEST_CASE("gray code sequence") {
  CHECK(qsf::gray_code(0) == 0);
  CHECK(qsf::gray_code_string(0, 2) == "00");
  CHECK(qsf::gray_code_string(1, 2) == "01");
  CHECK(qsf::gray_code_string(2, 2) == "11");
  CHECK(qsf::gray_code_string(3, 2) == "10");
  CHECK(qsf::gray_code(5) == 7);
  CHECK(qsf::gray_code_string(5, 3) == "111");
  for (std::uint32_t i = 1; i < 64; ++i) {
    const std::uint32_t diff = qsf::gray_code(i) ^ qsf::gray_code(i - 1);
    CHECK((diff & (diff - 1)) == 0);  // exactly one bit flips
    CHECK(diff != 0);
  }
}

TEST_CASE("givens ladder angles") {
  const qsf::PolynomialFunctional f({0.5, 0.3, 0.2});
  const auto ladder = qsf::build_givens_ladder(f);
  REQUIRE(ladder.rotations.size() == 2);
  CHECK(ladder.rotations[0].angle == doctest::Approx(1.5707963267948966).epsilon(1e-12));
  CHECK(ladder.rotations[1].angle ==
        doctest::Approx(2.0 * std::acos(std::sqrt(0.6))).epsilon(1e-12));
  CHECK(ladder.rotations[1].angle == doctest::Approx(1.369438).epsilon(1e-6));

  const qsf::PolynomialFunctional trivial({1.0});
  CHECK(qsf::build_givens_ladder(trivial).rotations.empty());

  const qsf::PolynomialFunctional even({0.5, 0.5});
  const auto even_ladder = qsf::build_givens_ladder(even);
  REQUIRE(even_ladder.rotations.size() == 1);
  CHECK(even_ladder.rotations[0].angle == doctest::Approx(M_PI / 2).epsilon(1e-12));
  const auto amps = qsf::ladder_state(even_ladder);
  CHECK(std::abs(amps[0]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(std::abs(amps[1]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(qsf::build_givens_ladder(qsf::PolynomialFunctional({0.0, 0.0})),
                  ConfigError);
}

TEST_CASE("ladder amplitudes equal the normalized weights") {
  for (int k : {2, 3, 4, 5, 7, 8}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      ShotRng rng(seed + static_cast<std::uint64_t>(k) * 100, 0);
      std::vector<double> coeffs(static_cast<std::size_t>(k));
      for (auto& a : coeffs) a = rng.uniform() + 1e-3;
      const qsf::PolynomialFunctional f(coeffs);
      const auto ladder = qsf::build_givens_ladder(f);
      const auto amps = qsf::ladder_state(ladder);
      for (int i = 1; i <= k; ++i) {
        const auto label = qsf::gray_code(static_cast<std::uint32_t>(i - 1));
        const double prob = std::norm(amps[label]);
        CHECK(std::abs(prob - f.weights()[static_cast<std::size_t>(i - 1)]) < 1e-12);
      }
    }
  }
  // Zero weights: theta = pi rotates fully past; trailing zeros end the ladder.
  const qsf::PolynomialFunctional holey({0.5, 0.0, 0.5});
  const auto amps = qsf::ladder_state(qsf::build_givens_ladder(holey));
  CHECK(std::norm(amps[qsf::gray_code(0)]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::norm(amps[qsf::gray_code(1)]) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::norm(amps[qsf::gray_code(2)]) == doctest::Approx(0.5).epsilon(1e-12));

  const qsf::PolynomialFunctional tail({0.7, 0.3, 0.0, 0.0});
  const auto tail_amps = qsf::ladder_state(qsf::build_givens_ladder(tail));
  CHECK(std::norm(tail_amps[qsf::gray_code(0)]) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(std::norm(tail_amps[qsf::gray_code(1)]) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("qsf circuit structure and gate counts") {
  const auto rho = gibbs_z(0.5);

  // Identity functional: no CSWAP, immediate X measurement.
  const qsf::PolynomialFunctional id_f({1.0});
  const auto id_c = qsf::build_qsf_circuit(id_f, rho);
  CHECK(id_c.count<sim::ControlledSwap>() == 0);
  ShotRng rng = shot_stream(2, 0);
  CHECK(sim::run_shot(id_c, rng).outcomes[0] == 1);

  // Purity functional: one CSWAP, control register pinned to |1>.
  const qsf::PolynomialFunctional purity({0.0, 1.0});
  const auto purity_c = qsf::build_qsf_circuit(purity, rho);
  CHECK(purity_c.count<sim::ControlledSwap>() == 1);
  CHECK(purity_c.num_qubits() == 2 * 1 + 1 + 1);
  CHECK(sim::signed_expectation(purity_c, std::vector<int>{0}) ==
        doctest::Approx(0.6067761335170370).epsilon(1e-10));

  // Mixed signs: sgn sum = +1, negative basis = {g(1)}, one CZ.
  const qsf::PolynomialFunctional mixed({0.2, -0.5, 0.3});
  CHECK_FALSE(mixed.majority_negative());
  CHECK(mixed.negative_basis() == std::vector<int>{1});
  const auto mixed_c = qsf::build_qsf_circuit(mixed, rho);
  CHECK(mixed_c.count<sim::ControlledZ>() == 1);

  // Width and CSWAP count claims, CZ count <= floor(k/2).
  for (int k : {2, 3, 4, 5}) {
    const auto f = random_functional(k, static_cast<std::uint64_t>(k) * 11);
    const auto c = qsf::build_qsf_circuit(f, rho);
    CHECK(c.num_qubits() == 2 + qsf::gray_register_width(k) + 1);
    CHECK(c.count<sim::ControlledSwap>() == k - 1);
    CHECK(c.count<sim::ControlledZ>() <= k / 2);
  }
}

TEST_CASE("qsf oracle exactness for mixed-sign functionals") {
  int checked = 0;
  for (int k = 2; k <= 5; ++k) {
    for (int m = 1; m <= 2; ++m) {
      const auto rho =
          shared_state(sim::MixedState::random_mixed(m, 100 + k * 10 + m));
      const auto f = random_functional(k, 200 + k * 10 + m);
      const double oracle = qsf_oracle_value(f, rho);
      const double expected = exact_functional(f, *rho);
      CHECK(std::abs(oracle - expected) < 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 8);
}

TEST_CASE("estimate_functional sampling") {
  const auto rho = gibbs_z(0.5);

  // Identity functional short-circuits.
  const auto one = qsf::estimate_functional(rho, qsf::PolynomialFunctional({1.0}),
                                            10, 1);
  CHECK(one.value == 1.0);
  CHECK(one.shots == 0);

  // f = Tr(rho^2) + Tr(rho^3) on Gibbs-Z(0.5) -> about 1.01694.
  const qsf::PolynomialFunctional f({0.0, 1.0, 1.0});
  const auto est = qsf::estimate_functional(rho, f, 100000, 21);
  const double expected = exact_functional(f, *rho);
  CHECK(expected == doctest::Approx(1.016940).epsilon(1e-5));
  CHECK(std::abs(est.value - expected) < 5.0 * est.stderr);

  // Majority-negative path: f = -Tr(rho^2) on the maximally mixed qubit.
  const qsf::PolynomialFunctional neg({0.0, -1.0});
  const auto neg_est = qsf::estimate_functional(
      shared_state(sim::MixedState::maximally_mixed(1)), neg, 100000, 22);
  CHECK(std::abs(neg_est.value - (-0.5)) < 5.0 * neg_est.stderr);

  // Variance of the rescaled estimator stays below ||f||_1^2.
  const double var = est.stderr * est.stderr * 100000.0;
  CHECK(var <= f.l1_norm() * f.l1_norm() * 1.1);
}

TEST_CASE("functional_from_moments") {
  moments::MomentEstimates est;
  est.k = 4;
  est.estimates = {0.6067761335170370, 0.4101642002755550, 0.2908647716199790};
  est.stderrs = {0.001, 0.002, 0.003};

  CHECK(qsf::functional_from_moments(est, qsf::PolynomialFunctional({1.0})) == 1.0);

  double bound = 0.0;
  const double v = qsf::functional_from_moments(
      est, qsf::PolynomialFunctional({0.0, 2.0, -1.0}), &bound);
  CHECK(v == doctest::Approx(2.0 * 0.6067761335170370 - 0.4101642002755550)
                 .epsilon(1e-12));
  CHECK(v == doctest::Approx(0.803388).epsilon(1e-5));
  CHECK(bound == doctest::Approx(2.0 * 0.001 + 0.002).epsilon(1e-12));

  CHECK_THROWS_AS(qsf::functional_from_moments(
                      est, qsf::PolynomialFunctional({0, 0, 0, 0, 1.0})),
                  ConfigError);
}

TEST_CASE("parallel multi-functional circuit is exactly unbiased") {
  // Corollary's k > n_f branch: shared fresh copy per round, per-functional
  // ancilla and control register. Accepted iff the exact oracle matches.
  const auto rho = shared_state(sim::MixedState::random_mixed(1, 321));

  SUBCASE("two purity-style functionals, k = 2") {
    const std::vector<qsf::PolynomialFunctional> fs = {
        qsf::PolynomialFunctional({0.0, 1.0}), qsf::PolynomialFunctional({0.0, 1.0})};
    const auto c = qsf::build_parallel_circuit(fs, rho);
    const auto exact = moments::exact_moments(*rho, 2);
    for (int i = 0; i < 2; ++i) {
      const double v = sim::signed_expectation(c, std::vector<int>{i});
      CHECK(std::abs(v - exact[0]) < 1e-9);
    }
  }

  SUBCASE("mixed degrees and signs, k up to 4") {
    const std::vector<qsf::PolynomialFunctional> fs = {
        qsf::PolynomialFunctional({0.0, 1.0, 0.0, 0.0}),   // Tr(rho^2)
        qsf::PolynomialFunctional({0.0, 0.0, 1.0}),        // Tr(rho^3)
        qsf::PolynomialFunctional({0.1, -0.4, 0.2, 0.3}),  // mixed signs
    };
    const auto c = qsf::build_parallel_circuit(fs, rho);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const double raw = sim::signed_expectation(c, std::vector<int>{static_cast<int>(i)});
      const double v =
          (fs[i].majority_negative() ? -1.0 : 1.0) * fs[i].l1_norm() * raw;
      const double expected = exact_functional(fs[i], *rho);
      CHECK(std::abs(v - expected) < 1e-9);
    }
  }
}

TEST_CASE("multi-functional strategies agree and match the exact values") {
  const auto rho = gibbs_z(0.5);
  const std::vector<qsf::PolynomialFunctional> fs = {
      qsf::PolynomialFunctional({0.0, 1.0, 0.0}),  // Tr(rho^2)
      qsf::PolynomialFunctional({0.0, 0.0, 1.0}),  // Tr(rho^3)
  };
  const auto reuse = qsf::estimate_multiple_functionals(
      rho, fs, 100000, 31, qsf::MultiStrategy::kMomentReuse);
  const auto parallel = qsf::estimate_multiple_functionals(
      rho, fs, 100000, 32, qsf::MultiStrategy::kParallelCircuit);
  const std::vector<double> expected = {0.6067761335170370, 0.4101642002755550};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    CHECK(std::abs(reuse[i].value - expected[i]) < 5.0 * 4e-3);
    const double sigma = std::max(parallel[i].stderr, 1e-4);
    CHECK(std::abs(parallel[i].value - expected[i]) < 5.0 * sigma);
    const double combined = std::sqrt(parallel[i].stderr * parallel[i].stderr +
                                      reuse[i].stderr * reuse[i].stderr) +
                            1e-12;
    CHECK(std::abs(parallel[i].value - reuse[i].value) < 5.0 * combined);
  }

  // Degree-1 functionals are constant.
  const std::vector<qsf::PolynomialFunctional> ones = {
      qsf::PolynomialFunctional({1.0}), qsf::PolynomialFunctional({1.0}),
      qsf::PolynomialFunctional({1.0})};
  for (const auto& e : qsf::estimate_multiple_functionals(
           rho, ones, 100, 1, qsf::MultiStrategy::kMomentReuse)) {
    CHECK(e.value == 1.0);
  }

  // Cap guard points the caller to moment reuse.
  const std::vector<qsf::PolynomialFunctional> many(
      8, qsf::PolynomialFunctional({0.0, 1.0, 0.0, 1.0}));
  CHECK_THROWS_AS(qsf::estimate_multiple_functionals(
                      shared_state(sim::MixedState::random_mixed(2, 1)), many,
                      10, 1, qsf::MultiStrategy::kParallelCircuit),
                  BudgetError);
}
