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
#include "qsm/heisenberg.hpp"
#include "qsm/oracle.hpp"
#include "qsm/statevector.hpp"
#include "qsm/weighted.hpp"
#include "testutil.hpp"

using namespace qsm;
using test::gibbs_z;
using test::shared_state;

namespace {

// Slots whose signed product estimates Tr(O rho^{j+1}) in the weighted chain:
// the readout slot plus the last j chain slots.
std::vector<int> weighted_slots(int k, int j) {
  std::vector<int> slots{k - 1};
  for (int s = k - 1 - j; s <= k - 2; ++s) slots.push_back(s);
  return slots;
}

}  // namespace

TEST_CASE("observable parsing and norms") {
  const auto o = obs::PauliObservable::parse_text("1.0 XX\n-0.5 ZI\n# comment\n\n");
  CHECK(o.qubits() == 2);
  CHECK(o.term_count() == 2);
  CHECK(o.l1_norm() == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_THROWS_AS(obs::PauliObservable::parse_text("1.0 XQ\n"), ConfigError);
  CHECK_THROWS_AS(obs::PauliObservable::parse_text("1.0 XX\n2.0 XX\n"), ConfigError);
  CHECK_THROWS_AS(obs::PauliObservable::parse_text("1.0 XX\n1.0 XXX\n"), ConfigError);
  CHECK_THROWS_AS(obs::PauliObservable::parse_text(""), ConfigError);

  const auto z = obs::PauliObservable::single(1, "Z");
  const auto rz = obs::norm_report(z);
  CHECK(rz.spectral == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rz.pauli_l1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rz.sqrt_terms_spectral == doctest::Approx(1.0).epsilon(1e-12));

  const obs::PauliObservable xz(1, {{1.0, "X"}, {1.0, "Z"}});
  const auto rxz = obs::norm_report(xz);
  CHECK(rxz.spectral == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rxz.pauli_l1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rxz.sqrt_terms_spectral == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Heisenberg chain Hamiltonian") {
  const auto h2 = apps::heisenberg_hamiltonian({.sites = 2});
  Eigen::SelfAdjointEigenSolver<sim::Matrix> es(h2.dense());
  const Eigen::VectorXd spectrum = es.eigenvalues();
  CHECK(spectrum[0] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(spectrum[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(spectrum[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectrum[3] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(apps::ground_state_energy(h2) == doctest::Approx(-3.0).epsilon(1e-12));

  const auto r2 = obs::norm_report(h2);
  CHECK(r2.spectral == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r2.pauli_l1 == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r2.sqrt_terms_spectral == doctest::Approx(3.0 * std::sqrt(5.0)).epsilon(1e-12));
  CHECK(r2.sqrt_terms_spectral == doctest::Approx(6.7082).epsilon(1e-4));

  const auto h3_free = apps::heisenberg_hamiltonian({.sites = 3, .field = 0.0});
  CHECK(h3_free.term_count() == 6);
  CHECK(h3_free.l1_norm() == doctest::Approx(6.0).epsilon(1e-12));

  const auto h4 = apps::heisenberg_hamiltonian({.sites = 4});
  CHECK(apps::ground_state_energy(h4) == doctest::Approx(-6.464).epsilon(1e-3));

  // Norm chain across sizes.
  for (int n = 2; n <= 4; ++n) {
    const auto h = apps::heisenberg_hamiltonian({.sites = n});
    CHECK_NOTHROW(obs::norm_report(h));
  }
}

TEST_CASE("norm chain holds for random observables") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int m = 1 + static_cast<int>(seed % 2);
    const auto o = obs::PauliObservable::random(m, 2 + static_cast<int>(seed % 4),
                                                900 + seed);
    CHECK_NOTHROW(obs::norm_report(o));
  }
}

TEST_CASE("LCU unitary") {
  // O = Z: the square-root branch vanishes and U = Z.
  const auto uz = obs::lcu_unitary(obs::PauliObservable::single(1, "Z"));
  CHECK((uz.unitary - obs::pauli_string_matrix("Z")).cwiseAbs().maxCoeff() < 1e-12);

  // O = diag(1, 0.5) = 0.75 I + 0.25 Z.
  const obs::PauliObservable diag_o(1, {{0.75, "I"}, {0.25, "Z"}});
  const auto ud = obs::lcu_unitary(diag_o);
  CHECK(std::abs(ud.unitary(0, 0) - sim::Complex(1.0, 0.0)) < 1e-10);
  CHECK(std::abs(ud.unitary(1, 1) - sim::Complex(0.5, 0.8660254037844386)) < 1e-10);
  CHECK(std::abs(ud.unitary(0, 1)) < 1e-12);

  // O = (X+Z)/2: O'^2 = I, so U = O' = (X+Z)/sqrt(2).
  const obs::PauliObservable xz(1, {{0.5, "X"}, {0.5, "Z"}});
  const auto uxz = obs::lcu_unitary(xz);
  CHECK(uxz.spectral_norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  const sim::Matrix expected =
      (obs::pauli_string_matrix("X") + obs::pauli_string_matrix("Z")) / std::sqrt(2.0);
  CHECK((uxz.unitary - expected).cwiseAbs().maxCoeff() < 1e-10);

  // Reconstruction ||O|| (U + U^dag)/2 = O on random Hermitian observables.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int m = 1 + static_cast<int>(seed % 2);
    const auto o = obs::PauliObservable::random(m, 3, 500 + seed);
    const auto lcu = obs::lcu_unitary(o);
    const sim::Matrix u = lcu.unitary;
    CHECK((u * u.adjoint() - sim::Matrix::Identity(u.rows(), u.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    const sim::Matrix rebuilt = lcu.spectral_norm * 0.5 * (u + u.adjoint());
    CHECK((rebuilt - o.dense()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("weighted chain oracles are exactly unbiased for both schemes") {
  for (std::uint64_t seed : {71u, 72u, 73u}) {
    const auto rho = shared_state(sim::MixedState::random_mixed(1, seed));
    const auto o = obs::PauliObservable::random(1, 3, seed + 40);
    const int k = 4;
    const auto exact = obs::exact_weighted_moments(*rho, o, k);

    const auto pauli_circuit =
        obs::build_weighted_chain_circuit(rho, o, k, obs::Scheme::kPauli);
    const auto lcu_circuit =
        obs::build_weighted_chain_circuit(rho, o, k, obs::Scheme::kLcu);
    for (int j = 0; j <= k - 1; ++j) {
      const auto slots = weighted_slots(k, j);
      const double pauli_val =
          o.l1_norm() * sim::signed_expectation(pauli_circuit, slots);
      const double lcu_val =
          o.spectral_norm() * sim::signed_expectation(lcu_circuit, slots);
      CHECK(std::abs(pauli_val - exact[static_cast<std::size_t>(j)]) < 1e-9);
      CHECK(std::abs(lcu_val - exact[static_cast<std::size_t>(j)]) < 1e-9);
    }
  }
}

TEST_CASE("weighted moments: identity observable reduces to plain moments") {
  const auto rho = gibbs_z(0.5);
  const auto identity = obs::PauliObservable::identity(1);
  const auto wm = obs::estimate_weighted_moments(rho, identity, 3, 100000, 11,
                                                 obs::Scheme::kPauli);
  const std::vector<double> expected = {1.0, 0.6067761335170370, 0.4101642002755550};
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(wm.estimates[j] - expected[j]) < 5.0 * wm.stderrs[j] + 1e-9);
  }
}

TEST_CASE("weighted moments: Tr(Z rho^2) via both schemes") {
  const auto rho = gibbs_z(0.5);
  const auto z = obs::PauliObservable::single(1, "Z");
  const double expected = -0.4621171572600098;  // q^2 - p^2

  const auto pauli =
      obs::estimate_weighted_moments(rho, z, 2, 100000, 12, obs::Scheme::kPauli);
  const auto lcu =
      obs::estimate_weighted_moments(rho, z, 2, 100000, 13, obs::Scheme::kLcu);
  CHECK(std::abs(pauli.estimates[1] - expected) < 5.0 * pauli.stderrs[1]);
  CHECK(std::abs(lcu.estimates[1] - expected) < 5.0 * lcu.stderrs[1]);

  // Scheme agreement at combined five sigma.
  const double combined = std::sqrt(pauli.stderrs[1] * pauli.stderrs[1] +
                                    lcu.stderrs[1] * lcu.stderrs[1]);
  CHECK(std::abs(pauli.estimates[1] - lcu.estimates[1]) < 5.0 * combined);

  // Pauli single-shot variance stays below S^2 (here S = 1).
  const double var = pauli.stderrs[1] * pauli.stderrs[1] * 100000.0;
  CHECK(var <= z.l1_norm() * z.l1_norm() * 1.1);
}

TEST_CASE("weighted moments: Heisenberg Gibbs oracle equality") {
  const auto h = apps::heisenberg_hamiltonian({.sites = 2});
  const auto rho = shared_state(apps::gibbs_state(h, 0.5));
  const auto exact = obs::exact_weighted_moments(*rho, h, 2);

  const auto circuit =
      obs::build_weighted_chain_circuit(rho, h, 2, obs::Scheme::kPauli);
  const double oracle =
      h.l1_norm() * sim::signed_expectation(circuit, weighted_slots(2, 1));
  CHECK(std::abs(oracle - exact[1]) < 1e-9);

  // Dense-algebra cross-check of the same number.
  const sim::Matrix rho2 = rho->matrix() * rho->matrix();
  CHECK(exact[1] == doctest::Approx((h.dense() * rho2).trace().real()).epsilon(1e-12));
}

TEST_CASE("pauli variance within ten percent of the exact value") {
  const auto rho = gibbs_z(0.5);
  const auto z = obs::PauliObservable::single(1, "Z");
  const auto wm =
      obs::estimate_weighted_moments(rho, z, 2, 100000, 14, obs::Scheme::kPauli);
  // Single-shot values are +-S; Var = S^2 - Tr(Z rho^2)^2.
  const double exact_var = 1.0 - 0.4621171572600098 * 0.4621171572600098;
  const double emp_var = wm.stderrs[1] * wm.stderrs[1] * 100000.0;
  CHECK(emp_var == doctest::Approx(exact_var).epsilon(0.1));
}

TEST_CASE("weighted functionals") {
  const auto rho = gibbs_z(0.5);
  const auto z = obs::PauliObservable::single(1, "Z");

  // f(O, rho) = Tr(O rho) with O = Z -> -tanh(beta).
  const auto direct = obs::estimate_weighted_functionals(
      rho, z, {qsf::PolynomialFunctional({1.0})}, 100000, 15, obs::Scheme::kPauli);
  CHECK(std::abs(direct[0].value - (-std::tanh(0.5))) <
        5.0 * std::max(direct[0].error_bound, 1e-4));

  // f = Tr(O rho^2) - Tr(O rho) with O = I -> Tr(rho^2) - 1.
  const auto identity = obs::PauliObservable::identity(1);
  const auto diff = obs::estimate_weighted_functionals(
      rho, identity, {qsf::PolynomialFunctional({-1.0, 1.0})}, 100000, 16,
      obs::Scheme::kPauli);
  CHECK(std::abs(diff[0].value - (0.6067761335170370 - 1.0)) <
        5.0 * std::max(diff[0].error_bound, 1e-4));

  // All-zero coefficients give zeros.
  const auto zeros = obs::estimate_weighted_functionals(
      rho, z, {qsf::PolynomialFunctional({0.0, 0.0})}, 1000, 17,
      obs::Scheme::kPauli);
  CHECK(zeros[0].value == 0.0);

  // Degree above the estimated order is rejected.
  obs::WeightedMoments wm;
  wm.k = 2;
  wm.estimates = {0.1, 0.2};
  wm.stderrs = {0.0, 0.0};
  CHECK_THROWS_AS(
      obs::contract_functionals(wm, {qsf::PolynomialFunctional({0, 0, 1.0})}),
      ConfigError);
}

TEST_CASE("lcu scheme respects the dense cap") {
  const int original = sim::qubit_cap();
  sim::set_qubit_cap(4);
  const auto rho = shared_state(sim::MixedState::random_mixed(2, 3));
  const auto o = obs::PauliObservable::random(2, 2, 5);
  CHECK_THROWS_AS(obs::estimate_weighted_moments(rho, o, 2, 10, 1,
                                                 obs::Scheme::kLcu),
                  BudgetError);
  sim::set_qubit_cap(original);
}
