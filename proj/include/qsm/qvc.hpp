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

#pragma once

#include <cstdint>
#include <vector>

#include "qsm/heisenberg.hpp"
#include "qsm/pauli.hpp"
#include "qsm/state.hpp"

namespace qsm::apps {

enum class QvcScheme { kChain, kSwapBaseline };

struct QvcResult {
  std::vector<int> orders;            // k' = 1..k
  std::vector<double> mean_energy;    // mean over valid runs
  std::vector<double> sigma_energy;   // run-to-run sample sd
  std::vector<double> mad;            // mean |E_run - exact|
  std::vector<double> exact_energy;   // Tr(H rho^k') / Tr(rho^k')
  std::vector<int> invalid_runs;      // zero-denominator runs, per order
  std::int64_t shots = 0;
  int runs = 0;
};

// Cooled-energy estimates for all orders k' <= k.
//   kChain: one weighted reset chain per run; numerators S sgn m_p (suffix x)
//           and denominators (suffix x) share every shot.
//   kSwapBaseline: independent generalized SWAP tests per k', shot counts
//           normalized so that total prepared copies match the chain run
//           (chain: shots * k copies; baseline: n_b sum k' = shots * k).
QvcResult virtual_cooling_estimate(const sim::MixedState& rho,
                                   const obs::PauliObservable& hamiltonian, int k,
                                   std::int64_t shots, int runs,
                                   std::uint64_t seed, QvcScheme scheme,
                                   int threads = 1);

// Baseline shots per order under the equal-copy rule: 2 shots / (k+1).
std::int64_t baseline_shots_per_order(std::int64_t chain_shots, int k);

struct ScalingPoint {
  int k = 0;
  std::int64_t shots = 0;
  double mean_abs_error = 0.0;
};

struct ScalingResult {
  int sites = 0;
  std::vector<ScalingPoint> points;
  std::vector<int> orders;
  std::vector<double> slopes;  // least-squares slope of log|dE| vs log N per k
};

// Error-scaling study: chain runs across the shot grid, absolute energy error
// against the exact cooled energy, slope of the log-log fit per order.
ScalingResult error_scaling_study(const HeisenbergSpec& spec, double beta,
                                  int k_max,
                                  const std::vector<std::int64_t>& shot_grid,
                                  int runs, std::uint64_t seed, int threads = 1);

}  // namespace qsm::apps
