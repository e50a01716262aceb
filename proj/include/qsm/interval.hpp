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

#include "qsm/rng.hpp"

namespace qsm::apps {

struct NoisyMoments {
  std::vector<double> values;  // m_2 .. m_k
  double epsilon = 0.0;        // |hat m_j - m_j| <= epsilon
};

struct EigenInterval {
  double lower = 0.0;
  double upper = 1.0;
  bool inconsistent = false;  // lower crossed upper; degenerate midpoint
};

// Interval for the largest eigenvalue from noisy moments:
//   lower = max of ratio bounds (m_{j+1}-e)/(m_j+e) and root bounds
//           (m_j-e)^{1/(j-1)};
//   upper = min over j of (m_j+e)^{1/j};
// terms with nonpositive radicand or numerator are skipped, final clamp to
// [0,1]. Throws NumericalError when no bound term is usable.
EigenInterval lambda_max_interval(const NoisyMoments& noisy);

// hat m_j = m_j + sgn(xi) min(epsilon, |xi|), xi ~ N(0, epsilon^2/4).
NoisyMoments perturb_moments(const std::vector<double>& exact_moments,
                             double epsilon, ShotRng& rng);

// Spectrum of `rank` eigenvalues from Dirichlet(1,...,1).
std::vector<double> dirichlet_spectrum(int rank, ShotRng& rng);

struct IntervalStudyRow {
  int rank = 0;
  double epsilon = 0.0;
  double mean_width = 0.0;
  double sd_width = 0.0;
  double containment = 0.0;  // fraction of trials with lambda_max inside
};

// Monte Carlo sweep: per (rank, epsilon) draws `trials` Dirichlet spectra,
// perturbs moments up to order k and records interval widths and containment.
std::vector<IntervalStudyRow> interval_study(const std::vector<int>& ranks,
                                             const std::vector<double>& eps_grid,
                                             int trials, int k,
                                             std::uint64_t seed, int threads = 1);

}  // namespace qsm::apps
