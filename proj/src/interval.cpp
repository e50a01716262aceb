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

#include "qsm/interval.hpp"

#include <algorithm>
#include <cmath>

#include "qsm/errors.hpp"
#include "qsm/parallel.hpp"

namespace qsm::apps {

EigenInterval lambda_max_interval(const NoisyMoments& noisy) {
  const int k = static_cast<int>(noisy.values.size()) + 1;
  if (k < 2) throw ConfigError("need moments up to order >= 2");
  const double eps = noisy.epsilon;
  if (eps < 0.0) throw ConfigError("moment error bound must be nonnegative");
  const auto m = [&](int j) { return noisy.values[static_cast<std::size_t>(j - 2)]; };

  bool any_lower = false;
  bool any_upper = false;
  double lower = 0.0;
  double upper = 1.0;

  // Ratio bounds: lambda >= (m_{j+1} - e) / (m_j + e), 2 <= j <= k-1.
  for (int j = 2; j <= k - 1; ++j) {
    const double numer = m(j + 1) - eps;
    const double denom = m(j) + eps;
    if (numer <= 0.0 || denom <= 0.0) continue;
    lower = std::max(lower, numer / denom);
    any_lower = true;
  }
  // Root bounds: lambda >= (m_j - e)^{1/(j-1)}, 2 <= j <= k.
  for (int j = 2; j <= k; ++j) {
    const double radicand = m(j) - eps;
    if (radicand <= 0.0) continue;
    lower = std::max(lower, std::pow(radicand, 1.0 / (j - 1)));
    any_lower = true;
  }
  // Upper bounds: lambda <= (m_j + e)^{1/j}.
  for (int j = 2; j <= k; ++j) {
    const double radicand = m(j) + eps;
    if (radicand <= 0.0) continue;
    upper = std::min(upper, std::pow(radicand, 1.0 / j));
    any_upper = true;
  }
  if (!any_lower && !any_upper) {
    throw NumericalError("insufficient usable moments for any bound");
  }

  EigenInterval out;
  out.lower = std::clamp(lower, 0.0, 1.0);
  out.upper = std::clamp(upper, 0.0, 1.0);
  if (out.lower > out.upper) {
    const double mid = 0.5 * (out.lower + out.upper);
    out.lower = mid;
    out.upper = mid;
    out.inconsistent = true;
  }
  return out;
}

NoisyMoments perturb_moments(const std::vector<double>& exact_moments,
                             double epsilon, ShotRng& rng) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  NoisyMoments out;
  out.epsilon = epsilon;
  out.values.reserve(exact_moments.size());
  for (double m : exact_moments) {
    const double xi = rng.normal() * (epsilon / 2.0);
    const double shift = std::copysign(std::min(epsilon, std::abs(xi)), xi);
    out.values.push_back(m + shift);
  }
  return out;
}

std::vector<double> dirichlet_spectrum(int rank, ShotRng& rng) {
  // Dirichlet(1,...,1) = normalized unit exponentials.
  std::vector<double> spectrum(static_cast<std::size_t>(rank));
  double total = 0.0;
  for (auto& v : spectrum) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    v = -std::log(u);
    total += v;
  }
  for (auto& v : spectrum) v /= total;
  return spectrum;
}

std::vector<IntervalStudyRow> interval_study(const std::vector<int>& ranks,
                                             const std::vector<double>& eps_grid,
                                             int trials, int k, std::uint64_t seed,
                                             int threads) {
  struct CellStats {
    double width_sum = 0.0;
    double width_sq_sum = 0.0;
    std::int64_t contained = 0;
    std::int64_t count = 0;
  };
  struct Acc {
    std::vector<CellStats> cells;
  };

  std::vector<IntervalStudyRow> rows;
  for (const int rank : ranks) {
    const std::uint64_t rank_seed = derive_seed(seed, static_cast<std::uint64_t>(rank));
    // One spectrum and one set of standard normals per trial, shared across
    // the epsilon grid: the clipped perturbation scales linearly with eps, so
    // per-trial widths are monotone in eps and the grid reads as one curve.
    const auto acc = parallel_chunked<Acc>(
        trials, threads,
        [&](std::int64_t first, std::int64_t last, Acc& a) {
          a.cells.assign(eps_grid.size(), CellStats{});
          for (std::int64_t t = first; t < last; ++t) {
            ShotRng rng = shot_stream(rank_seed, static_cast<std::uint64_t>(t));
            const auto spectrum = dirichlet_spectrum(rank, rng);
            const double lambda_max =
                *std::max_element(spectrum.begin(), spectrum.end());
            std::vector<double> exact;
            for (int j = 2; j <= k; ++j) {
              double mj = 0.0;
              for (double lam : spectrum) mj += std::pow(lam, j);
              exact.push_back(mj);
            }
            std::vector<double> normals(exact.size());
            for (auto& z : normals) z = rng.normal();

            for (std::size_t e = 0; e < eps_grid.size(); ++e) {
              const double eps = eps_grid[e];
              NoisyMoments noisy;
              noisy.epsilon = eps;
              for (std::size_t j = 0; j < exact.size(); ++j) {
                const double xi = normals[j] * (eps / 2.0);
                noisy.values.push_back(
                    exact[j] + std::copysign(std::min(eps, std::abs(xi)), xi));
              }
              const auto interval = lambda_max_interval(noisy);
              const double width = interval.upper - interval.lower;
              auto& cell = a.cells[e];
              cell.width_sum += width;
              cell.width_sq_sum += width * width;
              if (interval.lower <= lambda_max && lambda_max <= interval.upper) {
                ++cell.contained;
              }
              ++cell.count;
            }
          }
        },
        [&](Acc& total, const Acc& part) {
          if (total.cells.empty()) total.cells.assign(eps_grid.size(), CellStats{});
          for (std::size_t e = 0; e < part.cells.size(); ++e) {
            total.cells[e].width_sum += part.cells[e].width_sum;
            total.cells[e].width_sq_sum += part.cells[e].width_sq_sum;
            total.cells[e].contained += part.cells[e].contained;
            total.cells[e].count += part.cells[e].count;
          }
        },
        256);

    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
      const auto& cell = acc.cells[e];
      IntervalStudyRow row;
      row.rank = rank;
      row.epsilon = eps_grid[e];
      const double n = static_cast<double>(cell.count);
      row.mean_width = cell.width_sum / n;
      row.sd_width = std::sqrt(
          std::max(0.0, cell.width_sq_sum / n - row.mean_width * row.mean_width));
      row.containment = static_cast<double>(cell.contained) / n;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qsm::apps
