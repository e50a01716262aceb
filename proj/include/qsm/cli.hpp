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
#include <string>
#include <vector>

namespace qsm::cli {

// Exit codes: 0 ok, 2 config error, 3 budget guard, 4 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitNumerical = 4;

struct ExperimentConfig {
  std::string subcommand;
  std::string state_spec;
  std::vector<std::string> coefficient_sets;  // one comma-separated list per f
  std::string observable_path;
  std::string scheme = "pauli";          // weighted: lcu | pauli
  std::string strategy = "moment-reuse"; // multi: moment-reuse | parallel-circuit
  int k = 4;
  double epsilon = 0.01;
  std::int64_t shots = 0;  // 0: moments derives it from required_shots
  int runs = 10;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool base_two = false;
  bool baseline = false;
  int sites = 4;
  double beta = 0.5;
  double coupling = 1.0;
  double field = 1.0;
  std::vector<int> ranks = {2, 4, 8, 16, 32};
  std::vector<double> eps_grid = {1e-2, 1e-3, 1e-4, 1e-5};
  int trials = 1000;
  std::vector<int> alphas = {2, 3, 4};
  std::vector<std::int64_t> shot_grid = {1000, 10000, 100000, 1000000};
  int threads = 0;  // 0: hardware concurrency
  double copy_budget = 1e10;
};

// Executes one experiment and writes its reports under config.out_dir.
// Returns an exit code; error text goes to stderr as a single line.
int run(const ExperimentConfig& config);

// Full argv entry point (parse + dispatch).
int main_entry(int argc, const char* const* argv);

}  // namespace qsm::cli
