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

#include "qsm/presets.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "qsm/errors.hpp"
#include "qsm/heisenberg.hpp"
#include "qsm/interval.hpp"
#include "qsm/io.hpp"
#include "qsm/rng.hpp"

namespace qsm {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError("malformed " + what + " '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ConfigError(what + " must be an integer");
  return i;
}

}  // namespace

sim::MixedState parse_state_preset(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);

  if (name == "pure-zero") {
    const int m = parse_int(args, "qubit count");
    if (m < 1 || m > 10) throw ConfigError("pure-zero qubit count out of range");
    return sim::MixedState::pure_zero(m);
  }
  if (name == "max-mixed") {
    const int m = parse_int(args, "qubit count");
    if (m < 1 || m > 10) throw ConfigError("max-mixed qubit count out of range");
    return sim::MixedState::maximally_mixed(m);
  }
  if (name == "gibbs-z") {
    const double beta = parse_number(args, "beta");
    const double z = std::exp(-beta) + std::exp(beta);
    Eigen::VectorXd probs(2);
    probs << std::exp(-beta) / z, std::exp(beta) / z;
    return sim::MixedState::diagonal(probs);
  }
  if (name == "heisenberg-gibbs") {
    const auto parts = split(args, ',');
    if (parts.size() < 2 || parts.size() > 4) {
      throw ConfigError("heisenberg-gibbs needs n,beta[,J,h]");
    }
    apps::HeisenbergSpec hs;
    hs.sites = parse_int(parts[0], "site count");
    const double beta = parse_number(parts[1], "beta");
    if (parts.size() > 2) hs.coupling = parse_number(parts[2], "coupling J");
    if (parts.size() > 3) hs.field = parse_number(parts[3], "field h");
    return apps::gibbs_state(apps::heisenberg_hamiltonian(hs), beta);
  }
  if (name == "dirichlet") {
    const auto parts = split(args, ',');
    if (parts.size() != 2) throw ConfigError("dirichlet needs rank,seed");
    const int rank = parse_int(parts[0], "rank");
    if (rank < 1 || rank > 1024) throw ConfigError("dirichlet rank out of range");
    const auto seed = static_cast<std::uint64_t>(parse_number(parts[1], "seed"));
    ShotRng rng(seed, 0);
    const auto spectrum = apps::dirichlet_spectrum(rank, rng);
    int m = 0;
    while ((1 << m) < rank) ++m;
    m = std::max(m, 1);
    Eigen::VectorXd probs = Eigen::VectorXd::Zero(Eigen::Index{1} << m);
    for (int i = 0; i < rank; ++i) probs[i] = spectrum[static_cast<std::size_t>(i)];
    return sim::MixedState::diagonal(probs);
  }
  if (name == "file") {
    if (args.empty()) throw ConfigError("file preset needs a path");
    return io::read_state_json(io::read_text_file(args));
  }
  throw ConfigError("unknown state preset '" + name + "'");
}

}  // namespace qsm
