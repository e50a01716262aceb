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

#include <string>

#include "qsm/state.hpp"

namespace qsm {

// State preset strings:
//   pure-zero:m            |0...0> on m qubits
//   max-mixed:m            I / 2^m
//   gibbs-z:beta           Gibbs state of H = Z
//   heisenberg-gibbs:n,beta[,J,h]
//   dirichlet:rank,seed    diagonal state with a Dirichlet(1,...,1) spectrum
//   file:path              state JSON file
// Throws ConfigError on malformed specs.
sim::MixedState parse_state_preset(const std::string& spec);

}  // namespace qsm
