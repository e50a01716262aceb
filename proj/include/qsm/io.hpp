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
#include <vector>

#include "qsm/state.hpp"

namespace qsm::io {

// Deterministic float formatting shared by every report writer, so replayed
// runs are byte-identical.
std::string format_double(double value);

// CSV report with '#'-prefixed provenance lines (tool version + config),
// a header row and value rows.
class CsvReport {
 public:
  CsvReport(std::string command_line, std::vector<std::string> columns);

  void add_row(const std::vector<std::string>& cells);
  void add_numeric_row(const std::vector<double>& cells);
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::string command_line_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// State JSON: {"m": int, "matrix": [[[re, im], ...], ...]} or
// {"preset": "gibbs-z", "beta": 0.5}.
sim::MixedState read_state_json(const std::string& text);
std::string write_state_json(const sim::MixedState& state);

}  // namespace qsm::io
