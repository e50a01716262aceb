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

#include "qsm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qsm/errors.hpp"
#include "qsm/presets.hpp"
#include "qsm/version.hpp"

namespace qsm::io {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

CsvReport::CsvReport(std::string command_line, std::vector<std::string> columns)
    : command_line_(std::move(command_line)), columns_(std::move(columns)) {}

void CsvReport::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw ConfigError("CSV row width does not match the header");
  }
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  rows_.push_back(std::move(row));
}

void CsvReport::add_numeric_row(const std::vector<double>& cells) {
  std::vector<std::string> formatted;
  formatted.reserve(cells.size());
  for (double v : cells) formatted.push_back(format_double(v));
  add_row(formatted);
}

std::string CsvReport::to_string() const {
  std::string out;
  out += "# qsm ";
  out += kVersion;
  out += "\n# ";
  out += command_line_;
  out += "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += "\n";
  for (const auto& row : rows_) {
    out += row;
    out += "\n";
  }
  return out;
}

void CsvReport::write(const std::string& path) const {
  write_text_file(path, to_string());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file '" + path + "'");
  out << content;
}

sim::MixedState read_state_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("state JSON parse error: ") + e.what());
  }
  if (j.contains("preset")) {
    std::string spec = j.at("preset").get<std::string>();
    if (j.contains("beta")) {
      spec += ":" + format_double(j.at("beta").get<double>());
    }
    return parse_state_preset(spec);
  }
  if (!j.contains("m") || !j.contains("matrix")) {
    throw ConfigError("state JSON needs either 'preset' or 'm' and 'matrix'");
  }
  const int m = j.at("m").get<int>();
  const auto& rows = j.at("matrix");
  const Eigen::Index d = Eigen::Index{1} << m;
  if (static_cast<Eigen::Index>(rows.size()) != d) {
    throw ConfigError("state JSON matrix does not match dimension 2^m");
  }
  sim::Matrix rho(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != d) {
      throw ConfigError("state JSON matrix row has the wrong length");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto& cell = row.at(static_cast<std::size_t>(c));
      if (cell.size() != 2) throw ConfigError("matrix entries must be [re, im]");
      rho(r, c) = sim::Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return sim::MixedState::from_matrix(rho);
}

std::string write_state_json(const sim::MixedState& state) {
  nlohmann::json j;
  j["m"] = state.qubits();
  nlohmann::json rows = nlohmann::json::array();
  const auto& rho = state.matrix();
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      row.push_back({rho(r, c).real(), rho(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j.dump();
}

}  // namespace qsm::io
