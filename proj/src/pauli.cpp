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

#include "qsm/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "qsm/errors.hpp"
#include "qsm/rng.hpp"

namespace qsm::obs {

using sim::Complex;
using sim::Matrix;
using sim::Vector;

namespace {

constexpr int kDenseCapQubits = 8;

void validate_string(const std::string& s) {
  for (char ch : s) {
    if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
      throw ConfigError("invalid Pauli character '" + std::string(1, ch) + "'");
    }
  }
}

Eigen::Matrix2cd pauli_2x2(char ch) {
  Eigen::Matrix2cd p;
  switch (ch) {
    case 'I':
      p << 1, 0, 0, 1;
      break;
    case 'X':
      p << 0, 1, 1, 0;
      break;
    case 'Y':
      p << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    default:
      p << 1, 0, 0, -1;
      break;
  }
  return p;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

PauliObservable::PauliObservable(int qubits, std::vector<PauliTerm> terms)
    : qubits_(qubits), terms_(std::move(terms)) {
  if (qubits_ < 1) throw ConfigError("observable needs at least one qubit");
  if (terms_.empty()) throw ConfigError("observable needs at least one term");
  std::set<std::string> seen;
  for (const auto& t : terms_) {
    if (static_cast<int>(t.paulis.size()) != qubits_) {
      throw ConfigError("Pauli string length does not match qubit count");
    }
    validate_string(t.paulis);
    if (!seen.insert(t.paulis).second) {
      throw ConfigError("duplicate Pauli string '" + t.paulis + "'");
    }
  }
  std::vector<double> weights;
  weights.reserve(terms_.size());
  for (const auto& t : terms_) {
    l1_norm_ += std::abs(t.coefficient);
    weights.push_back(std::abs(t.coefficient));
    signs_.push_back(t.coefficient > 0 ? 1 : (t.coefficient < 0 ? -1 : 0));
  }
  if (l1_norm_ <= 0.0) throw ConfigError("observable has zero weight");
  weight_cdf_ = cumulative(weights);
}

PauliObservable PauliObservable::parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<PauliTerm> terms;
  int qubits = -1;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double coeff;
    std::string paulis;
    if (!(ls >> coeff >> paulis)) {
      throw ConfigError("malformed observable line: '" + line + "'");
    }
    std::string extra;
    if (ls >> extra) throw ConfigError("trailing tokens on observable line: '" + line + "'");
    if (qubits < 0) {
      qubits = static_cast<int>(paulis.size());
    } else if (static_cast<int>(paulis.size()) != qubits) {
      throw ConfigError("observable lines have inconsistent string lengths");
    }
    terms.push_back({coeff, paulis});
  }
  if (terms.empty()) throw ConfigError("observable file has no terms");
  return PauliObservable(qubits, std::move(terms));
}

std::string PauliObservable::to_text() const {
  std::ostringstream out;
  for (const auto& t : terms_) {
    out << t.coefficient << ' ' << t.paulis << '\n';
  }
  return out.str();
}

PauliObservable PauliObservable::identity(int qubits, double coefficient) {
  return PauliObservable(qubits, {{coefficient, std::string(qubits, 'I')}});
}

PauliObservable PauliObservable::single(int qubits, const std::string& paulis,
                                        double coefficient) {
  return PauliObservable(qubits, {{coefficient, paulis}});
}

PauliObservable PauliObservable::random(int qubits, int term_count,
                                        std::uint64_t seed) {
  ShotRng rng(seed, 7);
  std::set<std::string> used;
  std::vector<PauliTerm> terms;
  const char alphabet[4] = {'I', 'X', 'Y', 'Z'};
  while (static_cast<int>(terms.size()) < term_count) {
    std::string s(static_cast<std::size_t>(qubits), 'I');
    for (auto& ch : s) ch = alphabet[rng.next_u64() & 3];
    if (!used.insert(s).second) continue;
    terms.push_back({2.0 * rng.uniform() - 1.0, s});
  }
  return PauliObservable(qubits, std::move(terms));
}

const Matrix& PauliObservable::dense() const {
  if (dense_.size() == 0) {
    if (qubits_ > kDenseCapQubits) {
      throw BudgetError("dense observable matrix exceeds the qubit cap");
    }
    const Eigen::Index d = Eigen::Index{1} << qubits_;
    dense_ = Matrix::Zero(d, d);
    for (const auto& t : terms_) {
      dense_ += t.coefficient * pauli_string_matrix(t.paulis);
    }
  }
  return dense_;
}

double PauliObservable::spectral_norm() const {
  if (spectral_norm_ < 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(dense(), Eigen::EigenvaluesOnly);
    spectral_norm_ = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return spectral_norm_;
}

Matrix pauli_string_matrix(const std::string& paulis) {
  validate_string(paulis);
  Matrix out = Matrix::Identity(1, 1);
  // Character c lands on bit c: later (higher) characters become the high
  // kron factor.
  for (char ch : paulis) out = kron(pauli_2x2(ch), out);
  return out;
}

void apply_pauli_string(const std::string& paulis, const Vector& in, Vector& out) {
  std::uint64_t flip = 0, ymask = 0, zmask = 0;
  int y_count = 0;
  for (std::size_t c = 0; c < paulis.size(); ++c) {
    const std::uint64_t bit = 1ULL << c;
    switch (paulis[c]) {
      case 'X':
        flip |= bit;
        break;
      case 'Y':
        flip |= bit;
        ymask |= bit;
        ++y_count;
        break;
      case 'Z':
        zmask |= bit;
        break;
      default:
        break;
    }
  }
  const Complex i_pow[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                            Complex(0, -1)};
  const Complex base = i_pow[y_count & 3];
  out.resize(in.size());
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(in.size()); ++i) {
    Complex phase = base;
    if ((std::popcount(i & ymask) + std::popcount(i & zmask)) & 1) phase = -phase;
    out[static_cast<Eigen::Index>(i ^ flip)] =
        phase * in[static_cast<Eigen::Index>(i)];
  }
}

NormReport norm_report(const PauliObservable& o) {
  const double spectral = o.spectral_norm();
  const double s = o.l1_norm();
  const double upper = std::sqrt(static_cast<double>(o.term_count())) * spectral;
  constexpr double kSlack = 1e-9;
  if (!(spectral <= s + kSlack && s <= upper + kSlack)) {
    throw NumericalError("Pauli norm chain violated");
  }
  return {spectral, s, upper};
}

LcuUnitary lcu_unitary(const PauliObservable& o) {
  const double norm = o.spectral_norm();
  if (norm <= 0.0) throw ConfigError("observable has zero spectral norm");
  const Matrix normalized = o.dense() / norm;
  Eigen::SelfAdjointEigenSolver<Matrix> es(normalized);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd w = es.eigenvalues();
  Eigen::VectorXcd diag(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double root = std::sqrt(std::max(0.0, 1.0 - w[i] * w[i]));
    diag[i] = Complex(w[i], root);
  }
  LcuUnitary out;
  out.spectral_norm = norm;
  out.unitary = es.eigenvectors() * diag.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

}  // namespace qsm::obs
