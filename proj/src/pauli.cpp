// Copyright 2026 The feynkac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "feynkac/pauli.hpp"

#include <bit>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

namespace feynkac {

namespace {
constexpr Complex kImag(0.0, 1.0);

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}
}  // namespace

PauliString::PauliString(std::string ops) : ops_(std::move(ops)) {
  require(!ops_.empty() && ops_.size() <= 63, "pauli string: bad length");
  const int n = qubits();
  for (int q = 0; q < n; ++q) {
    const char c = ops_[q];
    const std::uint64_t bit = 1ULL << (n - 1 - q);  // qubit 1 is the MSB
    switch (c) {
      case 'I': break;
      case 'X': flip_mask_ |= bit; break;
      case 'Y': flip_mask_ |= bit; sign_mask_ |= bit; ++y_count_; break;
      case 'Z': sign_mask_ |= bit; break;
      default:
        throw ValidationError("pauli string: invalid character '" +
                              std::string(1, c) + "'");
    }
  }
}

PauliString PauliString::identity(int qubits) {
  return PauliString(std::string(qubits, 'I'));
}

Complex PauliString::phase(std::uint64_t basis_index) const {
  // Y contributes i * (-1)^bit, Z contributes (-1)^bit.
  const int parity = std::popcount(basis_index & sign_mask_) & 1;
  Complex p = i_power(y_count_);
  return parity ? -p : p;
}

Eigen::VectorXcd PauliString::apply(const Eigen::VectorXcd& v) const {
  const std::uint64_t dim = 1ULL << qubits();
  require(static_cast<std::uint64_t>(v.size()) == dim,
          "pauli apply: dimension mismatch");
  Eigen::VectorXcd out(v.size());
  for (std::uint64_t i = 0; i < dim; ++i)
    out(i ^ flip_mask_) = phase(i) * v(i);
  return out;
}

Eigen::MatrixXcd PauliString::matrix() const {
  const std::uint64_t dim = 1ULL << qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t i = 0; i < dim; ++i) m(i ^ flip_mask_, i) = phase(i);
  return m;
}

void PauliSum::add(Complex coeff, PauliString string) {
  require(string.qubits() == qubits_, "pauli sum: qubit count mismatch");
  terms_.emplace_back(coeff, std::move(string));
}

PauliSum PauliSum::canonicalized(double prune) const {
  std::map<std::string, Complex> merged;
  for (const auto& [coeff, str] : terms_) merged[str.ops()] += coeff;
  PauliSum out(qubits_);
  for (const auto& [ops, coeff] : merged)
    if (std::abs(coeff) > prune) out.add(coeff, PauliString(ops));
  return out;
}

Eigen::VectorXcd PauliSum::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& [coeff, str] : terms_) out += coeff * str.apply(v);
  return out;
}

Eigen::MatrixXcd PauliSum::matrix() const {
  const std::uint64_t dim = 1ULL << qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [coeff, str] : terms_) m += coeff * str.matrix();
  return m;
}

std::string PauliSum::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [coeff, str] : terms_) {
    arr.push_back({{"coeff", {coeff.real(), coeff.imag()}},
                   {"string", str.ops()}});
  }
  return arr.dump();
}

PauliSum PauliSum::from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  require(arr.is_array() && !arr.empty(), "pauli sum json: expected array");
  std::string first = arr.at(0).at("string").get<std::string>();
  PauliSum out(static_cast<int>(first.size()));
  for (const auto& item : arr) {
    auto c = item.at("coeff");
    out.add(Complex(c.at(0).get<double>(), c.at(1).get<double>()),
            PauliString(item.at("string").get<std::string>()));
  }
  return out;
}

PauliSum index_diagonal(int qubits) {
  require(qubits >= 1, "index_diagonal: need at least one qubit");
  PauliSum sum(qubits);
  const double half_top = 0.5 * (std::pow(2.0, qubits) - 1.0);
  sum.add(Complex(half_top, 0.0), PauliString::identity(qubits));
  for (int i = 1; i <= qubits; ++i) {
    std::string ops(qubits, 'I');
    ops[i - 1] = 'Z';
    sum.add(Complex(-std::pow(2.0, qubits - i - 1), 0.0), PauliString(ops));
  }
  return sum;
}

PauliSum pauli_decompose(const Eigen::MatrixXcd& op, int qubits,
                         double prune) {
  const std::uint64_t dim = 1ULL << qubits;
  require(op.rows() == op.cols() &&
              static_cast<std::uint64_t>(op.rows()) == dim,
          "pauli_decompose: operator dimension is not 2^n");
  require(qubits <= 8, "pauli_decompose: guarded to n <= 8");

  PauliSum out(qubits);
  std::string ops(qubits, 'I');
  const char alphabet[4] = {'I', 'X', 'Y', 'Z'};
  const std::uint64_t strings = 1ULL << (2 * qubits);
  for (std::uint64_t code = 0; code < strings; ++code) {
    std::uint64_t c = code;
    for (int q = 0; q < qubits; ++q) {
      ops[q] = alphabet[c & 3];
      c >>= 2;
    }
    PauliString pauli(ops);
    // Tr(P . op) = sum_j phase(j) op(j, j ^ flip): P is Hermitian.
    Complex trace(0.0, 0.0);
    const std::uint64_t flip = pauli.flip_mask();
    for (std::uint64_t j = 0; j < dim; ++j)
      trace += pauli.phase(j) * op(j, j ^ flip);
    Complex coeff = trace / static_cast<double>(dim);
    if (std::abs(coeff) > prune) out.add(coeff, std::move(pauli));
  }
  return out;
}

Eigen::MatrixXcd reconstruct(const PauliSum& sum) { return sum.matrix(); }

}  // namespace feynkac
