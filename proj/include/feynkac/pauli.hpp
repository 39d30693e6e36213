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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "feynkac/errors.hpp"

namespace feynkac {

using Complex = std::complex<double>;

/// Tensor product of single-qubit Pauli operators, e.g. "IXZZ". Qubit 1 is
/// the first character and the most significant index bit, so the dense form
/// is P_1 (x) P_2 (x) ... (x) P_n in that order.
class PauliString {
 public:
  explicit PauliString(std::string ops);
  static PauliString identity(int qubits);

  int qubits() const { return static_cast<int>(ops_.size()); }
  const std::string& ops() const { return ops_; }

  /// Bit mask (in index-bit space) of qubits carrying X or Y.
  std::uint64_t flip_mask() const { return flip_mask_; }

  /// Phase picked up when acting on basis state |i>: the image is
  /// |i XOR flip_mask> with this coefficient.
  Complex phase(std::uint64_t basis_index) const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd matrix() const;

  bool operator==(const PauliString& other) const { return ops_ == other.ops_; }

 private:
  std::string ops_;
  std::uint64_t flip_mask_ = 0;  // X or Y qubits
  std::uint64_t sign_mask_ = 0;  // Y or Z qubits: contribute (-1)^{bit}
  int y_count_ = 0;
};

/// Weighted sum of Pauli strings.
class PauliSum {
 public:
  explicit PauliSum(int qubits) : qubits_(qubits) {}

  int qubits() const { return qubits_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::pair<Complex, PauliString>>& terms() const {
    return terms_;
  }

  void add(Complex coeff, PauliString string);

  /// Merges duplicate strings and drops coefficients below `prune`.
  PauliSum canonicalized(double prune = 1e-13) const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd matrix() const;

  /// [{"coeff":[re,im],"string":"IXZZ"}, ...]
  std::string to_json() const;
  static PauliSum from_json(const std::string& text);

 private:
  int qubits_;
  std::vector<std::pair<Complex, PauliString>> terms_;
};

/// The weighted-projector diagonal diag(0, 1, ..., 2^n - 1) as a Pauli sum
/// with exactly n + 1 terms.
PauliSum index_diagonal(int qubits);

/// Hilbert-Schmidt projection of a dense operator onto the Pauli basis;
/// coefficients below `prune` are dropped. Guarded to n <= 8.
PauliSum pauli_decompose(const Eigen::MatrixXcd& op, int qubits,
                         double prune = 1e-13);

/// Dense matrix of a Pauli sum (alias for PauliSum::matrix, test support).
Eigen::MatrixXcd reconstruct(const PauliSum& sum);

}  // namespace feynkac
