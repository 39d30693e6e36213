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
#include <memory>
#include <string>
#include <vector>

#include "feynkac/generator.hpp"
#include "feynkac/grid.hpp"
#include "feynkac/pauli.hpp"

namespace feynkac {

/// A linear operator on an n-qubit register. Gate-level realizations are
/// carried as metadata in describe(); the dense matrix (or the fast apply)
/// is the numerical authority.
class LinearOp;
using LinearOpPtr = std::shared_ptr<const LinearOp>;

class LinearOp {
 public:
  virtual ~LinearOp() = default;
  virtual int qubits() const = 0;
  std::size_t dim() const { return std::size_t{1} << qubits(); }
  virtual Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const = 0;
  virtual Eigen::MatrixXcd dense() const;
  virtual std::string describe() const = 0;
  virtual LinearOpPtr adjoint() const = 0;
  /// Throws ValidationError when the operator fails a unitarity check.
  virtual void verify_unitary(double tol = 1e-10) const = 0;
};

/// Operator whose matrix has exactly one entry per column: column i holds
/// `phase[i]` at row `target[i]`. Closed under products and tensor products;
/// covers Pauli strings, cyclic shifts, multi-controlled phases and
/// diagonal operators.
class PhasedPermutationOp : public LinearOp {
 public:
  PhasedPermutationOp(int qubits, std::vector<std::size_t> target,
                      std::vector<Complex> phase, std::string description);

  int qubits() const override { return qubits_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const override;
  Eigen::MatrixXcd dense() const override;
  std::string describe() const override { return description_; }
  LinearOpPtr adjoint() const override;
  void verify_unitary(double tol = 1e-10) const override;

  const std::vector<std::size_t>& targets() const { return target_; }
  const std::vector<Complex>& phases() const { return phase_; }

 private:
  int qubits_;
  std::vector<std::size_t> target_;
  std::vector<Complex> phase_;
  std::string description_;
};

/// Tensor product of arbitrary single-qubit operators (qubit 1 first).
class FactoredOneQubitOp : public LinearOp {
 public:
  FactoredOneQubitOp(std::vector<Eigen::Matrix2cd> factors,
                     std::string description);

  int qubits() const override { return static_cast<int>(factors_.size()); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const override;
  std::string describe() const override { return description_; }
  LinearOpPtr adjoint() const override;
  void verify_unitary(double tol = 1e-10) const override;
  const Eigen::Matrix2cd& factor(int q) const { return factors_.at(q); }

 private:
  std::vector<Eigen::Matrix2cd> factors_;
  std::string description_;
};

/// Product A * B * ... (rightmost factor acts first).
class ComposedOp : public LinearOp {
 public:
  explicit ComposedOp(std::vector<LinearOpPtr> factors);

  int qubits() const override { return factors_.front()->qubits(); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const override;
  std::string describe() const override;
  LinearOpPtr adjoint() const override;
  void verify_unitary(double tol = 1e-10) const override;

 private:
  std::vector<LinearOpPtr> factors_;
};

/// Explicit dense operator (test support, desk scale).
class MatrixOp : public LinearOp {
 public:
  MatrixOp(Eigen::MatrixXcd m, std::string description);

  int qubits() const override { return qubits_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const override;
  Eigen::MatrixXcd dense() const override { return m_; }
  std::string describe() const override { return description_; }
  LinearOpPtr adjoint() const override;
  void verify_unitary(double tol = 1e-10) const override;

 private:
  Eigen::MatrixXcd m_;
  int qubits_;
  std::string description_;
};

LinearOpPtr pauli_op(const PauliString& string);

/// |i> -> |i +- 1 mod 2^n>; valid for 1 <= n <= 12.
LinearOpPtr cyclic_shift(int qubits, int direction);

/// diag(1, ..., 1, -1): phase flip on |2^n - 1>.
LinearOpPtr multi_controlled_z(int qubits);

/// X on every qubit.
LinearOpPtr x_layer(int qubits);

/// Hadamard on every qubit.
LinearOpPtr hadamard_layer(int qubits);

/// The open-chain shift V_+ = sum_{i=0}^{2^n-2} |i+1><i| (direction +1) or
/// V_- = sum_{i=1}^{2^n-1} |i-1><i| (direction -1), represented as the
/// half-sum of two unitaries: Cyc_+ . (C^{n-1}Z + I)/2, resp.
/// (C^{n-1}Z + I)/2 . Cyc_-.
struct OpenShift {
  std::vector<std::pair<Complex, LinearOpPtr>> terms;
  Eigen::MatrixXcd dense() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
};

OpenShift open_shift(int qubits, int direction);

/// Expansion of a diagonal function over index bits:
/// f(i) = sum_s c_s (-1)^{popcount(i & s)}; the diagonal-Pauli coefficients
/// of f. Entries with |c_s| <= prune are dropped.
std::vector<std::pair<std::uint64_t, double>> walsh_diagonal_terms(
    const std::vector<double>& f, int bits, double prune = 1e-13);

/// One summand of a generator decomposition: coeff * unitary.
struct UnitaryTerm {
  Complex coeff;
  LinearOpPtr op;
};

/// Sum of weighted unitaries reproducing a discretized generator.
struct GeneratorDecomposition {
  int qubits = 0;
  std::vector<UnitaryTerm> terms;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd reconstruct() const;  // guarded to n_q <= 12
  /// Exact Pauli view of the reconstruction (desk scale, n_q <= 8).
  PauliSum to_pauli_sum(double prune = 1e-13) const;
};

struct DecomposeOptions {
  int taylor_order = 0;
  double fit_tolerance = 1e-9;   // max-abs band-fit residual (relative)
  double prune = 1e-13;          // drop terms with |coeff| below this
  bool verify = true;            // check reconstruction at desk scale
};

/// Decomposes a banded generator into weighted unitaries built from lifted
/// shift, multi-controlled-Z and diagonal Pauli factors. Band profiles along
/// every offset in {0, +-e_d, +-e_d +- e_d'} are fitted by per-axis
/// polynomials of the configured order; the periodic wrap entries are covered
/// by cyclic-shift corrections. Constant bands collapse to plain cyclic
/// shifts.
GeneratorDecomposition decompose_generator(
    const SparseGenerator& gen, const Grid& grid,
    const DecomposeOptions& options = {});

}  // namespace feynkac
