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
#include <Eigen/Sparse>

#include "feynkac/fk_model.hpp"
#include "feynkac/grid.hpp"

namespace feynkac {

/// Discretized generator over the 2^{n_q} grid-indexed basis states, stored
/// in compressed sparse form. Immutable after construction.
class SparseGenerator {
 public:
  SparseGenerator(Eigen::SparseMatrix<double, Eigen::RowMajor> matrix,
                  int qubits)
      : matrix_(std::move(matrix)), qubits_(qubits) {
    matrix_.makeCompressed();
  }

  std::size_t dimension() const {
    return static_cast<std::size_t>(matrix_.rows());
  }
  int qubits() const { return qubits_; }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix() const {
    return matrix_;
  }

  /// Entry list as (row, col, value) triples in row-major order.
  std::vector<Eigen::Triplet<double>> triplets() const;

  double max_abs_diagonal() const;

 private:
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix_;
  int qubits_;
};

/// Second-order periodic stencil discretization of the generator defined by
/// a coefficient field.
///
/// All entries in column j are evaluated at the source node x_j, which keeps
/// every column sum at exactly -r(x_j): with r = 0 the stencil conserves
/// total mass regardless of coefficient variation. The drift sign follows
/// the forward (density-evolution) convention: the coupling from node j to
/// node j + e_d carries +mu_d/(2 dx_d), so a positive drift transports mass
/// toward larger coordinates.
SparseGenerator discretize(const CoefficientField& coeffs, const Grid& grid);

/// Same stencil with the diagonal sign flipped; the anti-diffusive variant
/// used by tests to pin the correct convention.
SparseGenerator discretize_flipped_diagonal(const CoefficientField& coeffs,
                                            const Grid& grid);

/// Matrix-vector product.
Eigen::VectorXd apply(const SparseGenerator& gen, const Eigen::VectorXd& u);

/// Dense equivalent; guarded to n_q <= 12.
Eigen::MatrixXd to_dense(const SparseGenerator& gen);

}  // namespace feynkac
