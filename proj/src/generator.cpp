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

#include "feynkac/generator.hpp"

#include <cmath>
#include <vector>

#include "feynkac/errors.hpp"

namespace feynkac {

std::vector<Eigen::Triplet<double>> SparseGenerator::triplets() const {
  std::vector<Eigen::Triplet<double>> out;
  out.reserve(matrix_.nonZeros());
  for (int row = 0; row < matrix_.outerSize(); ++row) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             matrix_, row);
         it; ++it) {
      out.emplace_back(it.row(), it.col(), it.value());
    }
  }
  return out;
}

double SparseGenerator::max_abs_diagonal() const {
  double m = 0.0;
  for (int i = 0; i < matrix_.rows(); ++i)
    m = std::max(m, std::abs(matrix_.coeff(i, i)));
  return m;
}

namespace {

SparseGenerator discretize_impl(const CoefficientField& coeffs,
                                const Grid& grid, double diagonal_sign) {
  require(coeffs.grid == &grid &&
              coeffs.diffusion_tensor.size() == grid.nodes(),
          "discretize: coefficient field does not match the grid");
  const int dims = grid.dims();
  const std::size_t n = grid.nodes();

  bool has_mixed = false;
  for (std::size_t j = 0; j < n && !has_mixed; ++j)
    for (int d = 0; d < dims && !has_mixed; ++d)
      for (int e = d + 1; e < dims; ++e)
        if (coeffs.diffusion_tensor[j](d, e) != 0.0) has_mixed = true;
  require(!has_mixed || grid.points_per_dim() >= 3,
          "discretize: mixed derivatives need at least 3 points per "
          "dimension (stencil self-overlap)");

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n * (1 + 2 * dims + 2 * dims * (dims - 1)));

  for (std::size_t j = 0; j < n; ++j) {
    // Full tensor Sigma Sigma^T = 2 * (diffusion tensor), source node j.
    const Eigen::MatrixXd cov = 2.0 * coeffs.diffusion_tensor[j];
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
            "discretize: diffusion tensor must be symmetric");
    const Eigen::VectorXd& mu = coeffs.drift_vector[j];
    const double r = coeffs.discount_scalar[j];

    double diag = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double dx = grid.spacing(d);
      diag -= cov(d, d) / (dx * dx);
    }
    entries.emplace_back(j, j, diagonal_sign * diag - r);

    for (int d = 0; d < dims; ++d) {
      const double dx = grid.spacing(d);
      const double diffusive = 0.5 * cov(d, d) / (dx * dx);
      const double advective = 0.5 * mu(d) / dx;
      entries.emplace_back(grid.neighbor(j, d, +1), j, diffusive + advective);
      entries.emplace_back(grid.neighbor(j, d, -1), j, diffusive - advective);
    }

    for (int d = 0; d < dims; ++d) {
      for (int e = d + 1; e < dims; ++e) {
        const double cross =
            0.25 * cov(d, e) / (grid.spacing(d) * grid.spacing(e));
        if (cross == 0.0) continue;
        entries.emplace_back(grid.neighbor(grid.neighbor(j, d, +1), e, +1), j,
                             cross);
        entries.emplace_back(grid.neighbor(grid.neighbor(j, d, -1), e, -1), j,
                             cross);
        entries.emplace_back(grid.neighbor(grid.neighbor(j, d, +1), e, -1), j,
                             -cross);
        entries.emplace_back(grid.neighbor(grid.neighbor(j, d, -1), e, +1), j,
                             -cross);
      }
    }
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());  // duplicates accumulate
  m.prune(0.0, 0.0);
  return SparseGenerator(std::move(m), grid.qubits());
}

}  // namespace

SparseGenerator discretize(const CoefficientField& coeffs, const Grid& grid) {
  return discretize_impl(coeffs, grid, +1.0);
}

SparseGenerator discretize_flipped_diagonal(const CoefficientField& coeffs,
                                            const Grid& grid) {
  return discretize_impl(coeffs, grid, -1.0);
}

Eigen::VectorXd apply(const SparseGenerator& gen, const Eigen::VectorXd& u) {
  require(static_cast<std::size_t>(u.size()) == gen.dimension(),
          "apply: vector length does not match the generator dimension");
  return gen.matrix() * u;
}

Eigen::MatrixXd to_dense(const SparseGenerator& gen) {
  require(gen.qubits() <= 12, "to_dense: refusing n_q > 12 (memory guard)");
  return Eigen::MatrixXd(gen.matrix());
}

}  // namespace feynkac
