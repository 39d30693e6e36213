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

#include <cstdint>
#include <vector>

#include "feynkac/errors.hpp"

namespace feynkac {

/// Periodic hypercube mesh indexed by computational basis states.
///
/// The qubit register is split evenly across dimensions: each dimension gets
/// n_q/D qubits and 2^(n_q/D) points. The flat index of node (i_1, ..., i_D)
/// is row-major with i_1 slowest, so for D=2 the first 2^(n_q/D) basis states
/// fill the first row of the mesh.
class Grid {
 public:
  Grid(int dims, int qubits, std::vector<double> spacings,
       std::vector<double> origin)
      : dims_(dims), qubits_(qubits), spacings_(std::move(spacings)),
        origin_(std::move(origin)) {
    require(dims_ >= 1, "grid: dims must be positive");
    require(qubits_ >= 1, "grid: qubit count must be positive");
    require(qubits_ % dims_ == 0, "grid: qubit count must be divisible by dims");
    bits_per_dim_ = qubits_ / dims_;
    points_per_dim_ = std::size_t{1} << bits_per_dim_;
    require(points_per_dim_ >= 2, "grid: need at least 2 points per dimension");
    require(spacings_.size() == static_cast<std::size_t>(dims_),
            "grid: one spacing per dimension required");
    require(origin_.size() == static_cast<std::size_t>(dims_),
            "grid: one origin per dimension required");
    for (double dx : spacings_)
      require(dx > 0.0, "grid: spacings must be positive");
    nodes_ = std::size_t{1} << qubits_;
  }

  static Grid uniform(int dims, int qubits, double spacing,
                      double origin = 0.0) {
    require(dims >= 1, "grid: dims must be positive");
    return Grid(dims, qubits, std::vector<double>(dims, spacing),
                std::vector<double>(dims, origin));
  }

  int dims() const { return dims_; }
  int qubits() const { return qubits_; }
  int bits_per_dim() const { return bits_per_dim_; }
  std::size_t points_per_dim() const { return points_per_dim_; }
  std::size_t nodes() const { return nodes_; }
  double spacing(int d) const { return spacings_.at(d); }
  double origin(int d) const { return origin_.at(d); }
  const std::vector<double>& spacings() const { return spacings_; }

  /// Product of spacings; the volume represented by one node.
  double cell_volume() const {
    double v = 1.0;
    for (double dx : spacings_) v *= dx;
    return v;
  }

  double extent(int d) const {
    return static_cast<double>(points_per_dim_) * spacing(d);
  }

  /// Flat index from per-dimension indices (not wrapped).
  std::size_t flat_index(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (int d = 0; d < dims_; ++d) flat = (flat << bits_per_dim_) | idx[d];
    return flat;
  }

  std::size_t axis_index(std::size_t flat, int d) const {
    int shift = bits_per_dim_ * (dims_ - 1 - d);
    return (flat >> shift) & (points_per_dim_ - 1);
  }

  std::vector<std::size_t> multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dims_);
    for (int d = 0; d < dims_; ++d) idx[d] = axis_index(flat, d);
    return idx;
  }

  /// Flat index of the node offset from `flat` by `delta` steps along
  /// dimension d, wrapped periodically.
  std::size_t neighbor(std::size_t flat, int d, long delta) const {
    long n = static_cast<long>(points_per_dim_);
    long i = static_cast<long>(axis_index(flat, d));
    std::size_t wrapped = static_cast<std::size_t>(((i + delta) % n + n) % n);
    int shift = bits_per_dim_ * (dims_ - 1 - d);
    std::size_t mask = (points_per_dim_ - 1) << shift;
    return (flat & ~mask) | (wrapped << shift);
  }

  double coord(std::size_t axis_idx, int d) const {
    return origin_[d] + static_cast<double>(axis_idx) * spacings_[d];
  }

  std::vector<double> coords(std::size_t flat) const {
    std::vector<double> x(dims_);
    for (int d = 0; d < dims_; ++d) x[d] = coord(axis_index(flat, d), d);
    return x;
  }

 private:
  int dims_;
  int qubits_;
  int bits_per_dim_;
  std::size_t points_per_dim_;
  std::size_t nodes_;
  std::vector<double> spacings_;
  std::vector<double> origin_;
};

}  // namespace feynkac
