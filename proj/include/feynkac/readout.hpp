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
#include <optional>
#include <vector>

#include "feynkac/circuit.hpp"
#include "feynkac/grid.hpp"
#include "feynkac/operators.hpp"
#include "feynkac/rng.hpp"

namespace feynkac {

/// Scaled solution state alpha |v>; the entries of alpha v are the solution
/// values p_i.
struct ScaledState {
  double alpha = 1.0;
  Eigen::VectorXcd v;

  Eigen::VectorXd values() const { return alpha * v.real(); }
};

/// A weighted sum of unitaries whose action on |0...0> realizes a target
/// vector; the circuit-side representation of a state-preparation operator.
struct UnitarySum {
  std::vector<UnitaryTerm> terms;

  Eigen::VectorXcd apply_to_zero(int qubits) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
};

/// Target function on grid nodes with its l2 normalization constant and the
/// estimator selection. `preparation` realizes f / C on |0...0> when the
/// shot estimator is in use.
struct ObservableSpec {
  Eigen::VectorXd f;
  double norm_constant = 1.0;  // C = ||f||_2
  EstimatorMode mode = EstimatorMode::kExact;
  long shots = 100000;
  std::optional<UnitarySum> preparation;
  int component = -1;  // moment observables record their dimension index

  static ObservableSpec from_values(Eigen::VectorXd values,
                                    EstimatorMode mode = EstimatorMode::kExact,
                                    long shots = 100000);
};

/// f == sqrt(1/2^n): a single layer of Hadamard gates; reads out the signed
/// amplitude mass.
ObservableSpec uniform_observable(const Grid& grid);

/// f(x_1..x_D) = coordinate of dimension `component`, realized as the index
/// diagonal on that dimension's block and Hadamard layers elsewhere.
ObservableSpec moment_observable(const Grid& grid, int component);

/// Classical oracle sum_i p_i f(x_i) for p = alpha v.
double direct_expectation(const ScaledState& state, const Eigen::VectorXd& f);

/// |sum_i p_i f(x_i)| via the squared overlap alpha^2 |<v|S_f|0>|^2,
/// rescaled by C. Exact mode evaluates the overlap directly; shot mode
/// expands S_f |0><0| S_f^dag over unitary pairs and estimates each term
/// with Hadamard tests.
double expectation_via_sf(const ScaledState& state, const ObservableSpec& spec,
                          const SeedStream& seeds, std::uint64_t tag = 0);

/// E[X_component] of the solution state (coordinate units).
double moment_component(const ScaledState& state, const Grid& grid,
                        int component, EstimatorMode mode,
                        const SeedStream& seeds, long shots = 100000,
                        std::uint64_t tag = 0);

/// Indicator loader: the operator maps |0...0> to the unnormalized indicator
/// vector of the index interval [0, upper], built from dyadic blocks of
/// identity/X/Hadamard factors. `action` is that vector; `pieces` are the
/// weighted unitaries realizing it.
struct IntervalOperator {
  std::vector<UnitaryTerm> pieces;
  Eigen::VectorXd action;
};

IntervalOperator interval_operator(std::uint64_t upper, int qubits);

/// Piecewise-Taylor preparation of f over `pieces` equal index blocks per
/// dimension with per-axis polynomial order `order`; supports D = 1 and
/// D = 2. Returns the unitary sum, its realized action on |0>, and the
/// max-abs fit residual.
struct PiecewiseSf {
  UnitarySum sum;
  Eigen::VectorXd action;
  double residual = 0.0;
};

PiecewiseSf piecewise_taylor_sf(const Grid& grid, const Eigen::VectorXd& f,
                                int pieces, int order);

/// Lagrange truncation bound deriv_bound * h^{D (L+1)} for an order-L
/// piecewise Taylor approximation on cells of width h in D dimensions.
double taylor_error_bound(int order, double cell_width, int dims,
                          double deriv_bound);

}  // namespace feynkac
