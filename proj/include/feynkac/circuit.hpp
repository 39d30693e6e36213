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
#include <random>

#include "feynkac/operators.hpp"

namespace feynkac {

/// Hardware-efficient real-amplitude ansatz: a layer of y-rotations on every
/// qubit, a block of CNOTs on successive qubits (optionally closed into a
/// ring), and a second layer of y-rotations. Parameter count is 2n. All
/// output amplitudes are real and theta = 0 prepares |0...0>.
class Ansatz {
 public:
  static Ansatz real_amplitudes(int qubits, bool circular_entangler = true);

  int qubits() const { return qubits_; }
  int parameter_count() const { return 2 * qubits_; }
  bool circular_entangler() const { return circular_; }

  /// |v(theta)>.
  Eigen::VectorXcd prepare(const Eigen::VectorXd& theta) const;

  /// Analytic d|v>/d(theta_k), k in [0, parameter_count()); computed by
  /// inserting the rotation generator -Y/2 at the gate position.
  Eigen::VectorXcd derivative(const Eigen::VectorXd& theta, int k) const;

  /// The unit vector |w_k> with d|v>/d(theta_k) = -(i/2) |w_k>; its
  /// preparation is the ansatz circuit with a Y gate inserted after the k-th
  /// rotation, so overlaps with it are Hadamard-test estimable.
  Eigen::VectorXcd derivative_unitary_state(const Eigen::VectorXd& theta,
                                            int k) const;

 private:
  Ansatz(int qubits, bool circular) : qubits_(qubits), circular_(circular) {}

  // Applies the circuit; when insert_y >= 0 a Y gate is inserted right after
  // rotation gate number insert_y.
  Eigen::VectorXcd run(const Eigen::VectorXd& theta, int insert_y) const;

  int qubits_;
  bool circular_;
};

enum class Part { kReal, kImag };

/// One-ancilla interference estimate of <psi|U|psi>. The ancilla is emulated
/// analytically: exact mode returns Re or Im of the overlap; shot mode draws
/// the ancilla outcomes from a binomial with success probability
/// (1 + value)/2 and returns the unbiased estimate 2 k/shots - 1.
/// U must be unitary; `shots == std::nullopt` selects exact mode.
double hadamard_test(const Eigen::VectorXcd& psi, const LinearOp& op,
                     Part part, std::optional<long> shots = std::nullopt,
                     std::mt19937_64* rng = nullptr);

}  // namespace feynkac
