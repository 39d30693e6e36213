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

#include "feynkac/circuit.hpp"

#include <cmath>

#include "feynkac/errors.hpp"

namespace feynkac {

namespace {

// Ry(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] on qubit q
// (q = 0 is the most significant index bit).
void apply_ry(Eigen::VectorXcd& state, int qubits, int q, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::size_t bit = std::size_t{1} << (qubits - 1 - q);
  const std::size_t dim = state.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const std::size_t j = i | bit;
    const Complex lo = state(i), hi = state(j);
    state(i) = c * lo - s * hi;
    state(j) = s * lo + c * hi;
  }
}

void apply_y(Eigen::VectorXcd& state, int qubits, int q) {
  const std::size_t bit = std::size_t{1} << (qubits - 1 - q);
  const std::size_t dim = state.size();
  const Complex i_unit(0.0, 1.0);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const std::size_t j = i | bit;
    const Complex lo = state(i), hi = state(j);
    state(i) = -i_unit * hi;
    state(j) = i_unit * lo;
  }
}

void apply_cnot(Eigen::VectorXcd& state, int qubits, int control, int target) {
  const std::size_t cbit = std::size_t{1} << (qubits - 1 - control);
  const std::size_t tbit = std::size_t{1} << (qubits - 1 - target);
  const std::size_t dim = state.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(state(i), state(i | tbit));
  }
}

}  // namespace

Ansatz Ansatz::real_amplitudes(int qubits, bool circular_entangler) {
  require(qubits >= 1, "ansatz: need at least one qubit");
  require(qubits <= 24, "ansatz: qubit count too large for a statevector");
  return Ansatz(qubits, circular_entangler);
}

Eigen::VectorXcd Ansatz::run(const Eigen::VectorXd& theta, int insert_y) const {
  require(theta.size() == parameter_count(),
          "ansatz: expected " + std::to_string(parameter_count()) +
              " parameters, got " + std::to_string(theta.size()));
  const std::size_t dim = std::size_t{1} << qubits_;
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
  state(0) = 1.0;

  for (int q = 0; q < qubits_; ++q) {
    apply_ry(state, qubits_, q, theta(q));
    if (insert_y == q) apply_y(state, qubits_, q);
  }
  if (qubits_ >= 2) {
    for (int q = 0; q + 1 < qubits_; ++q)
      apply_cnot(state, qubits_, q, q + 1);
    if (circular_) apply_cnot(state, qubits_, qubits_ - 1, 0);
  }
  for (int q = 0; q < qubits_; ++q) {
    apply_ry(state, qubits_, q, theta(qubits_ + q));
    if (insert_y == qubits_ + q) apply_y(state, qubits_, q);
  }
  return state;
}

Eigen::VectorXcd Ansatz::prepare(const Eigen::VectorXd& theta) const {
  return run(theta, -1);
}

Eigen::VectorXcd Ansatz::derivative(const Eigen::VectorXd& theta,
                                    int k) const {
  // d/dtheta Ry = (-i/2) Y Ry, so the derivative state is -(i/2) w_k.
  return Complex(0.0, -0.5) * derivative_unitary_state(theta, k);
}

Eigen::VectorXcd Ansatz::derivative_unitary_state(const Eigen::VectorXd& theta,
                                                  int k) const {
  require(k >= 0 && k < parameter_count(),
          "ansatz derivative: parameter index out of range");
  return run(theta, k);
}

double hadamard_test(const Eigen::VectorXcd& psi, const LinearOp& op,
                     Part part, std::optional<long> shots,
                     std::mt19937_64* rng) {
  require(static_cast<std::size_t>(psi.size()) == op.dim(),
          "hadamard_test: state and operator dimensions differ");
  op.verify_unitary(1e-10);
  const Complex overlap = psi.dot(op.apply(psi));
  const double value =
      part == Part::kReal ? overlap.real() : overlap.imag();
  if (!shots.has_value()) return value;
  require(*shots >= 1, "hadamard_test: shots must be >= 1");
  require(rng != nullptr, "hadamard_test: shot mode needs a generator");
  const double p = std::clamp(0.5 * (1.0 + value), 0.0, 1.0);
  std::binomial_distribution<long> dist(*shots, p);
  const long successes = dist(*rng);
  return 2.0 * static_cast<double>(successes) / static_cast<double>(*shots) -
         1.0;
}

}  // namespace feynkac
