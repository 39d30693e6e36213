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
#include <functional>
#include <string>
#include <vector>

#include "feynkac/circuit.hpp"
#include "feynkac/generator.hpp"
#include "feynkac/operators.hpp"
#include "feynkac/rng.hpp"

namespace feynkac {

enum class OdeMethod { kForwardEuler, kRk4 };
enum class EstimatorMode { kExact, kShots };

struct VarQiteConfig {
  double dtau = 0.01;
  long steps = 100;
  OdeMethod method = OdeMethod::kRk4;
  double svd_cutoff = 1e-8;  // relative singular value cutoff
  bool l1_enforce = true;
  int l1_every = 1;
  EstimatorMode l1_mode = EstimatorMode::kExact;
  long l1_shots = 100000;
  EstimatorMode v_mode = EstimatorMode::kExact;
  long v_shots = 100000;
  // Multi-start initialization.
  int init_starts = 20;
  int init_iterations = 400;

  void validate() const;
};

/// Scale parameter alpha plus the gate angles; index 0 of the McLachlan
/// system is alpha.
struct VarState {
  Eigen::VectorXd theta;
  double alpha = 1.0;
};

/// Ansatz state and its analytic parameter derivatives at one point.
struct AnsatzTangent {
  Eigen::VectorXcd state;
  std::vector<Eigen::VectorXcd> derivatives;
};

AnsatzTangent tangent(const Ansatz& ansatz, const Eigen::VectorXd& theta);

struct InitResult {
  Eigen::VectorXd theta;
  double alpha = 0.0;
  double residual = 0.0;      // || |v(theta)> - u0/||u0|| ||_2
  bool residual_warning = false;
};

/// Classical initialization: alpha = ||u0||_2 and theta from a multi-start
/// Levenberg-Marquardt fit of |v(theta)> to the normalized target (the zero
/// angle vector is always included as a candidate start).
InitResult initialize(const Ansatz& ansatz, const Eigen::VectorXd& target,
                      const SeedStream& seeds, int starts = 20,
                      int iterations = 400, double warn_residual = 0.05);

/// (N+1) x (N+1) McLachlan matrix; index 0 is the scale parameter:
/// M00 = 1, M0j = alpha Re<v|dj v>, Mkj = alpha^2 Re<dk v|dj v>.
Eigen::MatrixXd assemble_m(const AnsatzTangent& tangent, double alpha);
Eigen::MatrixXd assemble_m(const Ansatz& ansatz, const Eigen::VectorXd& theta,
                           double alpha);

/// Right-hand side: V0 = alpha Re<v|G|v>, Vk = alpha^2 Re<dk v|G|v>.
Eigen::VectorXd assemble_v(const AnsatzTangent& tangent, double alpha,
                           const SparseGenerator& gen);
Eigen::VectorXd assemble_v(const Ansatz& ansatz, const Eigen::VectorXd& theta,
                           double alpha, const SparseGenerator& gen);

/// Shot-noise estimate of the same vector from Hadamard tests over the
/// unitary terms of a generator decomposition.
Eigen::VectorXd assemble_v_shots(const Ansatz& ansatz,
                                 const Eigen::VectorXd& theta, double alpha,
                                 const GeneratorDecomposition& decomposition,
                                 long shots, const SeedStream& seeds,
                                 std::uint64_t tag);

struct McLachlanSolution {
  Eigen::VectorXd xdot;
  double condition = 0.0;
  int rank = 0;
};

/// Solves M xdot = V by SVD, zeroing singular values below
/// cutoff * sigma_max in the inverse. Throws NumericalError when every
/// singular value is below the cutoff.
McLachlanSolution solve_mclachlan(const Eigen::MatrixXd& m,
                                  const Eigen::VectorXd& v, double cutoff);

using Assembler =
    std::function<std::pair<Eigen::MatrixXd, Eigen::VectorXd>(const VarState&,
                                                              double)>;

/// One explicit Euler step from precomputed M, V.
VarState step_euler(const VarState& state, const Eigen::MatrixXd& m,
                    const Eigen::VectorXd& v, double dtau, double cutoff);

/// One ODE step; rk4 re-assembles M, V at the internal stages.
VarState step(const VarState& state, const Assembler& assembler, double time,
              double dtau, OdeMethod method, double cutoff);

/// Rescales alpha so that sum_i alpha v_i = 1. Exact mode sums amplitudes
/// directly; shot mode estimates |sum_i v_i| from a Hadamard test of the
/// multi-controlled-Z on the X- and Hadamard-transformed state. Returns
/// alpha unchanged (with a warning flag) for sign-cancelling states.
struct L1Result {
  double alpha;
  bool skipped = false;
};
L1Result enforce_l1(const Eigen::VectorXcd& state, double alpha,
                    EstimatorMode mode = EstimatorMode::kExact,
                    long shots = 100000, std::mt19937_64* rng = nullptr);

struct TrajectoryRecord {
  long step = 0;
  double time = 0.0;
  double alpha = 0.0;
  Eigen::VectorXd theta;
  Eigen::VectorXd solution;  // alpha * v(theta)
  double l1 = 0.0;
  double l2 = 0.0;
};

struct VarQiteTrajectory {
  std::vector<TrajectoryRecord> records;
  double init_residual = 0.0;
  bool init_residual_warning = false;

  /// step,time,alpha,l1,l2,theta_1..theta_N
  void write_csv(const std::string& path) const;
  /// Sidecar with the full solution vector per recorded step.
  void write_json(const std::string& path) const;
};

struct GeneratorSource {
  bool time_dependent = false;
  std::function<SparseGenerator(double)> at;
  /// Unitary decomposition at time t; required when the V estimator runs in
  /// shot mode.
  std::function<GeneratorDecomposition(double)> decomposition_at;

  static GeneratorSource constant(SparseGenerator gen);
  static GeneratorSource constant(SparseGenerator gen, const Grid& grid);
};

/// Full evolution: initialize from u0, then `steps` McLachlan updates with
/// optional l1 rescaling, recording the trajectory (steps + 1 records).
VarQiteTrajectory evolve(const GeneratorSource& source, const Ansatz& ansatz,
                         const Eigen::VectorXd& u0, double t0,
                         const VarQiteConfig& config, const SeedStream& seeds);

}  // namespace feynkac
