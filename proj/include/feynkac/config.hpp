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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "feynkac/varqite.hpp"

namespace feynkac {

enum class InitialCondition {
  kKernelCellMass,   // heat-kernel mass integrated over each grid cell
  kKernelNodeValues  // heat-kernel density sampled at the nodes
};

/// Full description of one experiment run. Defaults reproduce the reference
/// 6-qubit correlated-diffusion comparison.
struct RunConfig {
  // Problem.
  std::string preset = "heat2d_correlated";
  std::map<std::string, double> preset_params = {{"rho", 1.0 / 3.0}};
  int qubits = 6;
  std::vector<double> spacings;      // default: 1.0 per dimension
  std::vector<double> origin;        // default: 0.0 per dimension
  std::vector<double> start_point;   // x0; default: center node
  double t0 = 0.1;

  // Initial condition handling.
  InitialCondition initial = InitialCondition::kKernelCellMass;
  bool normalize_initial = true;

  // Ansatz.
  bool circular_entangler = true;

  // Evolution.
  VarQiteConfig varqite;

  // Euler baseline.
  double euler_dt = 0.01;

  // Monte Carlo baseline.
  long mc_paths = 1000000;
  double mc_dt = 0.01;
  int mc_threads = 0;

  // Selection and outputs.
  std::set<std::string> methods = {"varqite", "euler", "mc", "analytic"};
  std::vector<double> snapshot_times;  // default t0 + {0, 0.2, ..., 1.0}
  std::vector<int> moment_components;  // observables; empty = every dimension
  EstimatorMode observable_mode = EstimatorMode::kExact;
  long observable_shots = 100000;
  std::uint64_t seed = 20260809;
  std::string output_dir = "out";

  /// Fails fast on every invalid field combination.
  void validate() const;

  int dims() const;
  Grid make_grid() const;
  SdeSystem make_system() const;
  std::vector<double> resolved_snapshot_times() const;
  std::vector<int> resolved_moments() const;
  Eigen::VectorXd resolved_start_point() const;

  /// TOML (default) or JSON (filename ending in .json, or text starting
  /// with '{').
  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text, bool json);
};

}  // namespace feynkac
