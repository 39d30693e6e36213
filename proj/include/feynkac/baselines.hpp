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
#include <vector>

#include "feynkac/fk_model.hpp"
#include "feynkac/generator.hpp"
#include "feynkac/grid.hpp"
#include "feynkac/rng.hpp"

namespace feynkac {

struct EulerResult {
  std::vector<Eigen::VectorXd> states;  // includes the initial vector
  bool stability_warning = false;
};

/// Explicit forward Euler integration u <- u + dt G u. Hard error when
/// dt * max|diag G| exceeds 1; warning flag above 0.5.
EulerResult euler_evolve(const SparseGenerator& gen, const Eigen::VectorXd& u0,
                         double dt, long steps);

/// Terminal-position histogram of simulated SDE paths: per-node probability
/// mass (sums to 1), nearest-node binning with periodic wrap.
struct PathHistogram {
  const Grid* grid = nullptr;
  Eigen::VectorXd mass;
  long paths = 0;
  std::uint64_t seed = 0;
};

/// Euler-Maruyama simulation of `paths` trajectories from x0 over [0, T]
/// in `steps` steps, binned onto the grid at every requested step index
/// (0 < index <= steps, ascending). Positions evolve unwrapped; wrapping
/// happens at binning time. Deterministic for a fixed seed stream,
/// independent of threading.
std::vector<PathHistogram> mc_simulate_series(
    const SdeSystem& sde, const Eigen::VectorXd& x0, double total_time,
    long paths, long steps, const std::vector<long>& record_steps,
    const Grid& grid, const SeedStream& seeds, int threads = 0);

PathHistogram mc_simulate(const SdeSystem& sde, const Eigen::VectorXd& x0,
                          double total_time, long paths, long steps,
                          const Grid& grid, const SeedStream& seeds,
                          int threads = 0);

/// Heat kernel of du/dt = rho u_xy + (1/2) u_xx + (1/2) u_yy started from a
/// point mass at (x0, y0); requires t > 0 and |rho| < 1.
double analytic_kernel(double x, double y, double t, double rho, double x0,
                       double y0);

/// Kernel of du/dt = A u_xy + B u_xx + C u_yy - r u for constant
/// coefficients with 4BC - A^2 > 0, B > 0, started from a point mass.
double analytic_kernel_general(double x, double y, double t, double A,
                               double B, double C, double r, double x0,
                               double y0);

/// Kernel values sampled at grid nodes (density units).
Eigen::VectorXd kernel_node_values(const Grid& grid, double t, double rho,
                                   const Eigen::VectorXd& center);

/// Kernel mass per grid cell, by composite Gauss-Legendre quadrature over
/// each cell (panels x panels subdivisions of 4-point rules per axis).
Eigen::VectorXd kernel_cell_masses(const Grid& grid, double t, double rho,
                                   const Eigen::VectorXd& center,
                                   int panels = 4);

}  // namespace feynkac
