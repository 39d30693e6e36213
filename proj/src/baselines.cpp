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

#include "feynkac/baselines.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "feynkac/errors.hpp"

namespace feynkac {

EulerResult euler_evolve(const SparseGenerator& gen, const Eigen::VectorXd& u0,
                         double dt, long steps) {
  require(static_cast<std::size_t>(u0.size()) == gen.dimension(),
          "euler_evolve: initial vector length mismatch");
  require(dt > 0.0 && steps >= 0, "euler_evolve: bad step configuration");
  const double stiffness = dt * gen.max_abs_diagonal();
  if (stiffness > 1.0)
    throw NumericalError(
        "euler_evolve: dt * max|diag| = " + std::to_string(stiffness) +
        " violates the stability bound");
  EulerResult out;
  out.stability_warning = stiffness > 0.5;
  out.states.reserve(steps + 1);
  out.states.push_back(u0);
  Eigen::VectorXd u = u0;
  for (long k = 0; k < steps; ++k) {
    u += dt * (gen.matrix() * u);
    out.states.push_back(u);
  }
  return out;
}

namespace {

constexpr long kChunk = 1 << 16;

struct McTask {
  const SdeSystem* sde;
  const Grid* grid;
  Eigen::VectorXd x0;
  double dt;
  long steps;
  const std::vector<long>* record_steps;
  const SeedStream* seeds;
};

// Nearest-node binning with periodic wrap.
std::size_t bin_node(const Grid& grid, const Eigen::VectorXd& x) {
  std::size_t flat = 0;
  const long n = static_cast<long>(grid.points_per_dim());
  for (int d = 0; d < grid.dims(); ++d) {
    long idx = std::lround((x(d) - grid.origin(d)) / grid.spacing(d));
    idx = ((idx % n) + n) % n;
    flat = (flat << grid.bits_per_dim()) | static_cast<std::size_t>(idx);
  }
  return flat;
}

void run_chunk(const McTask& task, long chunk_index, long chunk_paths,
               std::vector<std::vector<std::uint64_t>>& counts) {
  auto rng = task.seeds->stream(0x6d63, static_cast<std::uint64_t>(chunk_index));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_dt = std::sqrt(task.dt);
  const int dims = task.sde->dims;
  const int brownians = task.sde->brownians;
  Eigen::VectorXd x(dims), dw(brownians);
  for (long p = 0; p < chunk_paths; ++p) {
    x = task.x0;
    std::size_t next_record = 0;
    for (long s = 1; s <= task.steps; ++s) {
      const double t = static_cast<double>(s - 1) * task.dt;
      for (int b = 0; b < brownians; ++b) dw(b) = normal(rng) * sqrt_dt;
      x += task.sde->drift(x, t) * task.dt + task.sde->diffusion(x, t) * dw;
      while (next_record < task.record_steps->size() &&
             (*task.record_steps)[next_record] == s) {
        counts[next_record][bin_node(*task.grid, x)] += 1;
        ++next_record;
      }
    }
  }
}

}  // namespace

std::vector<PathHistogram> mc_simulate_series(
    const SdeSystem& sde, const Eigen::VectorXd& x0, double total_time,
    long paths, long steps, const std::vector<long>& record_steps,
    const Grid& grid, const SeedStream& seeds, int threads) {
  require(total_time > 0.0, "mc_simulate: total time must be positive");
  require(paths >= 1 && steps >= 1, "mc_simulate: paths and steps must be >= 1");
  require(sde.dims == grid.dims(), "mc_simulate: grid dimension mismatch");
  require(x0.size() == sde.dims, "mc_simulate: start point dimension mismatch");
  require(!record_steps.empty(), "mc_simulate: nothing to record");
  for (std::size_t i = 0; i < record_steps.size(); ++i) {
    require(record_steps[i] >= 1 && record_steps[i] <= steps,
            "mc_simulate: record step out of range");
    if (i) require(record_steps[i] > record_steps[i - 1],
                   "mc_simulate: record steps must be ascending");
  }

  McTask task{&sde, &grid, x0, total_time / static_cast<double>(steps), steps,
              &record_steps, &seeds};

  const long chunks = (paths + kChunk - 1) / kChunk;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = static_cast<int>(std::min<long>(threads, chunks));

  // Per-chunk counts; merged by integer addition, so the result does not
  // depend on scheduling.
  std::vector<std::vector<std::vector<std::uint64_t>>> chunk_counts(
      chunks, std::vector<std::vector<std::uint64_t>>(
                  record_steps.size(),
                  std::vector<std::uint64_t>(grid.nodes(), 0)));

  std::atomic<long> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const long c = cursor.fetch_add(1);
      if (c >= chunks) break;
      const long begin = c * kChunk;
      const long count = std::min<long>(kChunk, paths - begin);
      run_chunk(task, c, count, chunk_counts[c]);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<PathHistogram> out(record_steps.size());
  for (std::size_t r = 0; r < record_steps.size(); ++r) {
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(grid.nodes());
    for (long c = 0; c < chunks; ++c)
      for (std::size_t node = 0; node < grid.nodes(); ++node)
        mass(node) += static_cast<double>(chunk_counts[c][r][node]);
    mass /= static_cast<double>(paths);
    out[r] = PathHistogram{&grid, std::move(mass), paths, seeds.seed()};
  }
  return out;
}

PathHistogram mc_simulate(const SdeSystem& sde, const Eigen::VectorXd& x0,
                          double total_time, long paths, long steps,
                          const Grid& grid, const SeedStream& seeds,
                          int threads) {
  auto series = mc_simulate_series(sde, x0, total_time, paths, steps, {steps},
                                   grid, seeds, threads);
  return std::move(series.front());
}

double analytic_kernel(double x, double y, double t, double rho, double x0,
                       double y0) {
  require(t > 0.0, "analytic_kernel: t must be positive");
  require(std::abs(rho) < 1.0, "analytic_kernel: |rho| must be < 1");
  const double one_minus = 1.0 - rho * rho;
  const double dx = x - x0;
  const double dy = y - y0;
  const double quad = rho * (x0 - x) * (y - y0) + 0.5 * dx * dx +
                      0.5 * dy * dy;
  return std::exp(-quad / (t * one_minus)) /
         (2.0 * M_PI * t * std::sqrt(one_minus));
}

double analytic_kernel_general(double x, double y, double t, double A,
                               double B, double C, double r, double x0,
                               double y0) {
  const double delta = 4.0 * B * C - A * A;
  require(delta > 0.0 && B > 0.0,
          "analytic_kernel_general: need 4BC - A^2 > 0 and B > 0");
  require(t > 0.0, "analytic_kernel_general: t must be positive");
  const double dx = x - x0;
  const double dy = y - y0;
  const double cross = (0.5 * A / B) * dx - dy;
  const double expo = -(B / (delta * t)) * cross * cross -
                      dx * dx / (4.0 * B * t);
  return std::exp(-r * t) * std::exp(expo) /
         (2.0 * M_PI * t * std::sqrt(delta));
}

Eigen::VectorXd kernel_node_values(const Grid& grid, double t, double rho,
                                   const Eigen::VectorXd& center) {
  require(grid.dims() == 2, "kernel_node_values: grid must be 2-d");
  Eigen::VectorXd out(grid.nodes());
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    auto xy = grid.coords(node);
    out(node) = analytic_kernel(xy[0], xy[1], t, rho, center(0), center(1));
  }
  return out;
}

Eigen::VectorXd kernel_cell_masses(const Grid& grid, double t, double rho,
                                   const Eigen::VectorXd& center,
                                   int panels) {
  require(grid.dims() == 2, "kernel_cell_masses: grid must be 2-d");
  require(panels >= 1, "kernel_cell_masses: panels must be >= 1");
  // 4-point Gauss-Legendre nodes/weights on [-1, 1].
  const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563,
                          0.3399810435848563, 0.8611363115940526};
  const double gl_w[4] = {0.3478548451374538, 0.6521451548625461,
                          0.6521451548625461, 0.3478548451374538};

  const double hx = grid.spacing(0) / panels;
  const double hy = grid.spacing(1) / panels;
  Eigen::VectorXd out(grid.nodes());
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    auto xy = grid.coords(node);
    const double x_lo = xy[0] - 0.5 * grid.spacing(0);
    const double y_lo = xy[1] - 0.5 * grid.spacing(1);
    double total = 0.0;
    for (int px = 0; px < panels; ++px) {
      for (int py = 0; py < panels; ++py) {
        const double cx = x_lo + (px + 0.5) * hx;
        const double cy = y_lo + (py + 0.5) * hy;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            const double x = cx + 0.5 * hx * gl_x[a];
            const double y = cy + 0.5 * hy * gl_x[b];
            total += gl_w[a] * gl_w[b] *
                     analytic_kernel(x, y, t, rho, center(0), center(1));
          }
        }
      }
    }
    out(node) = total * 0.25 * hx * hy;
  }
  return out;
}

}  // namespace feynkac
