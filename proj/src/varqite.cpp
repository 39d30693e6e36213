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

#include "feynkac/varqite.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

namespace feynkac {

void VarQiteConfig::validate() const {
  require(dtau > 0.0, "varqite config: dtau must be positive");
  require(steps >= 1, "varqite config: steps must be >= 1");
  require(svd_cutoff > 0.0 && svd_cutoff < 1.0,
          "varqite config: svd cutoff must lie in (0, 1)");
  require(l1_every >= 1, "varqite config: l1 cadence must be >= 1");
  if (l1_mode == EstimatorMode::kShots)
    require(l1_shots >= 1, "varqite config: l1 shots must be >= 1");
  if (v_mode == EstimatorMode::kShots)
    require(v_shots >= 1, "varqite config: v shots must be >= 1");
}

AnsatzTangent tangent(const Ansatz& ansatz, const Eigen::VectorXd& theta) {
  AnsatzTangent t;
  t.state = ansatz.prepare(theta);
  t.derivatives.reserve(ansatz.parameter_count());
  for (int k = 0; k < ansatz.parameter_count(); ++k)
    t.derivatives.push_back(ansatz.derivative(theta, k));
  return t;
}

Eigen::MatrixXd assemble_m(const AnsatzTangent& tangent, double alpha) {
  const int n = static_cast<int>(tangent.derivatives.size());
  Eigen::MatrixXd m(n + 1, n + 1);
  m(0, 0) = 1.0;
  for (int j = 0; j < n; ++j) {
    const double overlap = tangent.state.dot(tangent.derivatives[j]).real();
    m(0, j + 1) = alpha * overlap;
    m(j + 1, 0) = alpha * overlap;
  }
  for (int k = 0; k < n; ++k) {
    for (int j = k; j < n; ++j) {
      const double g =
          tangent.derivatives[k].dot(tangent.derivatives[j]).real();
      m(k + 1, j + 1) = alpha * alpha * g;
      m(j + 1, k + 1) = alpha * alpha * g;
    }
  }
  return m;
}

Eigen::MatrixXd assemble_m(const Ansatz& ansatz, const Eigen::VectorXd& theta,
                           double alpha) {
  return assemble_m(tangent(ansatz, theta), alpha);
}

Eigen::VectorXd assemble_v(const AnsatzTangent& tangent, double alpha,
                           const SparseGenerator& gen) {
  require(gen.dimension() == static_cast<std::size_t>(tangent.state.size()),
          "assemble_v: generator dimension mismatch");
  const int n = static_cast<int>(tangent.derivatives.size());
  Eigen::VectorXcd gv = Eigen::VectorXcd::Zero(tangent.state.size());
  {
    // The generator is real; apply it to the real and imaginary parts.
    Eigen::VectorXd re = gen.matrix() * tangent.state.real();
    Eigen::VectorXd im = gen.matrix() * tangent.state.imag();
    gv.real() = re;
    gv.imag() = im;
  }
  Eigen::VectorXd v(n + 1);
  v(0) = alpha * tangent.state.dot(gv).real();
  for (int k = 0; k < n; ++k)
    v(k + 1) = alpha * alpha * tangent.derivatives[k].dot(gv).real();
  return v;
}

Eigen::VectorXd assemble_v(const Ansatz& ansatz, const Eigen::VectorXd& theta,
                           double alpha, const SparseGenerator& gen) {
  return assemble_v(tangent(ansatz, theta), alpha, gen);
}

Eigen::VectorXd assemble_v_shots(const Ansatz& ansatz,
                                 const Eigen::VectorXd& theta, double alpha,
                                 const GeneratorDecomposition& decomposition,
                                 long shots, const SeedStream& seeds,
                                 std::uint64_t tag) {
  const int n = ansatz.parameter_count();
  const Eigen::VectorXcd v = ansatz.prepare(theta);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n + 1);

  std::uint64_t call = 0;
  for (const auto& term : decomposition.terms) {
    // V0 term: Re lambda <v|U|v>.
    {
      auto rng = seeds.stream(0x7e57, tag, call++);
      const double re =
          hadamard_test(v, *term.op, Part::kReal, shots, &rng);
      double contribution = term.coeff.real() * re;
      if (term.coeff.imag() != 0.0) {
        auto rng2 = seeds.stream(0x7e57, tag, call++);
        const double im =
            hadamard_test(v, *term.op, Part::kImag, shots, &rng2);
        contribution -= term.coeff.imag() * im;
      }
      out(0) += alpha * contribution;
    }
    // Vk terms: Re lambda <dk v|U|v> with <dk v| = (i/2) <w_k|, so
    // Re <dk v|U|v> = -(1/2) Im <w_k|U|v>; the overlap is evaluated as a
    // Hadamard test of W_k^dagger U G on |0...0>.
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXcd w = ansatz.derivative_unitary_state(theta, k);
      // <w|U|v> via one auxiliary state: both vectors are explicit here, so
      // emulate the interference estimator on the overlap directly.
      const Complex z = w.dot(term.op->apply(v));
      auto sample = [&](double value, std::uint64_t c) {
        auto rng = seeds.stream(0x7e57, tag, c);
        const double p = std::clamp(0.5 * (1.0 + value), 0.0, 1.0);
        std::binomial_distribution<long> dist(shots, p);
        return 2.0 * static_cast<double>(dist(rng)) /
                   static_cast<double>(shots) -
               1.0;
      };
      const double im = sample(z.imag(), call++);
      double contribution = -0.5 * term.coeff.real() * im;
      if (term.coeff.imag() != 0.0) {
        const double re = sample(z.real(), call++);
        contribution -= 0.5 * term.coeff.imag() * re;
      }
      out(k + 1) += alpha * alpha * contribution;
    }
  }
  return out;
}

McLachlanSolution solve_mclachlan(const Eigen::MatrixXd& m,
                                  const Eigen::VectorXd& v, double cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma(0);
  if (!(smax > 0.0)) {
    throw NumericalError("mclachlan solve: zero matrix");
  }
  McLachlanSolution sol;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  double smin_kept = smax;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) >= cutoff * smax) {
      inv(i) = 1.0 / sigma(i);
      smin_kept = sigma(i);
      ++sol.rank;
    }
  }
  if (sol.rank == 0)
    throw NumericalError(
        "mclachlan solve: all singular values below the cutoff (degenerate "
        "ansatz point)");
  sol.condition = smax / smin_kept;
  sol.xdot = svd.matrixV() * inv.asDiagonal() *
             (svd.matrixU().transpose() * v);
  return sol;
}

namespace {

VarState advance(const VarState& state, const Eigen::VectorXd& xdot,
                 double h) {
  VarState next = state;
  next.alpha += h * xdot(0);
  next.theta += h * xdot.tail(xdot.size() - 1);
  return next;
}

Eigen::VectorXd rate(const VarState& state, const Assembler& assembler,
                     double time, double cutoff) {
  auto [m, v] = assembler(state, time);
  return solve_mclachlan(m, v, cutoff).xdot;
}

}  // namespace

VarState step_euler(const VarState& state, const Eigen::MatrixXd& m,
                    const Eigen::VectorXd& v, double dtau, double cutoff) {
  return advance(state, solve_mclachlan(m, v, cutoff).xdot, dtau);
}

VarState step(const VarState& state, const Assembler& assembler, double time,
              double dtau, OdeMethod method, double cutoff) {
  if (method == OdeMethod::kForwardEuler) {
    return advance(state, rate(state, assembler, time, cutoff), dtau);
  }
  // Classic RK4 with re-assembled stages.
  const Eigen::VectorXd k1 = rate(state, assembler, time, cutoff);
  const Eigen::VectorXd k2 = rate(advance(state, k1, 0.5 * dtau), assembler,
                                  time + 0.5 * dtau, cutoff);
  const Eigen::VectorXd k3 = rate(advance(state, k2, 0.5 * dtau), assembler,
                                  time + 0.5 * dtau, cutoff);
  const Eigen::VectorXd k4 =
      rate(advance(state, k3, dtau), assembler, time + dtau, cutoff);
  return advance(state, (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, dtau);
}

InitResult initialize(const Ansatz& ansatz, const Eigen::VectorXd& target,
                      const SeedStream& seeds, int starts, int iterations,
                      double warn_residual) {
  const double norm = target.norm();
  require(norm > 0.0, "initialize: target vector has zero norm");
  require(target.size() == (Eigen::Index{1} << ansatz.qubits()),
          "initialize: target length does not match the register");
  const Eigen::VectorXd unit = target / norm;
  const int n = ansatz.parameter_count();

  auto cost_of = [&](const Eigen::VectorXd& theta) {
    Eigen::VectorXcd v = ansatz.prepare(theta);
    return (v - unit.cast<Complex>()).squaredNorm();
  };

  // Levenberg-Marquardt on || |v(theta)> - u ||^2 with the derivative Gram
  // matrix as the local metric.
  auto descend = [&](Eigen::VectorXd theta) {
    double cost = cost_of(theta);
    double lambda = 1e-3;
    for (int it = 0; it < iterations && cost > 1e-24; ++it) {
      AnsatzTangent t = tangent(ansatz, theta);
      Eigen::VectorXd grad(n);
      Eigen::MatrixXd gram(n, n);
      for (int k = 0; k < n; ++k) {
        grad(k) = -2.0 * unit.cast<Complex>().dot(t.derivatives[k]).real();
        for (int j = k; j < n; ++j) {
          const double g = t.derivatives[k].dot(t.derivatives[j]).real();
          gram(k, j) = g;
          gram(j, k) = g;
        }
      }
      if (grad.lpNorm<Eigen::Infinity>() < 1e-13) break;
      bool accepted = false;
      for (int attempt = 0; attempt < 24; ++attempt) {
        Eigen::MatrixXd damped = gram;
        damped.diagonal().array() += lambda;
        Eigen::VectorXd delta = damped.ldlt().solve(-0.5 * grad);
        const double trial_cost = cost_of(theta + delta);
        if (trial_cost < cost) {
          theta += delta;
          cost = trial_cost;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          break;
        }
        lambda *= 2.5;
      }
      if (!accepted) break;
    }
    return std::make_pair(theta, cost);
  };

  Eigen::VectorXd best_theta = Eigen::VectorXd::Zero(n);
  double best_cost = cost_of(best_theta);
  {
    auto [theta, cost] = descend(best_theta);
    if (cost < best_cost) {
      best_theta = theta;
      best_cost = cost;
    }
  }
  auto rng = seeds.stream(0x1417);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd theta(n);
    for (int k = 0; k < n; ++k) theta(k) = angle(rng);
    auto [opt, cost] = descend(theta);
    if (cost < best_cost) {
      best_theta = opt;
      best_cost = cost;
    }
  }

  InitResult out;
  out.theta = best_theta;
  out.alpha = norm;
  out.residual = std::sqrt(std::max(0.0, best_cost));
  out.residual_warning = out.residual >= warn_residual;
  return out;
}

L1Result enforce_l1(const Eigen::VectorXcd& state, double alpha,
                    EstimatorMode mode, long shots, std::mt19937_64* rng) {
  require(alpha > 0.0, "enforce_l1: alpha must be positive");
  double amplitude_sum;
  if (mode == EstimatorMode::kExact) {
    amplitude_sum = std::abs(state.sum());
  } else {
    int qubits = 0;
    while ((Eigen::Index{1} << qubits) < state.size()) ++qubits;
    // |sum_i v_i| via the projector identity: transform by H then X layers
    // and read out the multi-controlled Z.
    Eigen::VectorXcd phi = hadamard_layer(qubits)->apply(state);
    phi = x_layer(qubits)->apply(phi);
    const double e =
        hadamard_test(phi, *multi_controlled_z(qubits), Part::kReal, shots,
                      rng);
    amplitude_sum = std::sqrt(std::max(0.0, 0.5 * (1.0 - e)) *
                              std::pow(2.0, qubits));
  }
  const double s = alpha * amplitude_sum;
  if (s == 0.0) return {alpha, true};
  if (std::abs(s - 1.0) < 1e-12) return {alpha, false};
  return {alpha / s, false};
}

void VarQiteTrajectory::write_csv(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), "cannot open " + path + " for writing");
  const int n = records.empty() ? 0 : static_cast<int>(records[0].theta.size());
  out << "step,time,alpha,l1,l2";
  for (int k = 1; k <= n; ++k) out << ",theta_" << k;
  out << "\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << buf;
  };
  for (const auto& r : records) {
    out << r.step << ",";
    put(r.time); out << ",";
    put(r.alpha); out << ",";
    put(r.l1); out << ",";
    put(r.l2);
    for (int k = 0; k < n; ++k) {
      out << ",";
      put(r.theta(k));
    }
    out << "\n";
  }
}

void VarQiteTrajectory::write_json(const std::string& path) const {
  nlohmann::json doc;
  doc["init_residual"] = init_residual;
  doc["init_residual_warning"] = init_residual_warning;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json rec;
    rec["step"] = r.step;
    rec["time"] = r.time;
    rec["alpha"] = r.alpha;
    rec["l1"] = r.l1;
    rec["l2"] = r.l2;
    rec["theta"] = std::vector<double>(r.theta.data(),
                                       r.theta.data() + r.theta.size());
    rec["solution"] = std::vector<double>(
        r.solution.data(), r.solution.data() + r.solution.size());
    steps.push_back(std::move(rec));
  }
  doc["records"] = std::move(steps);
  std::ofstream out(path);
  require(out.good(), "cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
}

GeneratorSource GeneratorSource::constant(SparseGenerator gen) {
  GeneratorSource src;
  src.time_dependent = false;
  auto shared = std::make_shared<SparseGenerator>(std::move(gen));
  src.at = [shared](double) { return *shared; };
  return src;
}

GeneratorSource GeneratorSource::constant(SparseGenerator gen,
                                          const Grid& grid) {
  auto shared = std::make_shared<SparseGenerator>(std::move(gen));
  auto shared_grid = std::make_shared<Grid>(grid);
  GeneratorSource src;
  src.time_dependent = false;
  src.at = [shared](double) { return *shared; };
  src.decomposition_at = [shared, shared_grid](double) {
    return decompose_generator(*shared, *shared_grid);
  };
  return src;
}

VarQiteTrajectory evolve(const GeneratorSource& source, const Ansatz& ansatz,
                         const Eigen::VectorXd& u0, double t0,
                         const VarQiteConfig& config, const SeedStream& seeds) {
  config.validate();
  InitResult init = initialize(ansatz, u0, seeds, config.init_starts,
                               config.init_iterations);

  VarQiteTrajectory trajectory;
  trajectory.init_residual = init.residual;
  trajectory.init_residual_warning = init.residual_warning;

  VarState state{init.theta, init.alpha};

  // Cache for time-independent generators (and their decomposition when the
  // shot estimator is selected).
  std::optional<SparseGenerator> cached;
  std::optional<GeneratorDecomposition> cached_decomposition;
  auto generator_at = [&](double t) -> SparseGenerator {
    if (!source.time_dependent) {
      if (!cached) cached = source.at(t);
      return *cached;
    }
    return source.at(t);
  };

  long shot_tag = 0;
  Assembler assembler = [&](const VarState& s, double t) {
    AnsatzTangent tan = tangent(ansatz, s.theta);
    Eigen::MatrixXd m = assemble_m(tan, s.alpha);
    Eigen::VectorXd v;
    SparseGenerator gen = generator_at(t);
    if (config.v_mode == EstimatorMode::kExact) {
      v = assemble_v(tan, s.alpha, gen);
    } else {
      require(static_cast<bool>(source.decomposition_at),
              "evolve: the shot-mode V estimator needs a generator "
              "decomposition source");
      if (!source.time_dependent) {
        if (!cached_decomposition) cached_decomposition = source.decomposition_at(t);
        v = assemble_v_shots(ansatz, s.theta, s.alpha, *cached_decomposition,
                             config.v_shots, seeds, ++shot_tag);
      } else {
        v = assemble_v_shots(ansatz, s.theta, s.alpha,
                             source.decomposition_at(t), config.v_shots,
                             seeds, ++shot_tag);
      }
    }
    return std::make_pair(std::move(m), std::move(v));
  };

  auto record = [&](long k, double t) {
    Eigen::VectorXcd v = ansatz.prepare(state.theta);
    TrajectoryRecord r;
    r.step = k;
    r.time = t;
    r.alpha = state.alpha;
    r.theta = state.theta;
    r.solution = state.alpha * v.real();
    r.l1 = r.solution.cwiseAbs().sum();
    r.l2 = r.solution.norm();
    trajectory.records.push_back(std::move(r));
  };

  // Bring the starting scale onto the simplex before the first record.
  if (config.l1_enforce) {
    Eigen::VectorXcd v = ansatz.prepare(state.theta);
    auto rng = seeds.stream(0x11, std::uint64_t{0});
    state.alpha = enforce_l1(v, state.alpha, config.l1_mode, config.l1_shots,
                             &rng).alpha;
  }
  record(0, t0);

  for (long k = 1; k <= config.steps; ++k) {
    const double t = t0 + static_cast<double>(k - 1) * config.dtau;
    state = step(state, assembler, t, config.dtau, config.method,
                 config.svd_cutoff);
    if (config.l1_enforce && (k % config.l1_every == 0)) {
      Eigen::VectorXcd v = ansatz.prepare(state.theta);
      auto rng = seeds.stream(0x11, static_cast<std::uint64_t>(k));
      state.alpha = enforce_l1(v, state.alpha, config.l1_mode, config.l1_shots,
                               &rng).alpha;
    }
    record(k, t0 + static_cast<double>(k) * config.dtau);
  }
  return trajectory;
}

}  // namespace feynkac
