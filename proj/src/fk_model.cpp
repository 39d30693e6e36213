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

#include "feynkac/fk_model.hpp"

#include <cmath>

#include "feynkac/errors.hpp"

namespace feynkac {

namespace {

double param(const std::map<std::string, double>& params,
             const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double required_param(const std::map<std::string, double>& params,
                      const std::string& key, const std::string& preset) {
  auto it = params.find(key);
  require(it != params.end(),
          "preset " + preset + ": missing required parameter '" + key + "'");
  return it->second;
}

}  // namespace

Preset parse_preset(const std::string& name) {
  if (name == "heat2d_correlated") return Preset::kHeat2dCorrelated;
  if (name == "heat1d") return Preset::kHeat1d;
  if (name == "ornstein_uhlenbeck1d") return Preset::kOrnsteinUhlenbeck1d;
  if (name == "black_scholes1d") return Preset::kBlackScholes1d;
  throw ValidationError("unknown preset '" + name + "'");
}

SdeSystem preset_system(const std::string& name,
                        const std::map<std::string, double>& params) {
  return preset_system(parse_preset(name), params);
}

SdeSystem preset_system(Preset preset,
                        const std::map<std::string, double>& params) {
  SdeSystem sde;
  switch (preset) {
    case Preset::kHeat2dCorrelated: {
      const double rho = required_param(params, "rho", "heat2d_correlated");
      const double s1 = param(params, "sigma1", 1.0);
      const double s2 = param(params, "sigma2", 1.0);
      require(std::abs(rho) <= 1.0, "heat2d_correlated: |rho| must be <= 1");
      require(s1 > 0.0 && s2 > 0.0,
              "heat2d_correlated: variances must be positive");
      Eigen::MatrixXd sigma(2, 2);
      sigma << std::sqrt(s1), 0.0,
               std::sqrt(s2) * rho, std::sqrt(s2) * std::sqrt(1.0 - rho * rho);
      sde.dims = 2;
      sde.brownians = 2;
      sde.drift = [](const Eigen::VectorXd&, double) {
        return Eigen::VectorXd::Zero(2).eval();
      };
      sde.diffusion = [sigma](const Eigen::VectorXd&, double) { return sigma; };
      sde.discount = [](const Eigen::VectorXd&, double) { return 0.0; };
      break;
    }
    case Preset::kHeat1d: {
      const double s = param(params, "sigma", 1.0);
      require(s > 0.0, "heat1d: variance must be positive");
      sde.dims = 1;
      sde.brownians = 1;
      sde.drift = [](const Eigen::VectorXd&, double) {
        return Eigen::VectorXd::Zero(1).eval();
      };
      sde.diffusion = [s](const Eigen::VectorXd&, double) {
        return Eigen::MatrixXd::Constant(1, 1, std::sqrt(s)).eval();
      };
      sde.discount = [](const Eigen::VectorXd&, double) { return 0.0; };
      break;
    }
    case Preset::kOrnsteinUhlenbeck1d: {
      const double theta =
          required_param(params, "theta", "ornstein_uhlenbeck1d");
      const double sigma =
          required_param(params, "sigma", "ornstein_uhlenbeck1d");
      require(sigma > 0.0, "ornstein_uhlenbeck1d: sigma must be positive");
      sde.dims = 1;
      sde.brownians = 1;
      sde.drift = [theta](const Eigen::VectorXd& x, double) {
        return (-theta * x).eval();
      };
      sde.diffusion = [sigma](const Eigen::VectorXd&, double) {
        return Eigen::MatrixXd::Constant(1, 1, sigma).eval();
      };
      sde.discount = [](const Eigen::VectorXd&, double) { return 0.0; };
      break;
    }
    case Preset::kBlackScholes1d: {
      const double sigma = required_param(params, "sigma", "black_scholes1d");
      const double r = required_param(params, "r", "black_scholes1d");
      require(sigma > 0.0, "black_scholes1d: sigma must be positive");
      sde.dims = 1;
      sde.brownians = 1;
      // a = sigma^2 x^2 / 2, b = r x, c = r.
      sde.drift = [r](const Eigen::VectorXd& x, double) {
        return (r * x).eval();
      };
      sde.diffusion = [sigma](const Eigen::VectorXd& x, double) {
        return Eigen::MatrixXd::Constant(1, 1, sigma * x(0)).eval();
      };
      sde.discount = [r](const Eigen::VectorXd&, double) { return r; };
      break;
    }
  }
  return sde;
}

Coefficients1D coefficients_1d(const SdeSystem& sde) {
  require(sde.dims == 1, "coefficients_1d: system must be one-dimensional");
  Coefficients1D c;
  c.a = [sde](double x, double t) {
    Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
    Eigen::MatrixXd s = sde.diffusion(xv, t);
    return 0.5 * (s * s.transpose())(0, 0);
  };
  c.b = [sde](double x, double t) {
    Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
    return sde.drift(xv, t)(0);
  };
  c.c = [sde](double x, double t) {
    Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
    return sde.discount(xv, t);
  };
  return c;
}

CoefficientField evaluate_coefficients(const SdeSystem& sde, const Grid& grid,
                                       double t) {
  require(sde.dims == grid.dims(),
          "evaluate_coefficients: grid dimension does not match the system");
  CoefficientField field;
  field.grid = &grid;
  const std::size_t n = grid.nodes();
  field.diffusion_tensor.reserve(n);
  field.drift_vector.reserve(n);
  field.discount_scalar.reserve(n);
  for (std::size_t node = 0; node < n; ++node) {
    std::vector<double> xs = grid.coords(node);
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(xs.data(), xs.size());
    Eigen::MatrixXd sigma = sde.diffusion(x, t);
    require(sigma.rows() == sde.dims && sigma.cols() == sde.brownians,
            "evaluate_coefficients: diffusion output has wrong shape");
    field.diffusion_tensor.push_back(0.5 * sigma * sigma.transpose());
    field.drift_vector.push_back(sde.drift(x, t));
    field.discount_scalar.push_back(sde.discount(x, t));
  }
  return field;
}

Eigen::VectorXd wick_potential(const Coefficients1D& coeffs, const Grid& grid,
                               double t) {
  require(grid.dims() == 1, "wick_potential: grid must be one-dimensional");
  const std::size_t n = grid.nodes();
  const double dx = grid.spacing(0);

  auto sample = [&](auto&& f, double at) {
    Eigen::VectorXd v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = f(grid.coord(i, 0), at);
    return v;
  };

  Eigen::VectorXd a = sample(coeffs.a, t);
  Eigen::VectorXd b = sample(coeffs.b, t);
  Eigen::VectorXd c = sample(coeffs.c, t);
  for (std::size_t i = 0; i < n; ++i)
    require(a(i) > 0.0, "wick_potential: a(x,t) must be positive on the grid");

  // Cumulative trapezoid of b/(2a) anchored at the left grid edge.
  auto integral = [&](double at) {
    Eigen::VectorXd ba(n);
    for (std::size_t i = 0; i < n; ++i) {
      double x = grid.coord(i, 0);
      double av = coeffs.a(x, at);
      require(av > 0.0, "wick_potential: a(x,t) must be positive on the grid");
      ba(i) = coeffs.b(x, at) / (2.0 * av);
    }
    Eigen::VectorXd acc(n);
    acc(0) = 0.0;
    for (std::size_t i = 1; i < n; ++i)
      acc(i) = acc(i - 1) + 0.5 * (ba(i - 1) + ba(i)) * dx;
    return acc;
  };

  const double ht = 1e-6 * std::max(1.0, std::abs(t));
  Eigen::VectorXd dint_dt = (integral(t + ht) - integral(t - ht)) / (2.0 * ht);

  // d/dx (b/a) by central differences, one-sided second order at the edges.
  Eigen::VectorXd ratio(n);
  for (std::size_t i = 0; i < n; ++i) ratio(i) = b(i) / a(i);
  Eigen::VectorXd dratio(n);
  if (n >= 3) {
    for (std::size_t i = 1; i + 1 < n; ++i)
      dratio(i) = (ratio(i + 1) - ratio(i - 1)) / (2.0 * dx);
    dratio(0) = (-3.0 * ratio(0) + 4.0 * ratio(1) - ratio(2)) / (2.0 * dx);
    dratio(n - 1) =
        (3.0 * ratio(n - 1) - 4.0 * ratio(n - 2) + ratio(n - 3)) / (2.0 * dx);
  } else {
    dratio(0) = (ratio(1) - ratio(0)) / dx;
    dratio(1) = dratio(0);
  }

  Eigen::VectorXd w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w(i) = -dint_dt(i) - b(i) * b(i) / (4.0 * a(i)) - 0.5 * a(i) * dratio(i) -
           c(i);
  }
  return w;
}

void validate_sde(const SdeSystem& sde, const Grid& grid, double t,
                  const SeedStream& seeds, int samples, double tol) {
  auto rng = seeds.stream(0x5de);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(sde.dims);
    for (int d = 0; d < sde.dims; ++d)
      x(d) = grid.origin(d) + unit(rng) * grid.extent(d);
    Eigen::MatrixXd sigma = sde.diffusion(x, t);
    require(sigma.rows() == sde.dims && sigma.cols() == sde.brownians,
            "validate_sde: diffusion output has wrong shape");
    Eigen::MatrixXd cov = sigma * sigma.transpose();
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-12,
            "validate_sde: Sigma Sigma^T is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    require(eig.eigenvalues().minCoeff() >= -tol,
            "validate_sde: Sigma Sigma^T has a negative eigenvalue");
  }
}

}  // namespace feynkac
