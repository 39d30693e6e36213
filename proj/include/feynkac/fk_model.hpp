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
#include <map>
#include <string>
#include <vector>

#include "feynkac/grid.hpp"
#include "feynkac/rng.hpp"

namespace feynkac {

/// A system of SDEs  dX_t = mu(X_t, t) dt + Sigma(X_t, t) dW_t  together with
/// a discount rate r(X_t, t). Sigma is D x N: `dims` state components driven
/// by `brownians` independent Brownian motions.
struct SdeSystem {
  int dims = 1;
  int brownians = 1;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> drift;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)> diffusion;
  std::function<double(const Eigen::VectorXd&, double)> discount;
};

/// Nodal samples of the generator coefficients on a grid: per node the
/// diffusion tensor (1/2) Sigma Sigma^T, the drift vector and the discount.
struct CoefficientField {
  const Grid* grid = nullptr;
  std::vector<Eigen::MatrixXd> diffusion_tensor;  // D x D, symmetric
  std::vector<Eigen::VectorXd> drift_vector;      // D
  std::vector<double> discount_scalar;
};

/// Scalar PDE coefficients a, b, c of
///   du/dt = a(x,t) u'' + b(x,t) u' - c(x,t) u   (one dimension).
struct Coefficients1D {
  std::function<double(double, double)> a;
  std::function<double(double, double)> b;
  std::function<double(double, double)> c;
};

enum class Preset {
  kHeat2dCorrelated,
  kHeat1d,
  kOrnsteinUhlenbeck1d,
  kBlackScholes1d,
};

Preset parse_preset(const std::string& name);

/// Builds one of the named coefficient specializations. Required params:
///   heat2d_correlated:    rho (sigma1, sigma2 optional, default 1)
///   heat1d:               sigma (optional, default 1)
///   ornstein_uhlenbeck1d: theta, sigma
///   black_scholes1d:      sigma, r
SdeSystem preset_system(Preset preset,
                        const std::map<std::string, double>& params);
SdeSystem preset_system(const std::string& name,
                        const std::map<std::string, double>& params);

/// One-dimensional PDE coefficients of a 1-d SdeSystem: a = Sigma^2/2,
/// b = mu, c = r.
Coefficients1D coefficients_1d(const SdeSystem& sde);

/// Samples the generator coefficients at every grid node at time t.
CoefficientField evaluate_coefficients(const SdeSystem& sde, const Grid& grid,
                                       double t);

/// Effective potential of the drift-removing substitution u = e^g v:
///   w(x,t) = -d/dt Int b/(2a) dx - b^2/(4a) - (a/2) d/dx (b/a) - c.
/// The x-integral is a cumulative trapezoid from the left grid edge; the x
/// and t derivatives are central differences (t step 1e-6 * max(1, |t|)).
Eigen::VectorXd wick_potential(const Coefficients1D& coeffs, const Grid& grid,
                               double t);

/// Eigenvalue check that Sigma Sigma^T is symmetric PSD at random sample
/// points; throws ValidationError when it is not.
void validate_sde(const SdeSystem& sde, const Grid& grid, double t,
                  const SeedStream& seeds, int samples = 100,
                  double tol = 1e-10);

}  // namespace feynkac
