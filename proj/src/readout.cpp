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

#include "feynkac/readout.hpp"

#include <cmath>

#include "feynkac/errors.hpp"

namespace feynkac {

Eigen::VectorXcd UnitarySum::apply_to_zero(int qubits) const {
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(Eigen::Index{1} << qubits);
  zero(0) = 1.0;
  return apply(zero);
}

Eigen::VectorXcd UnitarySum::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& term : terms) out += term.coeff * term.op->apply(v);
  return out;
}

ObservableSpec ObservableSpec::from_values(Eigen::VectorXd values,
                                           EstimatorMode mode, long shots) {
  ObservableSpec spec;
  spec.norm_constant = values.norm();
  require(spec.norm_constant > 0.0, "observable: zero target function");
  spec.f = std::move(values);
  spec.mode = mode;
  spec.shots = shots;
  return spec;
}

ObservableSpec uniform_observable(const Grid& grid) {
  const int n = grid.qubits();
  const double amp = std::pow(2.0, -0.5 * n);
  ObservableSpec spec = ObservableSpec::from_values(
      Eigen::VectorXd::Constant(grid.nodes(), amp));
  UnitarySum sum;
  sum.terms.push_back({Complex(1.0, 0.0), hadamard_layer(n)});
  spec.preparation = std::move(sum);
  return spec;
}

ObservableSpec moment_observable(const Grid& grid, int component) {
  require(component >= 0 && component < grid.dims(),
          "moment_observable: bad dimension index");
  const int n = grid.qubits();
  const int bits = grid.bits_per_dim();

  Eigen::VectorXd f(grid.nodes());
  for (std::size_t node = 0; node < grid.nodes(); ++node)
    f(node) = grid.coord(grid.axis_index(node, component), component);
  ObservableSpec spec = ObservableSpec::from_values(f);
  spec.component = component;

  // Coordinate values on the component block as diagonal-Pauli terms; the
  // remaining qubits only carry the Hadamard layer.
  std::vector<double> coord(grid.points_per_dim());
  for (std::size_t i = 0; i < coord.size(); ++i)
    coord[i] = grid.coord(i, component);
  const double rescale = std::pow(2.0, 0.5 * n) / spec.norm_constant;

  UnitarySum sum;
  for (const auto& [mask, c] : walsh_diagonal_terms(coord, bits)) {
    if (mask == 0) {
      sum.terms.push_back({Complex(c * rescale, 0.0), hadamard_layer(n)});
      continue;
    }
    std::string ops(n, 'I');
    for (int b = 0; b < bits; ++b) {
      if (mask & (std::uint64_t{1} << b)) {
        // Bit b of the axis index maps to register qubit
        // component*bits + (bits-1-b) counted from the most significant.
        ops[component * bits + (bits - 1 - b)] = 'Z';
      }
    }
    sum.terms.push_back(
        {Complex(c * rescale, 0.0),
         std::make_shared<ComposedOp>(std::vector<LinearOpPtr>{
             pauli_op(PauliString(ops)), hadamard_layer(n)})});
  }
  spec.preparation = std::move(sum);
  return spec;
}

double direct_expectation(const ScaledState& state, const Eigen::VectorXd& f) {
  require(state.v.size() == f.size(),
          "direct_expectation: length mismatch");
  return state.values().dot(f);
}

namespace {

// Estimates Re or Im of <v|U|v> with the configured estimator.
double overlap_part(const Eigen::VectorXcd& v, const LinearOp& op, Part part,
                    EstimatorMode mode, long shots, const SeedStream& seeds,
                    std::uint64_t tag, std::uint64_t& counter) {
  if (mode == EstimatorMode::kExact)
    return hadamard_test(v, op, part);
  auto rng = seeds.stream(0x0b5e, tag, counter++);
  return hadamard_test(v, op, part, shots, &rng);
}

}  // namespace

double expectation_via_sf(const ScaledState& state, const ObservableSpec& spec,
                          const SeedStream& seeds, std::uint64_t tag) {
  require(state.v.size() == spec.f.size(), "expectation_via_sf: length mismatch");
  const double c_norm = spec.norm_constant;
  require(std::abs(spec.f.norm() / c_norm - 1.0) < 1e-12,
          "expectation_via_sf: spec is not normalized");

  if (spec.mode == EstimatorMode::kExact) {
    const Complex overlap = state.v.dot((spec.f / c_norm).cast<Complex>());
    const double squared =
        state.alpha * state.alpha * std::norm(overlap);
    return std::sqrt(squared) * c_norm;
  }

  require(spec.preparation.has_value(),
          "expectation_via_sf: shot mode needs a unitary preparation");
  int qubits = 0;
  while ((Eigen::Index{1} << qubits) < state.v.size()) ++qubits;

  // <v|S_f |0><0| S_f^+|v> with |0><0| = (I - X^n CnZ X^n)/2, expanded over
  // the unitary pairs of the preparation.
  const auto& terms = spec.preparation->terms;
  LinearOpPtr flip = x_layer(qubits);
  LinearOpPtr cnz = multi_controlled_z(qubits);
  std::uint64_t counter = 0;
  double total = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (std::size_t l = 0; l < terms.size(); ++l) {
      const Complex weight = 0.5 * terms[k].coeff * std::conj(terms[l].coeff);
      const LinearOpPtr l_adj = terms[l].op->adjoint();
      ComposedOp plain({terms[k].op, l_adj});
      ComposedOp projected({terms[k].op, flip, cnz, flip, l_adj});
      auto estimate = [&](const LinearOp& op) {
        Complex z(0.0, 0.0);
        z.real(overlap_part(state.v, op, Part::kReal, spec.mode, spec.shots,
                            seeds, tag, counter));
        if (std::abs(weight.imag()) > 0.0)
          z.imag(overlap_part(state.v, op, Part::kImag, spec.mode, spec.shots,
                              seeds, tag, counter));
        return z;
      };
      const Complex z_plain = estimate(plain);
      const Complex z_projected = estimate(projected);
      total += (weight * (z_plain - z_projected)).real();
    }
  }
  const double squared = state.alpha * state.alpha * std::max(0.0, total);
  return std::sqrt(squared) * c_norm;
}

double moment_component(const ScaledState& state, const Grid& grid,
                        int component, EstimatorMode mode,
                        const SeedStream& seeds, long shots,
                        std::uint64_t tag) {
  ObservableSpec spec = moment_observable(grid, component);
  spec.mode = mode;
  spec.shots = shots;
  return expectation_via_sf(state, spec, seeds, tag);
}

IntervalOperator interval_operator(std::uint64_t upper, int qubits) {
  require(qubits >= 1 && qubits <= 24, "interval_operator: bad qubit count");
  const std::uint64_t dim = std::uint64_t{1} << qubits;
  require(upper < dim, "interval_operator: upper index out of range");

  IntervalOperator out;
  out.action = Eigen::VectorXd::Zero(dim);
  for (std::uint64_t i = 0; i <= upper; ++i) out.action(i) = 1.0;

  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  Eigen::Matrix2cd h;
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;

  // Dyadic blocks of the first (upper + 1) basis states, largest first:
  // each block fixes the high bits and spreads a Hadamard register over the
  // free low bits.
  const std::uint64_t count = upper + 1;
  std::uint64_t start = 0;
  for (int e = qubits; e >= 0; --e) {
    if (!(count & (std::uint64_t{1} << e))) continue;
    std::vector<Eigen::Matrix2cd> factors(qubits);
    std::string pattern(qubits, '.');
    for (int q = 0; q < qubits; ++q) {
      const int bit = qubits - 1 - q;
      if (bit < e) {
        factors[q] = h;
        pattern[q] = 'H';
      } else if (start & (std::uint64_t{1} << bit)) {
        factors[q] = x;
        pattern[q] = '1';
      } else {
        factors[q] = id;
        pattern[q] = '0';
      }
    }
    out.pieces.push_back(
        {Complex(std::pow(2.0, 0.5 * e), 0.0),
         std::make_shared<FactoredOneQubitOp>(std::move(factors),
                                              "block[" + pattern + "]")});
    start += std::uint64_t{1} << e;
  }
  return out;
}

PiecewiseSf piecewise_taylor_sf(const Grid& grid, const Eigen::VectorXd& f,
                                int pieces, int order) {
  const int dims = grid.dims();
  require(dims == 1 || dims == 2,
          "piecewise_taylor_sf: only D = 1 and D = 2 are supported "
          "(combinatorial cost guard)");
  require(static_cast<std::size_t>(f.size()) == grid.nodes(),
          "piecewise_taylor_sf: value vector length mismatch");
  require(pieces >= 1 && order >= 0, "piecewise_taylor_sf: bad parameters");
  const std::size_t n_m = grid.points_per_dim();
  require(n_m % static_cast<std::size_t>(pieces) == 0,
          "piecewise_taylor_sf: pieces must divide the points per dimension");
  const std::size_t block = n_m / static_cast<std::size_t>(pieces);
  const int bits = grid.bits_per_dim();
  require(block >= static_cast<std::size_t>(order) + 1,
          "piecewise_taylor_sf: block too small for the polynomial order");

  // Indicator loader for one index block [lo, lo + block - 1] along an axis.
  auto block_pieces = [&](std::size_t lo) {
    std::vector<UnitaryTerm> out;
    IntervalOperator upper_op =
        interval_operator(lo + block - 1, bits);
    for (auto& piece : upper_op.pieces) out.push_back(piece);
    if (lo > 0) {
      IntervalOperator lower_op = interval_operator(lo - 1, bits);
      for (auto& piece : lower_op.pieces)
        out.push_back({-piece.coeff, piece.op});
    }
    return out;
  };

  PiecewiseSf result;
  const int n = grid.qubits();

  // Per-axis monomial exponents up to `order`.
  std::vector<std::vector<int>> exps;
  if (dims == 1) {
    for (int b = 0; b <= order; ++b) exps.push_back({b});
  } else {
    for (int b1 = 0; b1 <= order; ++b1)
      for (int b2 = 0; b2 <= order; ++b2) exps.push_back({b1, b2});
  }

  double residual = 0.0;
  std::vector<int> piece_index(dims, 0);
  for (;;) {
    // Gather the nodes of this block combination and fit the polynomial.
    std::vector<std::size_t> nodes;
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
      bool inside = true;
      for (int d = 0; d < dims; ++d) {
        const std::size_t i = grid.axis_index(node, d);
        if (i / block != static_cast<std::size_t>(piece_index[d]))
          inside = false;
      }
      if (inside) nodes.push_back(node);
    }
    Eigen::MatrixXd design(nodes.size(), exps.size());
    Eigen::VectorXd rhs(nodes.size());
    for (std::size_t row = 0; row < nodes.size(); ++row) {
      rhs(row) = f(nodes[row]);
      for (std::size_t mi = 0; mi < exps.size(); ++mi) {
        double v = 1.0;
        for (int d = 0; d < dims; ++d) {
          const double xi =
              static_cast<double>(grid.axis_index(nodes[row], d)) *
              grid.spacing(d);
          for (int p = 0; p < exps[mi][d]; ++p) v *= xi;
        }
        design(row, mi) = v;
      }
    }
    Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(rhs);
    residual = std::max(
        residual, (design * coeffs - rhs).cwiseAbs().maxCoeff());

    // Emit the operator terms of this block combination.
    for (std::size_t mi = 0; mi < exps.size(); ++mi) {
      double c = coeffs(mi);
      for (int d = 0; d < dims; ++d)
        for (int p = 0; p < exps[mi][d]; ++p) c *= grid.spacing(d);
      if (std::abs(c) < 1e-13) continue;

      // Per-axis diagonal Walsh terms of i^beta.
      std::vector<std::vector<std::pair<std::uint64_t, double>>> diag(dims);
      for (int d = 0; d < dims; ++d) {
        std::vector<double> pw(n_m);
        for (std::size_t i = 0; i < n_m; ++i)
          pw[i] = std::pow(static_cast<double>(i), exps[mi][d]);
        diag[d] = walsh_diagonal_terms(pw, bits);
      }
      // Per-axis indicator pieces.
      std::vector<std::vector<UnitaryTerm>> ind(dims);
      for (int d = 0; d < dims; ++d)
        ind[d] = block_pieces(static_cast<std::size_t>(piece_index[d]) * block);

      // Distribute: diagonal-string x indicator pieces per axis.
      std::vector<std::size_t> di(dims, 0), ii(dims, 0);
      for (;;) {
        Complex coeff(c, 0.0);
        std::string zops(n, 'I');
        std::vector<LinearOpPtr> factors;
        // Assemble a full-register Z string from the per-axis masks.
        for (int d = 0; d < dims; ++d) {
          coeff *= diag[d][di[d]].second;
          const std::uint64_t mask = diag[d][di[d]].first;
          for (int b = 0; b < bits; ++b)
            if (mask & (std::uint64_t{1} << b))
              zops[d * bits + (bits - 1 - b)] = 'Z';
        }
        // Tensor the per-axis indicator factors into one block loader.
        {
          std::vector<Eigen::Matrix2cd> combined;
          std::string label;
          for (int d = 0; d < dims; ++d) {
            coeff *= ind[d][ii[d]].coeff;
            const auto* fac = dynamic_cast<const FactoredOneQubitOp*>(
                ind[d][ii[d]].op.get());
            require(fac != nullptr, "piecewise_taylor_sf: internal error");
            label += (d ? " (x) " : "") + fac->describe();
            for (int q = 0; q < bits; ++q)
              combined.push_back(fac->factor(q));
          }
          factors.push_back(std::make_shared<FactoredOneQubitOp>(
              std::move(combined), label));
        }
        LinearOpPtr op;
        if (zops.find('Z') != std::string::npos) {
          op = std::make_shared<ComposedOp>(std::vector<LinearOpPtr>{
              pauli_op(PauliString(zops)), factors.front()});
        } else {
          op = factors.front();
        }
        result.sum.terms.push_back({coeff, op});

        int d = dims - 1;
        for (;;) {
          if (d < 0) break;
          if (ii[d] + 1 < ind[d].size()) {
            ++ii[d];
            break;
          }
          ii[d] = 0;
          if (di[d] + 1 < diag[d].size()) {
            ++di[d];
            break;
          }
          di[d] = 0;
          --d;
        }
        if (d < 0) break;
      }
    }

    int d = dims - 1;
    while (d >= 0 && piece_index[d] + 1 == pieces) piece_index[d--] = 0;
    if (d < 0) break;
    ++piece_index[d];
  }

  result.action = result.sum.apply_to_zero(n).real();
  result.residual = residual;
  return result;
}

double taylor_error_bound(int order, double cell_width, int dims,
                          double deriv_bound) {
  require(order >= 0 && cell_width > 0.0 && dims >= 1 && deriv_bound >= 0.0,
          "taylor_error_bound: bad inputs");
  return deriv_bound * std::pow(cell_width, dims * (order + 1));
}

}  // namespace feynkac
