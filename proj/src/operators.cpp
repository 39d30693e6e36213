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

#include "feynkac/operators.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace feynkac {

Eigen::MatrixXcd LinearOp::dense() const {
  const std::size_t n = dim();
  Eigen::MatrixXcd m(n, n);
  Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    basis(i) = 1.0;
    m.col(i) = apply(basis);
    basis(i) = 0.0;
  }
  return m;
}

PhasedPermutationOp::PhasedPermutationOp(int qubits,
                                         std::vector<std::size_t> target,
                                         std::vector<Complex> phase,
                                         std::string description)
    : qubits_(qubits), target_(std::move(target)), phase_(std::move(phase)),
      description_(std::move(description)) {
  require(target_.size() == dim() && phase_.size() == dim(),
          "phased permutation: table size mismatch");
}

Eigen::VectorXcd PhasedPermutationOp::apply(const Eigen::VectorXcd& v) const {
  require(static_cast<std::size_t>(v.size()) == dim(),
          "operator apply: dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (std::size_t i = 0; i < target_.size(); ++i)
    out(target_[i]) += phase_[i] * v(i);
  return out;
}

Eigen::MatrixXcd PhasedPermutationOp::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
  for (std::size_t i = 0; i < target_.size(); ++i)
    m(target_[i], i) = phase_[i];
  return m;
}

LinearOpPtr PhasedPermutationOp::adjoint() const {
  std::vector<std::size_t> target(dim());
  std::vector<Complex> phase(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    target[target_[i]] = i;
    phase[target_[i]] = std::conj(phase_[i]);
  }
  return std::make_shared<PhasedPermutationOp>(
      qubits_, std::move(target), std::move(phase), description_ + "^+");
}

void PhasedPermutationOp::verify_unitary(double tol) const {
  std::vector<bool> hit(dim(), false);
  for (std::size_t i = 0; i < target_.size(); ++i) {
    require(target_[i] < dim() && !hit[target_[i]],
            "operator '" + description_ + "' is not a permutation");
    hit[target_[i]] = true;
    require(std::abs(std::abs(phase_[i]) - 1.0) <= tol,
            "operator '" + description_ + "' has a non-unimodular phase");
  }
}

FactoredOneQubitOp::FactoredOneQubitOp(std::vector<Eigen::Matrix2cd> factors,
                                       std::string description)
    : factors_(std::move(factors)), description_(std::move(description)) {
  require(!factors_.empty() && factors_.size() <= 24,
          "factored operator: bad qubit count");
}

Eigen::VectorXcd FactoredOneQubitOp::apply(const Eigen::VectorXcd& v) const {
  require(static_cast<std::size_t>(v.size()) == dim(),
          "operator apply: dimension mismatch");
  Eigen::VectorXcd out = v;
  const int n = qubits();
  for (int q = 0; q < n; ++q) {
    const Eigen::Matrix2cd& f = factors_[q];
    const std::size_t bit = std::size_t{1} << (n - 1 - q);  // qubit 1 is MSB
    for (std::size_t i = 0; i < dim(); ++i) {
      if (i & bit) continue;
      const std::size_t j = i | bit;
      const Complex lo = out(i), hi = out(j);
      out(i) = f(0, 0) * lo + f(0, 1) * hi;
      out(j) = f(1, 0) * lo + f(1, 1) * hi;
    }
  }
  return out;
}

LinearOpPtr FactoredOneQubitOp::adjoint() const {
  std::vector<Eigen::Matrix2cd> adj;
  adj.reserve(factors_.size());
  for (const auto& f : factors_) adj.push_back(f.adjoint());
  return std::make_shared<FactoredOneQubitOp>(std::move(adj),
                                              description_ + "^+");
}

void FactoredOneQubitOp::verify_unitary(double tol) const {
  for (const auto& f : factors_) {
    Eigen::Matrix2cd err = f.adjoint() * f - Eigen::Matrix2cd::Identity();
    require(err.cwiseAbs().maxCoeff() <= tol,
            "operator '" + description_ + "' has a non-unitary factor");
  }
}

ComposedOp::ComposedOp(std::vector<LinearOpPtr> factors)
    : factors_(std::move(factors)) {
  require(!factors_.empty(), "composed operator: no factors");
  for (const auto& f : factors_)
    require(f->qubits() == factors_.front()->qubits(),
            "composed operator: qubit count mismatch");
}

Eigen::VectorXcd ComposedOp::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = v;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it)
    out = (*it)->apply(out);
  return out;
}

std::string ComposedOp::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " . ";
    os << factors_[i]->describe();
  }
  return os.str();
}

LinearOpPtr ComposedOp::adjoint() const {
  std::vector<LinearOpPtr> adj;
  adj.reserve(factors_.size());
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it)
    adj.push_back((*it)->adjoint());
  return std::make_shared<ComposedOp>(std::move(adj));
}

void ComposedOp::verify_unitary(double tol) const {
  for (const auto& f : factors_) f->verify_unitary(tol);
}

MatrixOp::MatrixOp(Eigen::MatrixXcd m, std::string description)
    : m_(std::move(m)), description_(std::move(description)) {
  require(m_.rows() == m_.cols() && m_.rows() > 0,
          "matrix operator: must be square");
  qubits_ = 0;
  while ((Eigen::Index{1} << qubits_) < m_.rows()) ++qubits_;
  require((Eigen::Index{1} << qubits_) == m_.rows(),
          "matrix operator: dimension is not a power of two");
}

Eigen::VectorXcd MatrixOp::apply(const Eigen::VectorXcd& v) const {
  require(v.size() == m_.rows(), "operator apply: dimension mismatch");
  return m_ * v;
}

LinearOpPtr MatrixOp::adjoint() const {
  return std::make_shared<MatrixOp>(m_.adjoint(), description_ + "^+");
}

void MatrixOp::verify_unitary(double tol) const {
  require(m_.rows() <= 1024,
          "matrix operator: unitarity check guarded to dim <= 1024");
  Eigen::MatrixXcd err =
      m_.adjoint() * m_ - Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
  require(err.cwiseAbs().maxCoeff() <= tol,
          "operator '" + description_ + "' is not unitary");
}

LinearOpPtr pauli_op(const PauliString& string) {
  const std::size_t dim = std::size_t{1} << string.qubits();
  std::vector<std::size_t> target(dim);
  std::vector<Complex> phase(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    target[i] = i ^ string.flip_mask();
    phase[i] = string.phase(i);
  }
  return std::make_shared<PhasedPermutationOp>(string.qubits(),
                                               std::move(target),
                                               std::move(phase), string.ops());
}

LinearOpPtr cyclic_shift(int qubits, int direction) {
  require(qubits >= 1 && qubits <= 12, "cyclic_shift: n out of range [1, 12]");
  require(direction == 1 || direction == -1,
          "cyclic_shift: direction must be +1 or -1");
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<std::size_t> target(dim);
  std::vector<Complex> phase(dim, Complex(1.0, 0.0));
  for (std::size_t i = 0; i < dim; ++i)
    target[i] = (i + dim + static_cast<std::size_t>(direction + 1) - 1) % dim;
  return std::make_shared<PhasedPermutationOp>(
      qubits, std::move(target), std::move(phase),
      direction > 0 ? "Cyc+(" + std::to_string(qubits) + ")"
                    : "Cyc-(" + std::to_string(qubits) + ")");
}

LinearOpPtr multi_controlled_z(int qubits) {
  require(qubits >= 1, "multi_controlled_z: need at least one qubit");
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<std::size_t> target(dim);
  std::vector<Complex> phase(dim, Complex(1.0, 0.0));
  for (std::size_t i = 0; i < dim; ++i) target[i] = i;
  phase[dim - 1] = Complex(-1.0, 0.0);
  return std::make_shared<PhasedPermutationOp>(
      qubits, std::move(target), std::move(phase),
      "C^" + std::to_string(qubits - 1) + "Z");
}

LinearOpPtr x_layer(int qubits) {
  return pauli_op(PauliString(std::string(qubits, 'X')));
}

LinearOpPtr hadamard_layer(int qubits) {
  Eigen::Matrix2cd h;
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return std::make_shared<FactoredOneQubitOp>(
      std::vector<Eigen::Matrix2cd>(qubits, h),
      "H^(x" + std::to_string(qubits) + ")");
}

OpenShift open_shift(int qubits, int direction) {
  require(qubits >= 1, "open_shift: need at least one qubit");
  auto cyc = cyclic_shift(qubits, direction);
  auto cnz = multi_controlled_z(qubits);
  OpenShift out;
  if (direction > 0) {
    out.terms.emplace_back(
        0.5, std::make_shared<ComposedOp>(std::vector<LinearOpPtr>{cyc, cnz}));
    out.terms.emplace_back(0.5, cyc);
  } else {
    out.terms.emplace_back(
        0.5, std::make_shared<ComposedOp>(std::vector<LinearOpPtr>{cnz, cyc}));
    out.terms.emplace_back(0.5, cyc);
  }
  return out;
}

Eigen::MatrixXcd OpenShift::dense() const {
  Eigen::MatrixXcd m = terms.front().first * terms.front().second->dense();
  for (std::size_t i = 1; i < terms.size(); ++i)
    m += terms[i].first * terms[i].second->dense();
  return m;
}

Eigen::VectorXcd OpenShift::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& [c, op] : terms) out += c * op->apply(v);
  return out;
}

Eigen::VectorXcd GeneratorDecomposition::apply(
    const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& term : terms) out += term.coeff * term.op->apply(v);
  return out;
}

Eigen::MatrixXcd GeneratorDecomposition::reconstruct() const {
  require(qubits <= 12, "reconstruct: refusing n_q > 12 (memory guard)");
  const std::size_t dim = std::size_t{1} << qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : terms) m += term.coeff * term.op->dense();
  return m;
}

PauliSum GeneratorDecomposition::to_pauli_sum(double prune) const {
  return pauli_decompose(reconstruct(), qubits, prune);
}

std::vector<std::pair<std::uint64_t, double>> walsh_diagonal_terms(
    const std::vector<double>& f, int bits, double prune) {
  const std::size_t n = std::size_t{1} << bits;
  require(f.size() == n, "walsh_diagonal_terms: table size mismatch");
  std::vector<std::pair<std::uint64_t, double>> out;
  for (std::uint64_t s = 0; s < n; ++s) {
    double c = 0.0;
    for (std::uint64_t i = 0; i < n; ++i)
      c += (std::popcount(i & s) & 1) ? -f[i] : f[i];
    c /= static_cast<double>(n);
    if (std::abs(c) > prune) out.emplace_back(s, c);
  }
  return out;
}

namespace {

// Structural key of one emitted unitary: per dimension
// (shift, diagonal z-mask, pre-CnZ flag, post-CnZ flag).
using FactorKey = std::vector<long>;

struct OffsetProfile {
  std::vector<int> delta;       // per-dimension shift in {-1, 0, +1}
  Eigen::VectorXd values;       // band entries indexed by source node
};

std::string offset_name(const std::vector<int>& delta) {
  std::ostringstream os;
  os << "(";
  for (std::size_t d = 0; d < delta.size(); ++d) {
    if (d) os << ",";
    os << (delta[d] > 0 ? "+1" : delta[d] < 0 ? "-1" : "0");
  }
  os << ")";
  return os.str();
}

// One weighted primitive factor within a dimension block.
struct DimChoice {
  double weight;
  long shift;
  std::uint64_t zmask;
  bool pre_cnz;
  bool post_cnz;
};

}  // namespace

GeneratorDecomposition decompose_generator(const SparseGenerator& gen,
                                           const Grid& grid,
                                           const DecomposeOptions& options) {
  require(gen.qubits() == grid.qubits(),
          "decompose_generator: generator and grid disagree on qubits");
  const int dims = grid.dims();
  const int bits = grid.bits_per_dim();
  const std::size_t n_m = grid.points_per_dim();
  const std::size_t nodes = grid.nodes();
  const int order = options.taylor_order;
  require(order >= 0, "decompose_generator: taylor order must be >= 0");

  // Collect the band profile for every populated offset.
  std::map<std::vector<int>, Eigen::VectorXd> profiles;
  for (const auto& t : gen.triplets()) {
    std::vector<int> delta(dims);
    int moved = 0;
    for (int d = 0; d < dims; ++d) {
      const long diff =
          (static_cast<long>(grid.axis_index(t.row(), d)) -
           static_cast<long>(grid.axis_index(t.col(), d)) +
           static_cast<long>(n_m)) %
          static_cast<long>(n_m);
      if (diff == 0) {
        delta[d] = 0;
      } else if (diff == 1) {
        delta[d] = 1;
        ++moved;
      } else if (diff == static_cast<long>(n_m) - 1) {
        delta[d] = -1;
        ++moved;
      } else {
        throw ValidationError(
            "decompose_generator: entry outside the supported stencil "
            "bandwidth at row " + std::to_string(t.row()));
      }
    }
    require(moved <= 2,
            "decompose_generator: entry couples more than two dimensions");
    auto [it, inserted] =
        profiles.try_emplace(delta, Eigen::VectorXd::Zero(nodes));
    it->second(t.col()) += t.value();
  }

  // Monomial exponent tuples with per-axis degree <= order.
  std::vector<std::vector<int>> monomials;
  {
    std::vector<int> beta(dims, 0);
    for (;;) {
      monomials.push_back(beta);
      int d = dims - 1;
      while (d >= 0 && beta[d] == order) beta[d--] = 0;
      if (d < 0) break;
      ++beta[d];
    }
  }

  std::map<FactorKey, Complex> accumulated;

  for (const auto& [delta, profile] : profiles) {
    // Least-squares polynomial fit of the band profile in the coordinates
    // xi_d = i_d * dx_d.
    Eigen::MatrixXd design(nodes, monomials.size());
    for (std::size_t node = 0; node < nodes; ++node) {
      for (std::size_t mi = 0; mi < monomials.size(); ++mi) {
        double v = 1.0;
        for (int d = 0; d < dims; ++d) {
          const double xi = static_cast<double>(grid.axis_index(node, d)) *
                            grid.spacing(d);
          for (int p = 0; p < monomials[mi][d]; ++p) v *= xi;
        }
        design(node, mi) = v;
      }
    }
    Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(profile);
    const double scale = std::max(1.0, profile.cwiseAbs().maxCoeff());
    const double residual = (design * coeffs - profile).cwiseAbs().maxCoeff();
    if (residual > options.fit_tolerance * scale) {
      throw ValidationError(
          "decompose_generator: band profile at offset " + offset_name(delta) +
          " is not representable at order " + std::to_string(order) +
          " (residual " + std::to_string(residual) + ")");
    }

    for (std::size_t mi = 0; mi < monomials.size(); ++mi) {
      // Fold the grid spacings into the monomial coefficient so the
      // per-dimension factors act on plain index powers.
      double c = coeffs(mi);
      for (int d = 0; d < dims; ++d)
        for (int p = 0; p < monomials[mi][d]; ++p) c *= grid.spacing(d);
      if (std::abs(c) <= options.prune) continue;

      // Per-dimension factor choices for this offset and monomial.
      std::vector<std::vector<DimChoice>> choices(dims);
      for (int d = 0; d < dims; ++d) {
        const int beta = monomials[mi][d];
        std::vector<double> index_power(n_m);
        for (std::size_t i = 0; i < n_m; ++i)
          index_power[i] = std::pow(static_cast<double>(i), beta);
        if (delta[d] == 0) {
          if (beta == 0) {
            choices[d].push_back({1.0, 0, 0, false, false});
          } else {
            for (const auto& [mask, w] :
                 walsh_diagonal_terms(index_power, bits, options.prune))
              choices[d].push_back({w, 0, mask, false, false});
          }
        } else {
          const long shift = delta[d];
          // Open-chain part: V_{+-} D^beta via the half-sum identity.
          for (const auto& [mask, w] :
               walsh_diagonal_terms(index_power, bits, options.prune)) {
            if (shift > 0) {
              choices[d].push_back({0.5 * w, shift, mask, true, false});
              choices[d].push_back({0.5 * w, shift, mask, false, false});
            } else {
              choices[d].push_back({0.5 * w, shift, mask, false, true});
              choices[d].push_back({0.5 * w, shift, mask, false, false});
            }
          }
          // Periodic wrap correction; the wrapped source index is n_m - 1
          // for a + shift and 0 for a - shift.
          const double wrap_value =
              shift > 0 ? index_power[n_m - 1] : index_power[0];
          if (wrap_value != 0.0) {
            if (shift > 0) {
              choices[d].push_back({0.5 * wrap_value, shift, 0, false, false});
              choices[d].push_back({-0.5 * wrap_value, shift, 0, true, false});
            } else {
              choices[d].push_back({0.5 * wrap_value, shift, 0, false, false});
              choices[d].push_back({-0.5 * wrap_value, shift, 0, false, true});
            }
          }
        }
      }

      // Distribute the product of per-dimension sums.
      std::vector<std::size_t> pick(dims, 0);
      for (;;) {
        double weight = c;
        FactorKey key;
        key.reserve(4 * dims);
        for (int d = 0; d < dims; ++d) {
          const DimChoice& ch = choices[d][pick[d]];
          weight *= ch.weight;
          key.push_back(ch.shift);
          key.push_back(static_cast<long>(ch.zmask));
          key.push_back(ch.pre_cnz ? 1 : 0);
          key.push_back(ch.post_cnz ? 1 : 0);
        }
        if (weight != 0.0) accumulated[key] += weight;
        int d = dims - 1;
        while (d >= 0 && pick[d] + 1 == choices[d].size()) pick[d--] = 0;
        if (d < 0) break;
        ++pick[d];
      }
    }
  }

  // Materialize the accumulated structural terms as lifted operators.
  GeneratorDecomposition decomposition;
  decomposition.qubits = grid.qubits();
  for (const auto& [key, coeff] : accumulated) {
    if (std::abs(coeff) <= options.prune) continue;
    std::vector<std::size_t> target(nodes);
    std::vector<Complex> phase(nodes, Complex(1.0, 0.0));
    std::ostringstream name;
    for (std::size_t node = 0; node < nodes; ++node) {
      std::size_t out = node;
      double sign = 1.0;
      for (int d = 0; d < dims; ++d) {
        const long shift = key[4 * d];
        const std::uint64_t zmask =
            static_cast<std::uint64_t>(key[4 * d + 1]);
        const bool pre_cnz = key[4 * d + 2] != 0;
        const bool post_cnz = key[4 * d + 3] != 0;
        const std::uint64_t src = grid.axis_index(node, d);
        if (std::popcount(src & zmask) & 1) sign = -sign;
        if (pre_cnz && src == n_m - 1) sign = -sign;
        out = grid.neighbor(out, d, shift);
        const std::uint64_t dst = grid.axis_index(out, d);
        if (post_cnz && dst == n_m - 1) sign = -sign;
      }
      target[node] = out;
      phase[node] = Complex(sign, 0.0);
    }
    for (int d = 0; d < dims; ++d) {
      const long shift = key[4 * d];
      const std::uint64_t zmask = static_cast<std::uint64_t>(key[4 * d + 1]);
      const bool pre_cnz = key[4 * d + 2] != 0;
      const bool post_cnz = key[4 * d + 3] != 0;
      std::vector<std::string> parts;
      if (post_cnz) parts.push_back("CnZ");
      if (shift != 0) parts.push_back(shift > 0 ? "Cyc+" : "Cyc-");
      if (pre_cnz) parts.push_back("CnZ");
      if (zmask) parts.push_back("Z[" + std::to_string(zmask) + "]");
      if (parts.empty()) parts.push_back("I");
      if (d) name << " (x) ";
      for (std::size_t p = 0; p < parts.size(); ++p) {
        if (p) name << ".";
        name << parts[p];
      }
    }
    decomposition.terms.push_back(
        {coeff, std::make_shared<PhasedPermutationOp>(
                    grid.qubits(), std::move(target), std::move(phase),
                    name.str())});
  }

  if (options.verify && grid.qubits() <= 12) {
    Eigen::MatrixXcd rebuilt = decomposition.reconstruct();
    Eigen::MatrixXd dense = to_dense(gen);
    const double err =
        (rebuilt - dense.cast<Complex>()).cwiseAbs().maxCoeff();
    const double tol = 1e-10 * std::max(1.0, dense.cwiseAbs().maxCoeff());
    if (err > tol)
      throw NumericalError(
          "decompose_generator: reconstruction mismatch (max error " +
          std::to_string(err) + ")");
  }
  return decomposition;
}

}  // namespace feynkac
