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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "feynkac/baselines.hpp"
#include "feynkac/readout.hpp"
#include "feynkac/runner.hpp"

namespace py = pybind11;
using namespace feynkac;

namespace {

std::optional<long> shots_arg(py::object shots) {
  if (shots.is_none()) return std::nullopt;
  return shots.cast<long>();
}

}  // namespace

PYBIND11_MODULE(_feynkac, m) {
  m.doc() = "Feynman-Kac PDE solver: VarQITE engine with classical baselines";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int, std::vector<double>, std::vector<double>>(),
           py::arg("dims"), py::arg("qubits"), py::arg("spacings"),
           py::arg("origin"))
      .def_static("uniform", &Grid::uniform, py::arg("dims"),
                  py::arg("qubits"), py::arg("spacing"),
                  py::arg("origin") = 0.0)
      .def_property_readonly("dims", &Grid::dims)
      .def_property_readonly("qubits", &Grid::qubits)
      .def_property_readonly("points_per_dim", &Grid::points_per_dim)
      .def_property_readonly("nodes", &Grid::nodes)
      .def_property_readonly("cell_volume", &Grid::cell_volume)
      .def("spacing", &Grid::spacing, py::arg("dim"))
      .def("origin", &Grid::origin, py::arg("dim"))
      .def("coords", &Grid::coords, py::arg("flat_index"));

  py::class_<SdeSystem>(m, "SdeSystem")
      .def_readonly("dims", &SdeSystem::dims)
      .def_readonly("brownians", &SdeSystem::brownians)
      .def("drift", [](const SdeSystem& s, const Eigen::VectorXd& x,
                       double t) { return s.drift(x, t); })
      .def("diffusion", [](const SdeSystem& s, const Eigen::VectorXd& x,
                           double t) { return s.diffusion(x, t); })
      .def("discount", [](const SdeSystem& s, const Eigen::VectorXd& x,
                          double t) { return s.discount(x, t); });

  m.def("preset_system",
        py::overload_cast<const std::string&,
                          const std::map<std::string, double>&>(
            &preset_system),
        py::arg("name"), py::arg("params"));

  py::class_<CoefficientField>(m, "CoefficientField")
      .def_readonly("diffusion_tensor", &CoefficientField::diffusion_tensor)
      .def_readonly("drift_vector", &CoefficientField::drift_vector)
      .def_readonly("discount_scalar", &CoefficientField::discount_scalar);

  m.def("evaluate_coefficients", &evaluate_coefficients, py::arg("sde"),
        py::arg("grid"), py::arg("t"), py::keep_alive<0, 2>());

  m.def(
      "wick_potential",
      [](const std::function<double(double, double)>& a,
         const std::function<double(double, double)>& b,
         const std::function<double(double, double)>& c, const Grid& grid,
         double t) {
        Coefficients1D coeffs{a, b, c};
        return wick_potential(coeffs, grid, t);
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("grid"), py::arg("t"));

  py::class_<SparseGenerator>(m, "SparseGenerator")
      .def_property_readonly("dimension", &SparseGenerator::dimension)
      .def_property_readonly("qubits", &SparseGenerator::qubits)
      .def("apply",
           [](const SparseGenerator& g, const Eigen::VectorXd& u) {
             return apply(g, u);
           })
      .def("to_dense", [](const SparseGenerator& g) { return to_dense(g); })
      .def("triplets", [](const SparseGenerator& g) {
        std::vector<std::tuple<long, long, double>> out;
        for (const auto& t : g.triplets())
          out.emplace_back(t.row(), t.col(), t.value());
        return out;
      });

  m.def("discretize", &discretize, py::arg("coefficients"), py::arg("grid"));

  py::class_<PauliString>(m, "PauliString")
      .def(py::init<std::string>())
      .def_property_readonly("ops", &PauliString::ops)
      .def("matrix", &PauliString::matrix)
      .def("apply", &PauliString::apply);

  py::class_<PauliSum>(m, "PauliSum")
      .def_property_readonly("qubits", &PauliSum::qubits)
      .def("__len__", &PauliSum::size)
      .def("terms",
           [](const PauliSum& s) {
             std::vector<std::pair<Complex, std::string>> out;
             for (const auto& [c, p] : s.terms())
               out.emplace_back(c, p.ops());
             return out;
           })
      .def("matrix", &PauliSum::matrix)
      .def("to_json", &PauliSum::to_json)
      .def_static("from_json", &PauliSum::from_json);

  m.def("index_diagonal", &index_diagonal, py::arg("qubits"));
  m.def("pauli_decompose", &pauli_decompose, py::arg("matrix"),
        py::arg("qubits"), py::arg("prune") = 1e-13);

  py::class_<GeneratorDecomposition>(m, "GeneratorDecomposition")
      .def_property_readonly(
          "terms",
          [](const GeneratorDecomposition& d) {
            std::vector<std::pair<Complex, std::string>> out;
            for (const auto& t : d.terms)
              out.emplace_back(t.coeff, t.op->describe());
            return out;
          })
      .def("reconstruct", &GeneratorDecomposition::reconstruct)
      .def("to_pauli_sum", &GeneratorDecomposition::to_pauli_sum,
           py::arg("prune") = 1e-13);

  m.def(
      "decompose_generator",
      [](const SparseGenerator& gen, const Grid& grid, int taylor_order) {
        DecomposeOptions options;
        options.taylor_order = taylor_order;
        return decompose_generator(gen, grid, options);
      },
      py::arg("generator"), py::arg("grid"), py::arg("taylor_order") = 0);

  m.def("cyclic_shift_matrix",
        [](int qubits, int direction) {
          return cyclic_shift(qubits, direction)->dense();
        });
  m.def("open_shift_matrix", [](int qubits, int direction) {
    return open_shift(qubits, direction).dense();
  });

  py::class_<Ansatz>(m, "Ansatz")
      .def_static("real_amplitudes", &Ansatz::real_amplitudes,
                  py::arg("qubits"), py::arg("circular_entangler") = true)
      .def_property_readonly("qubits", &Ansatz::qubits)
      .def_property_readonly("parameter_count", &Ansatz::parameter_count)
      .def("prepare", &Ansatz::prepare, py::arg("theta"))
      .def("derivative", &Ansatz::derivative, py::arg("theta"), py::arg("k"));

  m.def(
      "hadamard_test",
      [](const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& u,
         const std::string& part, py::object shots, std::uint64_t seed) {
        MatrixOp op(u, "matrix");
        Part p = part == "imag" ? Part::kImag : Part::kReal;
        auto rng = SeedStream(seed).stream(0xad);
        return hadamard_test(psi, op, p, shots_arg(shots), &rng);
      },
      py::arg("psi"), py::arg("unitary"), py::arg("part") = "real",
      py::arg("shots") = py::none(), py::arg("seed") = 0);

  py::class_<VarQiteConfig>(m, "VarQiteConfig")
      .def(py::init<>())
      .def_readwrite("dtau", &VarQiteConfig::dtau)
      .def_readwrite("steps", &VarQiteConfig::steps)
      .def_readwrite("svd_cutoff", &VarQiteConfig::svd_cutoff)
      .def_readwrite("l1_enforce", &VarQiteConfig::l1_enforce)
      .def_property(
          "method",
          [](const VarQiteConfig& c) {
            return c.method == OdeMethod::kRk4 ? "rk4" : "forward_euler";
          },
          [](VarQiteConfig& c, const std::string& name) {
            c.method = name == "rk4" ? OdeMethod::kRk4
                                     : OdeMethod::kForwardEuler;
          });

  py::class_<VarQiteTrajectory>(m, "VarQiteTrajectory")
      .def_property_readonly("init_residual",
                             [](const VarQiteTrajectory& t) {
                               return t.init_residual;
                             })
      .def("times",
           [](const VarQiteTrajectory& t) {
             std::vector<double> out;
             for (const auto& r : t.records) out.push_back(r.time);
             return out;
           })
      .def("alphas",
           [](const VarQiteTrajectory& t) {
             std::vector<double> out;
             for (const auto& r : t.records) out.push_back(r.alpha);
             return out;
           })
      .def("solutions",
           [](const VarQiteTrajectory& t) {
             std::vector<Eigen::VectorXd> out;
             for (const auto& r : t.records) out.push_back(r.solution);
             return out;
           })
      .def("thetas",
           [](const VarQiteTrajectory& t) {
             std::vector<Eigen::VectorXd> out;
             for (const auto& r : t.records) out.push_back(r.theta);
             return out;
           })
      .def("write_csv", &VarQiteTrajectory::write_csv)
      .def("write_json", &VarQiteTrajectory::write_json);

  m.def(
      "evolve",
      [](const SparseGenerator& gen, const Grid& grid, const Ansatz& ansatz,
         const Eigen::VectorXd& u0, double t0, const VarQiteConfig& config,
         std::uint64_t seed) {
        return evolve(GeneratorSource::constant(gen, grid), ansatz, u0, t0,
                      config, SeedStream(seed));
      },
      py::arg("generator"), py::arg("grid"), py::arg("ansatz"), py::arg("u0"),
      py::arg("t0"), py::arg("config"), py::arg("seed") = 20260809);

  m.def(
      "euler_evolve",
      [](const SparseGenerator& gen, const Eigen::VectorXd& u0, double dt,
         long steps) {
        return euler_evolve(gen, u0, dt, steps).states;
      },
      py::arg("generator"), py::arg("u0"), py::arg("dt"), py::arg("steps"));

  py::class_<PathHistogram>(m, "PathHistogram")
      .def_readonly("mass", &PathHistogram::mass)
      .def_readonly("paths", &PathHistogram::paths)
      .def_readonly("seed", &PathHistogram::seed);

  m.def(
      "mc_simulate",
      [](const SdeSystem& sde, const Eigen::VectorXd& x0, double total_time,
         long paths, long steps, const Grid& grid, std::uint64_t seed,
         int threads) {
        return mc_simulate(sde, x0, total_time, paths, steps, grid,
                           SeedStream(seed), threads);
      },
      py::arg("sde"), py::arg("x0"), py::arg("total_time"), py::arg("paths"),
      py::arg("steps"), py::arg("grid"), py::arg("seed") = 20260809,
      py::arg("threads") = 0, py::keep_alive<0, 6>());

  m.def("analytic_kernel", &analytic_kernel, py::arg("x"), py::arg("y"),
        py::arg("t"), py::arg("rho"), py::arg("x0"), py::arg("y0"));
  m.def("analytic_kernel_general", &analytic_kernel_general, py::arg("x"),
        py::arg("y"), py::arg("t"), py::arg("A"), py::arg("B"), py::arg("C"),
        py::arg("r"), py::arg("x0"), py::arg("y0"));
  m.def("kernel_node_values", &kernel_node_values, py::arg("grid"),
        py::arg("t"), py::arg("rho"), py::arg("center"));
  m.def("kernel_cell_masses", &kernel_cell_masses, py::arg("grid"),
        py::arg("t"), py::arg("rho"), py::arg("center"),
        py::arg("panels") = 4);

  m.def(
      "direct_expectation",
      [](double alpha, const Eigen::VectorXd& v, const Eigen::VectorXd& f) {
        ScaledState state{alpha, v.cast<Complex>()};
        return direct_expectation(state, f);
      },
      py::arg("alpha"), py::arg("v"), py::arg("f"));

  m.def(
      "expectation_via_sf",
      [](double alpha, const Eigen::VectorXd& v, const Eigen::VectorXd& f,
         py::object shots, std::uint64_t seed) {
        ScaledState state{alpha, v.cast<Complex>()};
        ObservableSpec spec = ObservableSpec::from_values(f);
        auto s = shots_arg(shots);
        if (s.has_value()) {
          spec.mode = EstimatorMode::kShots;
          spec.shots = *s;
        }
        return expectation_via_sf(state, spec, SeedStream(seed));
      },
      py::arg("alpha"), py::arg("v"), py::arg("f"),
      py::arg("shots") = py::none(), py::arg("seed") = 20260809);

  m.def(
      "moment_component",
      [](double alpha, const Eigen::VectorXd& v, const Grid& grid,
         int component, py::object shots, std::uint64_t seed) {
        ScaledState state{alpha, v.cast<Complex>()};
        auto s = shots_arg(shots);
        return moment_component(
            state, grid, component,
            s.has_value() ? EstimatorMode::kShots : EstimatorMode::kExact,
            SeedStream(seed), s.value_or(100000));
      },
      py::arg("alpha"), py::arg("v"), py::arg("grid"), py::arg("component"),
      py::arg("shots") = py::none(), py::arg("seed") = 20260809);

  m.def(
      "interval_indicator",
      [](std::uint64_t upper, int qubits) {
        return interval_operator(upper, qubits).action;
      },
      py::arg("upper"), py::arg("qubits"));

  m.def("taylor_error_bound", &taylor_error_bound, py::arg("order"),
        py::arg("cell_width"), py::arg("dims"), py::arg("deriv_bound"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_static("from_file", &RunConfig::from_file)
      .def_readwrite("preset", &RunConfig::preset)
      .def_readwrite("qubits", &RunConfig::qubits)
      .def_readwrite("t0", &RunConfig::t0)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("mc_paths", &RunConfig::mc_paths)
      .def_readwrite("methods", &RunConfig::methods)
      .def("validate", &RunConfig::validate);

  m.def(
      "run",
      [](const RunConfig& config) {
        RunReport report = run(config);
        py::module_ json = py::module_::import("json");
        return json.attr("loads")(report.summary.dump());
      },
      py::arg("config"));

  m.def(
      "run_config_file",
      [](const std::string& path) {
        RunReport report = run(RunConfig::from_file(path));
        py::module_ json = py::module_::import("json");
        return json.attr("loads")(report.summary.dump());
      },
      py::arg("path"));
}
