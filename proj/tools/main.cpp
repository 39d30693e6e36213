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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "feynkac/baselines.hpp"
#include "feynkac/operators.hpp"
#include "feynkac/runner.hpp"

namespace {

feynkac::RunConfig load_config(const std::string& path) {
  if (path.empty()) return feynkac::RunConfig{};
  return feynkac::RunConfig::from_file(path);
}

void apply_overrides(feynkac::RunConfig& config, const std::string& out_dir,
                     bool seed_set, std::uint64_t seed,
                     const std::vector<std::string>& methods,
                     const std::vector<double>& snapshot_times) {
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (seed_set) config.seed = seed;
  if (!methods.empty())
    config.methods = std::set<std::string>(methods.begin(), methods.end());
  if (!snapshot_times.empty()) config.snapshot_times = snapshot_times;
  config.validate();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feynman-Kac PDE solver: variational imaginary-time evolution "
               "with classical baselines"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> methods;
  std::vector<double> snapshot_times;

  auto* run_cmd = app.add_subcommand("run", "Execute a configured experiment");
  run_cmd->add_option("--config", config_path, "TOML or JSON run config");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--seed", seed, "Master seed")
      ->each([&](const std::string&) { seed_set = true; });
  run_cmd->add_option("--methods", methods,
                      "Subset of methods: varqite euler mc analytic")
      ->delimiter(',');
  run_cmd->add_option("--snapshot-times", snapshot_times,
                      "Surface snapshot times")
      ->delimiter(',');

  std::vector<std::string> compare_dirs;
  std::string compare_out;
  auto* compare_cmd =
      app.add_subcommand("compare", "Cross-method metrics of run artifacts");
  compare_cmd->add_option("dirs", compare_dirs, "Run output directories")
      ->required();
  compare_cmd->add_option("--out", compare_out, "Metrics output directory");

  std::string decompose_out;
  std::string sparse_dump;
  bool structured = false;
  int taylor_order = 0;
  auto* decompose_cmd = app.add_subcommand(
      "decompose", "Dump the Pauli decomposition of the configured generator");
  decompose_cmd->add_option("--config", config_path,
                            "TOML or JSON run config");
  decompose_cmd->add_option("--out", decompose_out, "Output JSON file");
  decompose_cmd->add_flag("--structured", structured,
                          "Dump the structured unitary-term decomposition "
                          "instead of the plain Pauli sum");
  decompose_cmd->add_option("--taylor-order", taylor_order,
                            "Band-profile polynomial order");
  decompose_cmd->add_option("--dump-sparse", sparse_dump,
                            "Also write the sparse matrix as [row, col, "
                            "value] triples");

  double kernel_t = 0.1;
  double kernel_rho = 1.0 / 3.0;
  std::vector<double> kernel_center;
  std::string kernel_out;
  auto* kernel_cmd = app.add_subcommand(
      "kernel", "Evaluate the analytic heat kernel on the configured grid");
  kernel_cmd->add_option("--config", config_path, "TOML or JSON run config");
  kernel_cmd->add_option("--t", kernel_t, "Evaluation time");
  kernel_cmd->add_option("--rho", kernel_rho, "Correlation");
  kernel_cmd->add_option("--center", kernel_center, "Source point x0 y0")
      ->delimiter(',');
  kernel_cmd->add_option("--out", kernel_out, "Output JSON file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      feynkac::RunConfig config = load_config(config_path);
      apply_overrides(config, out_dir, seed_set, seed, methods,
                      snapshot_times);
      feynkac::RunReport report = feynkac::run(config);
      std::cout << "run artifacts written to " << report.output_dir << "\n";
      for (const auto& check : report.summary["checks"]) {
        std::cout << (check["pass"].get<bool>() ? "[pass] " : "[FAIL] ")
                  << check["name"].get<std::string>() << " = "
                  << check["value"].get<double>() << " (target "
                  << check["comparison"].get<std::string>() << " "
                  << check["tolerance"].get<double>() << ")\n";
      }
      return 0;
    }

    if (compare_cmd->parsed()) {
      nlohmann::json doc = feynkac::compare_runs(compare_dirs, compare_out);
      for (const auto& pair : doc["pairs"]) {
        std::cout << pair["a"].get<std::string>() << " vs "
                  << pair["b"].get<std::string>()
                  << ": max l2 = " << pair["max_l2"].get<double>() << "\n";
      }
      if (!compare_out.empty())
        std::cout << "metrics written to " << compare_out << "\n";
      return 0;
    }

    if (decompose_cmd->parsed()) {
      feynkac::RunConfig config = load_config(config_path);
      const feynkac::Grid grid = config.make_grid();
      const feynkac::SdeSystem sde = config.make_system();
      const auto coeffs = feynkac::evaluate_coefficients(sde, grid, config.t0);
      const feynkac::SparseGenerator gen = feynkac::discretize(coeffs, grid);

      if (!sparse_dump.empty()) {
        nlohmann::json triples = nlohmann::json::array();
        for (const auto& t : gen.triplets())
          triples.push_back({t.row(), t.col(), t.value()});
        std::ofstream out(sparse_dump);
        feynkac::require(out.good(), "cannot open " + sparse_dump);
        out << triples.dump() << "\n";
      }

      nlohmann::json doc;
      if (structured) {
        feynkac::DecomposeOptions options;
        options.taylor_order = taylor_order;
        const auto decomposition =
            feynkac::decompose_generator(gen, grid, options);
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& term : decomposition.terms) {
          terms.push_back({{"coeff", {term.coeff.real(), term.coeff.imag()}},
                           {"unitary", term.op->describe()}});
        }
        doc["structured_terms"] = std::move(terms);
      } else {
        const feynkac::PauliSum sum =
            feynkac::pauli_decompose(feynkac::to_dense(gen).cast<
                                         feynkac::Complex>(),
                                     grid.qubits())
                .canonicalized();
        doc = nlohmann::json::parse(sum.to_json());
      }
      if (decompose_out.empty()) {
        std::cout << doc.dump(2) << "\n";
      } else {
        std::ofstream out(decompose_out);
        feynkac::require(out.good(), "cannot open " + decompose_out);
        out << doc.dump(2) << "\n";
        std::cout << "decomposition written to " << decompose_out << "\n";
      }
      return 0;
    }

    if (kernel_cmd->parsed()) {
      feynkac::RunConfig config = load_config(config_path);
      const feynkac::Grid grid = config.make_grid();
      Eigen::VectorXd center = config.resolved_start_point();
      if (!kernel_center.empty()) {
        feynkac::require(kernel_center.size() == 2,
                         "kernel: center must have two components");
        center = Eigen::Vector2d(kernel_center[0], kernel_center[1]);
      }
      const Eigen::VectorXd values =
          feynkac::kernel_node_values(grid, kernel_t, kernel_rho, center);
      nlohmann::json doc;
      doc["time"] = kernel_t;
      doc["rho"] = kernel_rho;
      doc["center"] = {center(0), center(1)};
      doc["values"] =
          std::vector<double>(values.data(), values.data() + values.size());
      if (kernel_out.empty()) {
        std::cout << doc.dump(2) << "\n";
      } else {
        std::ofstream out(kernel_out);
        feynkac::require(out.good(), "cannot open " + kernel_out);
        out << doc.dump(2) << "\n";
        std::cout << "kernel written to " << kernel_out << "\n";
      }
      return 0;
    }
  } catch (const feynkac::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const feynkac::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
