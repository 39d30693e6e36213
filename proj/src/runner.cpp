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

#include "feynkac/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "feynkac/baselines.hpp"
#include "feynkac/readout.hpp"

namespace feynkac {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

nlohmann::json grid_metadata(const Grid& grid) {
  nlohmann::json g;
  g["dims"] = grid.dims();
  g["qubits"] = grid.qubits();
  g["points_per_dim"] = grid.points_per_dim();
  std::vector<double> dx, og;
  for (int d = 0; d < grid.dims(); ++d) {
    dx.push_back(grid.spacing(d));
    og.push_back(grid.origin(d));
  }
  g["spacings"] = dx;
  g["origin"] = og;
  g["cell_volume"] = grid.cell_volume();
  g["layout"] = "row-major, first dimension slowest";
  return g;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  require(out.good(), "cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
}

void write_method_series(const std::string& dir, const MethodSeries& series,
                         const Grid& grid) {
  nlohmann::json doc;
  doc["method"] = series.name;
  doc["grid"] = grid_metadata(grid);
  doc["times"] = series.times;
  nlohmann::json sols = nlohmann::json::array();
  for (const auto& s : series.solutions) sols.push_back(to_std(s));
  doc["solutions"] = std::move(sols);
  write_json_file(dir + "/method_" + series.name + ".json", doc);
}

nlohmann::json check_entry(const std::string& name, double value,
                           const std::string& comparison, double tolerance,
                           bool pass) {
  nlohmann::json c;
  c["name"] = name;
  c["value"] = value;
  c["comparison"] = comparison;
  c["tolerance"] = tolerance;
  c["pass"] = pass;
  return c;
}

int series_index_at(const MethodSeries& series, double t) {
  for (std::size_t i = 0; i < series.times.size(); ++i)
    if (std::abs(series.times[i] - t) < 1e-9) return static_cast<int>(i);
  return -1;
}

}  // namespace

RunReport run(const RunConfig& config) {
  config.validate();
  const Grid grid = config.make_grid();
  const SdeSystem sde = config.make_system();
  const SeedStream seeds(config.seed);
  validate_sde(sde, grid, config.t0, seeds);

  std::filesystem::create_directories(config.output_dir);
  const std::string dir = config.output_dir;

  const double rho = config.preset_params.count("rho")
                         ? config.preset_params.at("rho")
                         : 0.0;
  const Eigen::VectorXd center = config.resolved_start_point();

  // Initial state and the analytic reference in matching units.
  const bool cell_units = config.initial == InitialCondition::kKernelCellMass;
  auto analytic_at = [&](double t) {
    return cell_units ? kernel_cell_masses(grid, t, rho, center)
                      : kernel_node_values(grid, t, rho, center);
  };
  Eigen::VectorXd u0 = analytic_at(config.t0);
  if (config.normalize_initial) u0 /= u0.sum();

  const long steps = config.varqite.steps;
  const double dtau = config.varqite.dtau;
  std::vector<double> step_times(steps + 1);
  for (long k = 0; k <= steps; ++k)
    step_times[k] = config.t0 + dtau * static_cast<double>(k);

  std::vector<MethodSeries> series;
  VarQiteTrajectory trajectory;
  bool have_varqite = false;

  const CoefficientField coeffs = evaluate_coefficients(sde, grid, config.t0);
  const SparseGenerator gen = discretize(coeffs, grid);

  if (config.methods.count("varqite")) {
    const Ansatz ansatz =
        Ansatz::real_amplitudes(config.qubits, config.circular_entangler);
    trajectory = evolve(GeneratorSource::constant(gen, grid), ansatz, u0,
                        config.t0, config.varqite, seeds);
    have_varqite = true;
    MethodSeries s;
    s.name = "varqite";
    for (const auto& r : trajectory.records) {
      s.times.push_back(r.time);
      s.solutions.push_back(r.solution);
    }
    series.push_back(std::move(s));
    trajectory.write_csv(dir + "/trajectory_varqite.csv");
    trajectory.write_json(dir + "/trajectory_varqite.json");
  }

  if (config.methods.count("euler")) {
    long substeps =
        std::max(1L, std::lround(dtau / config.euler_dt));
    EulerResult euler =
        euler_evolve(gen, u0, dtau / static_cast<double>(substeps),
                     steps * substeps);
    MethodSeries s;
    s.name = "euler";
    for (long k = 0; k <= steps; ++k) {
      s.times.push_back(step_times[k]);
      s.solutions.push_back(euler.states[k * substeps]);
    }
    series.push_back(std::move(s));
  }

  if (config.methods.count("mc")) {
    // One simulation pass from the SDE start at t = 0, binned at every
    // trajectory step time.
    const double t_end = step_times.back();
    const long total_steps = std::lround(t_end / config.mc_dt);
    require(std::abs(total_steps * config.mc_dt - t_end) < 1e-9,
            "run: mc dt must divide the evolution horizon");
    std::vector<long> record_steps;
    for (double t : step_times) {
      const long idx = std::lround(t / config.mc_dt);
      require(std::abs(idx * config.mc_dt - t) < 1e-9,
              "run: mc dt must divide every step time");
      record_steps.push_back(idx);
    }
    auto histograms =
        mc_simulate_series(sde, center, t_end, config.mc_paths, total_steps,
                           record_steps, grid, seeds, config.mc_threads);
    MethodSeries s;
    s.name = "mc";
    for (std::size_t k = 0; k < histograms.size(); ++k) {
      s.times.push_back(step_times[k]);
      // Histogram mass aligns with cell-mass states; rescale into density
      // units when the run works with node values.
      Eigen::VectorXd sol = cell_units
                                ? histograms[k].mass
                                : histograms[k].mass / grid.cell_volume();
      s.solutions.push_back(std::move(sol));
    }
    series.push_back(std::move(s));
  }

  if (config.methods.count("analytic")) {
    MethodSeries s;
    s.name = "analytic";
    for (double t : step_times) {
      s.times.push_back(t);
      s.solutions.push_back(analytic_at(t));
    }
    series.push_back(std::move(s));
  }

  for (const auto& s : series) write_method_series(dir, s, grid);

  // norms.csv with the per-step norms and the VarQITE difference series.
  const MethodSeries* varqite_series = nullptr;
  const MethodSeries* euler_series = nullptr;
  const MethodSeries* mc_series = nullptr;
  for (const auto& s : series) {
    if (s.name == "varqite") varqite_series = &s;
    if (s.name == "euler") euler_series = &s;
    if (s.name == "mc") mc_series = &s;
  }
  {
    std::ofstream out(dir + "/norms.csv");
    require(out.good(), "cannot open norms.csv for writing");
    out << "step,time,l1_varqite,l1_euler,l1_mc,l2_diff_varqite_euler,"
           "l2_diff_varqite_mc\n";
    for (long k = 0; k <= steps; ++k) {
      out << k << "," << format_double(step_times[k]);
      auto put_l1 = [&](const MethodSeries* s) {
        out << ",";
        if (s) out << format_double(s->solutions[k].cwiseAbs().sum());
      };
      put_l1(varqite_series);
      put_l1(euler_series);
      put_l1(mc_series);
      out << ",";
      if (varqite_series && euler_series)
        out << format_double(
            (varqite_series->solutions[k] - euler_series->solutions[k])
                .norm());
      out << ",";
      if (varqite_series && mc_series)
        out << format_double(
            (varqite_series->solutions[k] - mc_series->solutions[k]).norm());
      out << "\n";
    }
  }

  // Snapshot surfaces.
  const std::vector<double> snapshots = config.resolved_snapshot_times();
  for (double t : snapshots) {
    nlohmann::json doc;
    doc["time"] = t;
    doc["grid"] = grid_metadata(grid);
    nlohmann::json methods_json;
    for (const auto& s : series) {
      const int idx = series_index_at(s, t);
      if (idx >= 0) methods_json[s.name] = to_std(s.solutions[idx]);
    }
    doc["methods"] = std::move(methods_json);
    write_json_file(dir + "/solution_t" + format_time_label(t) + ".json",
                    doc);
  }

  // Observables of the final state.
  nlohmann::json observables = nlohmann::json::array();
  const MethodSeries* readout_series =
      varqite_series ? varqite_series : (euler_series ? euler_series : nullptr);
  if (readout_series && cell_units) {
    const Eigen::VectorXd& p = readout_series->solutions.back();
    ScaledState state;
    state.alpha = p.norm();
    state.v = (p / state.alpha).cast<Complex>();
    for (int component : config.resolved_moments()) {
      ObservableSpec spec = moment_observable(grid, component);
      const double direct = direct_expectation(state, spec.f);
      const double exact =
          moment_component(state, grid, component, EstimatorMode::kExact,
                           seeds);
      nlohmann::json entry;
      entry["observable"] = "moment";
      entry["component"] = component;
      entry["source"] = readout_series->name;
      entry["direct"] = direct;
      entry["via_sf_exact"] = exact;
      entry["negative_sum_flag"] = direct < 0.0;
      entry["mode"] =
          config.observable_mode == EstimatorMode::kExact ? "exact" : "shots";
      if (config.observable_mode == EstimatorMode::kShots) {
        // Empirical spread over independent substreams.
        const int repeats = 10;
        std::vector<double> draws(repeats);
        double mean = 0.0;
        for (int rpt = 0; rpt < repeats; ++rpt) {
          draws[rpt] = moment_component(
              state, grid, component, EstimatorMode::kShots, seeds,
              config.observable_shots,
              static_cast<std::uint64_t>(1000 + rpt));
          mean += draws[rpt];
        }
        mean /= repeats;
        double var = 0.0;
        for (double d : draws) var += (d - mean) * (d - mean);
        var /= std::max(1, repeats - 1);
        entry["shots"] = config.observable_shots;
        entry["estimate"] = mean;
        entry["standard_error"] = std::sqrt(var / repeats);
      }
      observables.push_back(std::move(entry));
    }
  }
  write_json_file(dir + "/observables.json", observables);

  // Summary with every tolerance evaluated.
  nlohmann::json summary;
  summary["schema_version"] = 1;
  summary["seed"] = config.seed;
  summary["grid"] = grid_metadata(grid);
  summary["t0"] = config.t0;
  summary["dtau"] = dtau;
  summary["steps"] = steps;
  nlohmann::json checks = nlohmann::json::array();
  if (have_varqite) {
    summary["init_residual"] = trajectory.init_residual;
    checks.push_back(check_entry("init_residual", trajectory.init_residual,
                                 "<", 0.05,
                                 trajectory.init_residual < 0.05));
    double worst_l1 = 0.0;
    for (const auto& r : trajectory.records)
      worst_l1 = std::max(worst_l1, std::abs(r.l1 - 1.0));
    checks.push_back(check_entry("varqite_l1_deviation", worst_l1, "<", 0.05,
                                 worst_l1 < 0.05));
  }
  if (varqite_series && euler_series) {
    double worst = 0.0;
    for (long k = 0; k <= steps; ++k)
      worst = std::max(worst, (varqite_series->solutions[k] -
                               euler_series->solutions[k])
                                  .norm());
    summary["max_l2_diff_varqite_euler"] = worst;
    checks.push_back(check_entry("l2_diff_varqite_euler", worst, "<", 0.05,
                                 worst < 0.05));
  }
  if (varqite_series && mc_series) {
    double worst = 0.0;
    for (double t : snapshots) {
      const int iv = series_index_at(*varqite_series, t);
      const int im = series_index_at(*mc_series, t);
      if (iv < 0 || im < 0) continue;
      worst = std::max(worst,
                       (varqite_series->solutions[iv] -
                        mc_series->solutions[im])
                           .cwiseAbs()
                           .maxCoeff());
    }
    summary["max_surface_diff_varqite_mc"] = worst;
    checks.push_back(check_entry("surface_diff_varqite_mc", worst, "<", 0.02,
                                 worst < 0.02));
  }
  if (euler_series) {
    double lo = 1e300, hi = -1e300;
    for (long k = 0; k <= steps; ++k) {
      const double l1 = euler_series->solutions[k].cwiseAbs().sum();
      lo = std::min(lo, l1);
      hi = std::max(hi, l1);
    }
    summary["euler_l1_range"] = {lo, hi};
    checks.push_back(check_entry("euler_l1_low", lo, ">=", 0.99, lo >= 0.99));
    checks.push_back(check_entry("euler_l1_high", hi, "<=", 1.05, hi <= 1.05));
  }
  summary["checks"] = std::move(checks);
  bool all_pass = true;
  for (const auto& c : summary["checks"])
    if (!c["pass"].get<bool>()) all_pass = false;
  summary["all_checks_pass"] = all_pass;
  write_json_file(dir + "/summary.json", summary);

  return RunReport{dir, summary};
}

nlohmann::json compare_series(const std::vector<MethodSeries>& series,
                              const std::vector<double>& snapshot_times) {
  require(!series.empty(), "compare: nothing to compare");
  const auto& axis = series.front().times;
  for (const auto& s : series) {
    require(s.times.size() == axis.size(),
            "compare: time axes differ in length");
    for (std::size_t i = 0; i < axis.size(); ++i)
      require(std::abs(s.times[i] - axis[i]) < 1e-9,
              "compare: time axes differ");
    require(s.solutions.size() == axis.size(),
            "compare: series " + s.name + " is incomplete");
    for (const auto& sol : s.solutions)
      require(sol.size() == series.front().solutions.front().size(),
              "compare: grids differ");
  }

  nlohmann::json doc;
  doc["times"] = axis;
  nlohmann::json l1;
  for (const auto& s : series) {
    std::vector<double> norms;
    for (const auto& sol : s.solutions) norms.push_back(sol.cwiseAbs().sum());
    l1[s.name] = norms;
  }
  doc["l1"] = std::move(l1);

  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t a = 0; a < series.size(); ++a) {
    for (std::size_t b = a + 1; b < series.size(); ++b) {
      nlohmann::json pair;
      pair["a"] = series[a].name;
      pair["b"] = series[b].name;
      std::vector<double> l2;
      double max_l2 = 0.0;
      for (std::size_t k = 0; k < axis.size(); ++k) {
        const double d =
            (series[a].solutions[k] - series[b].solutions[k]).norm();
        l2.push_back(d);
        max_l2 = std::max(max_l2, d);
      }
      pair["l2_per_step"] = std::move(l2);
      pair["max_l2"] = max_l2;
      nlohmann::json surface = nlohmann::json::array();
      for (double t : snapshot_times) {
        int idx = -1;
        for (std::size_t i = 0; i < axis.size(); ++i)
          if (std::abs(axis[i] - t) < 1e-9) idx = static_cast<int>(i);
        if (idx < 0) continue;
        nlohmann::json snap;
        snap["time"] = t;
        snap["max_abs_diff"] =
            (series[a].solutions[idx] - series[b].solutions[idx])
                .cwiseAbs()
                .maxCoeff();
        surface.push_back(std::move(snap));
      }
      pair["surface"] = std::move(surface);
      pairs.push_back(std::move(pair));
    }
  }
  doc["pairs"] = std::move(pairs);
  return doc;
}

nlohmann::json compare_runs(const std::vector<std::string>& run_dirs,
                            const std::string& out_dir) {
  require(!run_dirs.empty(), "compare: no run directories given");
  std::vector<MethodSeries> series;
  nlohmann::json first_grid;
  for (std::size_t r = 0; r < run_dirs.size(); ++r) {
    bool found = false;
    for (const auto& entry :
         std::filesystem::directory_iterator(run_dirs[r])) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("method_", 0) != 0 ||
          entry.path().extension() != ".json")
        continue;
      std::ifstream in(entry.path());
      nlohmann::json doc = nlohmann::json::parse(in);
      if (first_grid.is_null()) {
        first_grid = doc["grid"];
      } else {
        require(first_grid == doc["grid"],
                "compare: run artifacts use different grids");
      }
      MethodSeries s;
      s.name = doc["method"].get<std::string>();
      if (run_dirs.size() > 1)
        s.name = "run" + std::to_string(r) + ":" + s.name;
      s.times = doc["times"].get<std::vector<double>>();
      for (const auto& sol : doc["solutions"])
        s.solutions.push_back(from_std(sol.get<std::vector<double>>()));
      series.push_back(std::move(s));
      found = true;
    }
    require(found, "compare: no method series found in " + run_dirs[r]);
  }
  nlohmann::json doc = compare_series(series, series.front().times);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_json_file(out_dir + "/compare.json", doc);
    std::ofstream out(out_dir + "/compare.csv");
    require(out.good(), "cannot open compare.csv for writing");
    out << "time";
    for (const auto& s : series) out << ",l1_" << s.name;
    for (const auto& pair : doc["pairs"])
      out << ",l2_" << pair["a"].get<std::string>() << "_vs_"
          << pair["b"].get<std::string>();
    out << "\n";
    const auto& axis = series.front().times;
    for (std::size_t k = 0; k < axis.size(); ++k) {
      out << format_double(axis[k]);
      for (const auto& s : series)
        out << "," << format_double(doc["l1"][s.name][k].get<double>());
      for (const auto& pair : doc["pairs"])
        out << ","
            << format_double(pair["l2_per_step"][k].get<double>());
      out << "\n";
    }
  }
  return doc;
}

}  // namespace feynkac
