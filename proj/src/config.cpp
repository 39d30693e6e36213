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

#include "feynkac/config.hpp"

#include <fstream>
#include <sstream>

#include "feynkac/minitoml.hpp"

namespace feynkac {

namespace {

const std::set<std::string> kKnownMethods = {"varqite", "euler", "mc",
                                             "analytic"};

EstimatorMode parse_estimator(const std::string& name) {
  if (name == "exact") return EstimatorMode::kExact;
  if (name == "shots") return EstimatorMode::kShots;
  throw ValidationError("config: unknown estimator mode '" + name + "'");
}

OdeMethod parse_ode(const std::string& name) {
  if (name == "forward_euler") return OdeMethod::kForwardEuler;
  if (name == "rk4") return OdeMethod::kRk4;
  throw ValidationError("config: unknown ode method '" + name + "'");
}

InitialCondition parse_initial(const std::string& name) {
  if (name == "kernel_cells") return InitialCondition::kKernelCellMass;
  if (name == "kernel_nodes") return InitialCondition::kKernelNodeValues;
  throw ValidationError("config: unknown initial condition '" + name + "'");
}

template <typename T>
void read_into(const nlohmann::json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

int RunConfig::dims() const {
  return preset == "heat2d_correlated" ? 2 : 1;
}

Grid RunConfig::make_grid() const {
  const int d = dims();
  std::vector<double> dx = spacings.empty()
                               ? std::vector<double>(d, 1.0)
                               : spacings;
  std::vector<double> og = origin.empty() ? std::vector<double>(d, 0.0)
                                          : origin;
  if (dx.size() == 1 && d > 1) dx.assign(d, dx[0]);
  if (og.size() == 1 && d > 1) og.assign(d, og[0]);
  return Grid(d, qubits, dx, og);
}

SdeSystem RunConfig::make_system() const {
  return preset_system(preset, preset_params);
}

Eigen::VectorXd RunConfig::resolved_start_point() const {
  const Grid grid = make_grid();
  Eigen::VectorXd x(grid.dims());
  if (!start_point.empty()) {
    require(start_point.size() == static_cast<std::size_t>(grid.dims()),
            "config: start point dimension mismatch");
    for (int d = 0; d < grid.dims(); ++d) x(d) = start_point[d];
  } else {
    for (int d = 0; d < grid.dims(); ++d)
      x(d) = grid.coord(grid.points_per_dim() / 2 - 1, d);
  }
  return x;
}

std::vector<int> RunConfig::resolved_moments() const {
  if (!moment_components.empty()) return moment_components;
  std::vector<int> all(dims());
  for (int d = 0; d < dims(); ++d) all[d] = d;
  return all;
}

std::vector<double> RunConfig::resolved_snapshot_times() const {
  if (!snapshot_times.empty()) return snapshot_times;
  std::vector<double> times;
  for (int k = 0; k <= 5; ++k) times.push_back(t0 + 0.2 * k);
  const double t_end = t0 + varqite.dtau * static_cast<double>(varqite.steps);
  std::vector<double> kept;
  for (double t : times)
    if (t <= t_end + 1e-12) kept.push_back(t);
  return kept;
}

void RunConfig::validate() const {
  make_grid();
  make_system();
  varqite.validate();
  require(t0 > 0.0, "config: t0 must be positive");
  require(euler_dt > 0.0, "config: euler dt must be positive");
  require(mc_paths >= 1, "config: mc paths must be >= 1");
  require(mc_dt > 0.0, "config: mc dt must be positive");
  require(!methods.empty(), "config: select at least one method");
  for (const auto& m : methods)
    require(kKnownMethods.count(m) == 1, "config: unknown method '" + m + "'");
  for (int c : moment_components)
    require(c >= 0 && c < dims(), "config: bad moment component index");
  const double t_end = t0 + varqite.dtau * static_cast<double>(varqite.steps);
  for (double t : resolved_snapshot_times())
    require(t >= t0 - 1e-12 && t <= t_end + 1e-12,
            "config: snapshot time outside the evolution window");
  if (initial == InitialCondition::kKernelCellMass ||
      initial == InitialCondition::kKernelNodeValues) {
    require(preset == "heat2d_correlated",
            "config: kernel initial conditions need the heat2d_correlated "
            "preset");
  }
  resolved_start_point();
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const bool json = path.size() >= 5 &&
                    path.compare(path.size() - 5, 5, ".json") == 0;
  return from_text(text, json);
}

RunConfig RunConfig::from_text(const std::string& text, bool json) {
  nlohmann::json doc;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (json || (first != std::string::npos && text[first] == '{')) {
    doc = nlohmann::json::parse(text);
  } else {
    doc = minitoml::parse(text);
  }

  RunConfig cfg;
  if (doc.contains("problem")) {
    const auto& p = doc["problem"];
    read_into(p, "preset", cfg.preset);
    if (p.contains("params")) {
      cfg.preset_params.clear();
      for (auto it = p["params"].begin(); it != p["params"].end(); ++it)
        cfg.preset_params[it.key()] = it.value().get<double>();
    }
    read_into(p, "qubits", cfg.qubits);
    read_into(p, "spacings", cfg.spacings);
    read_into(p, "origin", cfg.origin);
    read_into(p, "start_point", cfg.start_point);
    read_into(p, "t0", cfg.t0);
  }
  if (doc.contains("initial")) {
    const auto& p = doc["initial"];
    if (p.contains("kind"))
      cfg.initial = parse_initial(p["kind"].get<std::string>());
    read_into(p, "normalize", cfg.normalize_initial);
  }
  if (doc.contains("ansatz")) {
    const auto& p = doc["ansatz"];
    if (p.contains("entangler")) {
      const std::string e = p["entangler"].get<std::string>();
      require(e == "circular" || e == "chain",
              "config: entangler must be 'circular' or 'chain'");
      cfg.circular_entangler = e == "circular";
    }
  }
  if (doc.contains("evolution")) {
    const auto& p = doc["evolution"];
    read_into(p, "dtau", cfg.varqite.dtau);
    read_into(p, "steps", cfg.varqite.steps);
    if (p.contains("method"))
      cfg.varqite.method = parse_ode(p["method"].get<std::string>());
    read_into(p, "svd_cutoff", cfg.varqite.svd_cutoff);
    read_into(p, "l1_enforce", cfg.varqite.l1_enforce);
    read_into(p, "l1_every", cfg.varqite.l1_every);
    if (p.contains("l1_mode"))
      cfg.varqite.l1_mode = parse_estimator(p["l1_mode"].get<std::string>());
    read_into(p, "l1_shots", cfg.varqite.l1_shots);
    if (p.contains("v_mode"))
      cfg.varqite.v_mode = parse_estimator(p["v_mode"].get<std::string>());
    read_into(p, "v_shots", cfg.varqite.v_shots);
    read_into(p, "init_starts", cfg.varqite.init_starts);
    read_into(p, "init_iterations", cfg.varqite.init_iterations);
  }
  if (doc.contains("euler")) {
    read_into(doc["euler"], "dt", cfg.euler_dt);
  }
  if (doc.contains("mc")) {
    const auto& p = doc["mc"];
    read_into(p, "paths", cfg.mc_paths);
    read_into(p, "dt", cfg.mc_dt);
    read_into(p, "threads", cfg.mc_threads);
  }
  if (doc.contains("observables")) {
    const auto& p = doc["observables"];
    read_into(p, "moments", cfg.moment_components);
    if (p.contains("mode"))
      cfg.observable_mode = parse_estimator(p["mode"].get<std::string>());
    read_into(p, "shots", cfg.observable_shots);
  }
  if (doc.contains("output")) {
    const auto& p = doc["output"];
    read_into(p, "dir", cfg.output_dir);
    read_into(p, "snapshot_times", cfg.snapshot_times);
  }
  if (doc.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : doc["methods"])
      cfg.methods.insert(m.get<std::string>());
  }
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();

  cfg.validate();
  return cfg;
}

}  // namespace feynkac
