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

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "feynkac/config.hpp"

namespace feynkac {

/// One method's solution vectors over the shared time axis.
struct MethodSeries {
  std::string name;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> solutions;
};

struct RunReport {
  std::string output_dir;
  nlohmann::json summary;
};

/// Executes the configured methods, writes norms.csv, per-method series,
/// snapshot surfaces, observables.json and a machine-readable summary with
/// every tolerance evaluated. Returns the summary.
RunReport run(const RunConfig& config);

/// Cross-method metrics over previously written run directories: per-step
/// l1 norms, pairwise l2 differences, and max-abs surface differences at the
/// shared snapshot times. Writes compare.csv and compare.json into out_dir
/// when non-empty.
nlohmann::json compare_runs(const std::vector<std::string>& run_dirs,
                            const std::string& out_dir);

/// In-memory variant used by both compare_runs and tests.
nlohmann::json compare_series(const std::vector<MethodSeries>& series,
                              const std::vector<double>& snapshot_times);

}  // namespace feynkac
