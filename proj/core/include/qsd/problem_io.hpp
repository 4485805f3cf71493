// Copyright 2026 qsd Contributors
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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsd/mlse.hpp"
#include "qsd/sweep.hpp"

namespace qsd {

/// A parsed problem document: the task plus optional ground truth to
/// evaluate the designed measurement against.
struct ProblemFile {
  MlseProblem problem;
  std::optional<std::vector<DensityMatrix>> true_states;
};

/// Problem documents are JSON with explicit fields: "dimension",
/// "num_states", "num_prior_outcomes", "prior_povm", "frequencies" and
/// optional "true_states" / "num_design_outcomes". Matrices are row-major
/// arrays of [re, im] pairs. Unknown keys and invariant violations are
/// rejected with the offending field (and row index where applicable).
ProblemFile parse_problem_json(const std::string& text);
ProblemFile read_problem_file(const std::filesystem::path& path);

std::string problem_to_json(const MlseProblem& problem,
                            const std::vector<DensityMatrix>* true_states = nullptr);
void write_problem_file(const std::filesystem::path& path, const MlseProblem& problem,
                        const std::vector<DensityMatrix>* true_states = nullptr);

/// Solver outcome plus evaluation against ground truth when available.
struct SolveReport {
  MlseResult result;
  std::vector<double> est_purities;
  std::optional<std::vector<double>> true_purities;
  std::optional<double> er_designed;       // two-hypothesis problems only
  std::optional<double> er_helstrom_true;  // two-hypothesis problems only
};

SolveReport solve_problem_file(const std::filesystem::path& path,
                               const MlseOptions& options = {});

std::string solve_report_json(const SolveReport& report);

/// Sweep configs are JSON whose keys mirror the SweepConfig fields
/// one-to-one ("alpha_grid", "d1", "d2", "settings", "shots", "seeds",
/// optional "mlse"); "shots" is a positive integer or "inf". Unknown keys
/// are errors.
SweepConfig parse_sweep_config_json(const std::string& text);
SweepConfig read_sweep_config(const std::filesystem::path& path);

}  // namespace qsd
