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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsd/calibsim.hpp"
#include "qsd/mlse.hpp"

namespace qsd {

struct AlphaGrid {
  double start = 0.0;  // radians
  double stop = 0.0;
  int count = 0;       // >= 2
};

/// One error-rate-vs-alpha experiment: state pair (d1, +) vs (d2, -), a
/// calibration per (alpha, seed) grid point, and an MLSE design per point.
struct SweepConfig {
  AlphaGrid alpha_grid;
  double d1 = 1.0;
  double d2 = 1.0;
  std::vector<Axis> settings;
  std::optional<std::uint64_t> shots;  // nullopt = asymptotic
  std::vector<std::uint64_t> seeds;
  MlseOptions mlse;
};

struct SweepRow {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double er_designed = 0.0;       // designed POVM against the true states
  double er_helstrom_true = 0.0;  // exact optimum for the true states
  double er_pure_bound = 0.0;     // pure-state bound at this overlap
  double loglik_final = 0.0;
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::optional<std::string> error;  // per-point failure tag; numeric fields are NaN
};

/// Runs every (alpha, seed) grid point; points are independent and may be
/// dispatched to a worker pool. Rows come back sorted by (alpha, seed), so
/// the output does not depend on thread count. Per-point failures are
/// recorded in the row and do not abort the sweep.
std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned num_threads = 0);

/// Fixed-header CSV for the rows; all doubles in shortest round-trip form.
std::string sweep_csv(const std::vector<SweepRow>& rows);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path);

inline constexpr const char* kSweepCsvHeader =
    "alpha,seed,er_designed,er_helstrom_true,er_pure_bound,loglik_final,"
    "iterations,residual,converged";

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

}  // namespace qsd
