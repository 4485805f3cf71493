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
#include <optional>
#include <vector>

#include "qsd/mlse.hpp"
#include "qsd/states.hpp"

namespace qsd {

/// Finite-shot calibration: every projective setting is measured on
/// shots_per_setting systems per state. An empty shot count means the
/// asymptotic regime, where frequencies equal the Born probabilities.
struct CalibrationConfig {
  std::vector<DensityMatrix> true_states;
  std::vector<Axis> settings;
  std::optional<std::uint64_t> shots_per_setting;  // nullopt = asymptotic
  std::uint64_t seed = 0;
};

inline constexpr std::optional<std::uint64_t> kAsymptoticShots = std::nullopt;

/// Draws per-setting two-outcome counts and normalizes by M*N so each row
/// sums to one; asymptotic mode returns the Born probabilities directly.
/// Identical (config, seed) gives a bit-identical table; the draw stream for
/// each (state, setting) slot is derived with substream_seed.
FrequencyTable sample_frequencies(const CalibrationConfig& config);

/// Outcome of a simulated communication stage.
struct EmpiricalErrorReport {
  std::uint64_t trials_per_state = 0;
  std::uint64_t wrong_1_given_2 = 0;  // decided 1 when 2 was sent
  std::uint64_t wrong_2_given_1 = 0;  // decided 2 when 1 was sent
  double empirical_er = 0.0;          // (N12 + N21) / (2 * trials_per_state)
};

/// Simulates trials_per_state decision experiments per hypothesis with the
/// given measurement; seeded and reproducible.
EmpiricalErrorReport empirical_error_rate(const PovmSet& povm,
                                          const std::vector<DensityMatrix>& true_states,
                                          std::uint64_t trials_per_state,
                                          std::uint64_t seed);

/// Error rate of a designed measurement evaluated against the ground-truth
/// states: the standard quality measure for a design.
double exact_error_rate_of_design(const PovmSet& opt_povm,
                                  const std::vector<DensityMatrix>& true_states);

}  // namespace qsd
