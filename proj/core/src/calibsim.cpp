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

#include "qsd/calibsim.hpp"

#include <algorithm>
#include <stdexcept>

#include "qsd/helstrom.hpp"
#include "qsd/rng.hpp"

namespace qsd {

FrequencyTable sample_frequencies(const CalibrationConfig& config) {
  if (config.true_states.empty()) {
    throw std::invalid_argument("calibration needs at least one state");
  }
  const PovmSet prior = make_prior_povm(config.settings);
  const Eigen::Index num_states = static_cast<Eigen::Index>(config.true_states.size());
  const Eigen::Index num_settings = static_cast<Eigen::Index>(config.settings.size());

  if (!config.shots_per_setting.has_value()) {
    // Asymptotic regime: frequencies attain the Born probabilities.
    return FrequencyTable(born_table(config.true_states, prior));
  }
  const std::uint64_t shots = *config.shots_per_setting;
  if (shots < 1) {
    throw std::invalid_argument("shots_per_setting must be at least 1");
  }

  const double denom = static_cast<double>(num_settings) * static_cast<double>(shots);
  Eigen::MatrixXd f(num_states, 2 * num_settings);
  for (Eigen::Index i = 0; i < num_states; ++i) {
    for (Eigen::Index m = 0; m < num_settings; ++m) {
      // Outcome probability of the unscaled projector for this setting.
      const double p_plus = std::clamp(
          trace_product(config.true_states[static_cast<std::size_t>(i)].op(),
                        pauli_projector(config.settings[static_cast<std::size_t>(m)], +1)),
          0.0, 1.0);
      SplitMix64 stream(substream_seed(config.seed, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(m)));
      std::uint64_t count_plus = 0;
      for (std::uint64_t shot = 0; shot < shots; ++shot) {
        if (stream.next_double() < p_plus) ++count_plus;
      }
      f(i, 2 * m) = static_cast<double>(count_plus) / denom;
      f(i, 2 * m + 1) = static_cast<double>(shots - count_plus) / denom;
    }
  }
  return FrequencyTable(std::move(f));
}

EmpiricalErrorReport empirical_error_rate(const PovmSet& povm,
                                          const std::vector<DensityMatrix>& true_states,
                                          std::uint64_t trials_per_state,
                                          std::uint64_t seed) {
  if (true_states.size() != 2 || povm.size() != 2) {
    throw std::invalid_argument("decision simulation expects two states and a "
                                "two-element POVM");
  }
  if (povm.dim() != true_states[0].dim() || true_states[0].dim() != true_states[1].dim()) {
    throw std::invalid_argument("dimension mismatch between POVM and states");
  }
  if (trials_per_state < 1) {
    throw std::invalid_argument("trials_per_state must be at least 1");
  }

  EmpiricalErrorReport report;
  report.trials_per_state = trials_per_state;
  for (std::size_t i = 0; i < 2; ++i) {
    const double p_decide_1 =
        std::clamp(trace_product(true_states[i].op(), povm.element(0)), 0.0, 1.0);
    SplitMix64 stream(substream_seed(seed, i, kDecisionStreamTag));
    std::uint64_t wrong = 0;
    for (std::uint64_t trial = 0; trial < trials_per_state; ++trial) {
      const bool decided_1 = stream.next_double() < p_decide_1;
      if (decided_1 != (i == 0)) ++wrong;
    }
    if (i == 0) {
      report.wrong_2_given_1 = wrong;
    } else {
      report.wrong_1_given_2 = wrong;
    }
  }
  report.empirical_er =
      static_cast<double>(report.wrong_1_given_2 + report.wrong_2_given_1) /
      (2.0 * static_cast<double>(trials_per_state));
  return report;
}

double exact_error_rate_of_design(const PovmSet& opt_povm,
                                  const std::vector<DensityMatrix>& true_states) {
  if (true_states.size() != 2) {
    throw std::invalid_argument("exact error rate expects exactly two states");
  }
  return error_rate(opt_povm, true_states[0], true_states[1]);
}

}  // namespace qsd
