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

#include "qsd/sweep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gtest/gtest.h"

namespace qsd {
namespace {

SweepConfig small_config() {
  SweepConfig config;
  config.alpha_grid = {0.0, M_PI / 4, 3};
  config.d1 = 0.9;
  config.d2 = 0.9;
  config.settings = {Axis::X, Axis::Y};
  config.shots = 200;
  config.seeds = {7, 3};
  return config;
}

TEST(RunSweep, RowsAreSortedAndBounded) {
  const std::vector<SweepRow> rows = run_sweep(small_config(), 1);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const bool ordered = rows[r - 1].alpha < rows[r].alpha ||
                         (rows[r - 1].alpha == rows[r].alpha &&
                          rows[r - 1].seed < rows[r].seed);
    EXPECT_TRUE(ordered);
  }
  for (const SweepRow& row : rows) {
    ASSERT_FALSE(row.error.has_value());
    EXPECT_GE(row.er_designed, row.er_helstrom_true - 1e-12);
    EXPECT_LE(row.er_designed, 0.5 + 1e-6);
    EXPECT_NEAR(row.er_helstrom_true, 0.5 * (1 - 0.9 * std::sin(2 * row.alpha)), 1e-12);
    EXPECT_NEAR(row.er_pure_bound, 0.5 * (1 - std::sin(2 * row.alpha)), 1e-12);
  }
}

TEST(RunSweep, AlphaZeroRowsAreChance) {
  const std::vector<SweepRow> rows = run_sweep(small_config(), 1);
  for (const SweepRow& row : rows) {
    if (row.alpha == 0.0) {
      EXPECT_NEAR(row.er_designed, 0.5, 1e-6);
      EXPECT_NEAR(row.er_helstrom_true, 0.5, 1e-6);
    }
  }
}

TEST(RunSweep, AsymptoticConfigTracksHelstrom) {
  SweepConfig config;
  config.alpha_grid = {M_PI / 8, M_PI / 4, 2};
  config.d1 = 1.0;
  config.d2 = 0.75;
  config.settings = {Axis::X, Axis::Y, Axis::Z};
  config.shots = std::nullopt;
  config.seeds = {1};
  const std::vector<SweepRow> rows = run_sweep(config, 1);
  for (const SweepRow& row : rows) {
    EXPECT_TRUE(row.converged);
    EXPECT_NEAR(row.er_designed, 0.5 * (1 - 0.875 * std::sin(2 * row.alpha)), 1e-2);
    EXPECT_NEAR(row.er_helstrom_true, 0.5 * (1 - 0.875 * std::sin(2 * row.alpha)),
                1e-12);
  }
}

TEST(RunSweep, ThreadCountDoesNotChangeRows) {
  const std::string csv1 = sweep_csv(run_sweep(small_config(), 1));
  const std::string csv4 = sweep_csv(run_sweep(small_config(), 4));
  EXPECT_EQ(csv1, csv4);
}

TEST(RunSweep, ByteIdenticalAcrossRuns) {
  const std::string first = sweep_csv(run_sweep(small_config()));
  const std::string second = sweep_csv(run_sweep(small_config()));
  EXPECT_EQ(first, second);
}

TEST(RunSweep, ValidatesConfig) {
  SweepConfig bad = small_config();
  bad.alpha_grid.count = 1;
  EXPECT_THROW(run_sweep(bad), std::invalid_argument);
  bad = small_config();
  bad.alpha_grid.stop = 1.0;  // beyond pi/4
  EXPECT_THROW(run_sweep(bad), std::invalid_argument);
  bad = small_config();
  bad.seeds.clear();
  EXPECT_THROW(run_sweep(bad), std::invalid_argument);
  bad = small_config();
  bad.d1 = 1.5;
  EXPECT_THROW(run_sweep(bad), std::invalid_argument);
}

TEST(SweepCsv, HeaderAndShapeAreFixed) {
  const std::vector<SweepRow> rows = run_sweep(small_config(), 1);
  const std::string csv = sweep_csv(rows);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "alpha,seed,er_designed,er_helstrom_true,er_pure_bound,loglik_final,"
            "iterations,residual,converged");
  std::size_t data_lines = 0;
  for (std::string line; std::getline(lines, line);) {
    ++data_lines;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
  }
  EXPECT_EQ(data_lines, rows.size());
}

TEST(FormatDouble, RoundTripsExactly) {
  for (double value :
       {0.1, 1.0 / 3.0, M_PI / 4, 1e-300, 0.06250000000000568, 0.0, -2.5}) {
    EXPECT_EQ(std::stod(format_double(value)), value);
  }
}

}  // namespace
}  // namespace qsd
