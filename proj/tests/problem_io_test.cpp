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

#include "qsd/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "gtest/gtest.h"
#include "qsd/calibsim.hpp"

namespace qsd {
namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("qsd_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

MlseProblem sample_problem(double alpha = M_PI / 8) {
  const std::vector<DensityMatrix> states = {make_state({alpha, 0.9, +1}),
                                             make_state({alpha, 0.9, -1})};
  CalibrationConfig config{states, {Axis::X, Axis::Y}, 500, 11};
  return MlseProblem(make_prior_povm({Axis::X, Axis::Y}), sample_frequencies(config));
}

using ProblemIo = TempDir;

TEST_F(ProblemIo, JsonRoundTripPreservesEveryField) {
  const MlseProblem problem = sample_problem();
  const std::vector<DensityMatrix> truth = {make_state({M_PI / 8, 0.9, +1}),
                                            make_state({M_PI / 8, 0.9, -1})};
  const std::string text = problem_to_json(problem, &truth);
  const ProblemFile parsed = parse_problem_json(text);

  EXPECT_EQ(parsed.problem.dim(), problem.dim());
  EXPECT_EQ(parsed.problem.num_states(), problem.num_states());
  EXPECT_TRUE(parsed.problem.frequencies().matrix() == problem.frequencies().matrix());
  for (std::size_t k = 0; k < problem.prior_povm().size(); ++k) {
    EXPECT_TRUE(parsed.problem.prior_povm().element(k).matrix() ==
                problem.prior_povm().element(k).matrix());
  }
  ASSERT_TRUE(parsed.true_states.has_value());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_TRUE((*parsed.true_states)[i].matrix() == truth[i].matrix());
  }
}

TEST_F(ProblemIo, RejectsBadFrequencyRowWithIndex) {
  // First row sums to 0.8.
  const std::string doc = R"({
    "dimension": 2,
    "num_states": 2,
    "num_prior_outcomes": 4,
    "prior_povm": [
      [[0.25,0],[0.25,0],[0.25,0],[0.25,0]],
      [[0.25,0],[-0.25,0],[-0.25,0],[0.25,0]],
      [[0.25,0],[0,-0.25],[0,0.25],[0.25,0]],
      [[0.25,0],[0,0.25],[0,-0.25],[0.25,0]]
    ],
    "frequencies": [[0.3,0.25,0.25,0.0],[0.25,0.25,0.25,0.25]]
  })";
  try {
    parse_problem_json(doc);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("row 0"), std::string::npos);
  }
}

TEST_F(ProblemIo, RejectsIncompletePriorNamingCompleteness) {
  // Four PSD elements summing to 0.8 * identity.
  std::string text = R"({
    "dimension": 2,
    "num_states": 2,
    "num_prior_outcomes": 4,
    "prior_povm": [
      [[0.2,0],[0,0],[0,0],[0.2,0]],
      [[0.2,0],[0,0],[0,0],[0.2,0]],
      [[0.2,0],[0,0],[0,0],[0.2,0]],
      [[0.2,0],[0,0],[0,0],[0.2,0]]
    ],
    "frequencies": [[0.25,0.25,0.25,0.25],[0.25,0.25,0.25,0.25]]
  })";
  try {
    parse_problem_json(text);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("completeness"), std::string::npos);
  }
}

TEST_F(ProblemIo, RejectsUnknownKeysByName) {
  const std::string text = R"({"dimension": 2, "numstates": 2})";
  try {
    parse_problem_json(text);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("numstates"), std::string::npos);
  }
}

TEST_F(ProblemIo, RejectsExtraDesignOutcomes) {
  const MlseProblem problem = sample_problem();
  std::string text = problem_to_json(problem);
  text.insert(text.find_last_of('}'), ", \"num_design_outcomes\": 3");
  EXPECT_THROW(parse_problem_json(text), std::invalid_argument);
}

TEST_F(ProblemIo, RejectsNonJson) {
  EXPECT_THROW(parse_problem_json("dimension: 2"), std::invalid_argument);
}

TEST_F(ProblemIo, MissingFileAndMissingKeyAreDiagnosed) {
  EXPECT_THROW(read_problem_file(path("absent.json")), std::invalid_argument);
  EXPECT_THROW(parse_problem_json(R"({"dimension": 2})"), std::invalid_argument);
}

TEST_F(ProblemIo, SolveAsymptoticSecondExperimentAtQuarterPi) {
  const double alpha = M_PI / 4;
  const std::vector<DensityMatrix> truth = {make_state({alpha, 1.0, +1}),
                                            make_state({alpha, 0.75, -1})};
  CalibrationConfig config{truth, {Axis::X, Axis::Y, Axis::Z}, kAsymptoticShots, 0};
  const MlseProblem problem(make_prior_povm({Axis::X, Axis::Y, Axis::Z}),
                            sample_frequencies(config));
  write_problem_file(path("fig3.json"), problem, &truth);

  const SolveReport report = solve_problem_file(path("fig3.json"));
  EXPECT_TRUE(report.result.converged);
  ASSERT_TRUE(report.er_designed.has_value());
  EXPECT_NEAR(*report.er_designed, 0.0625, 1e-2);
  ASSERT_TRUE(report.er_helstrom_true.has_value());
  EXPECT_NEAR(*report.er_helstrom_true, 0.0625, 1e-12);
  EXPECT_EQ(report.est_purities.size(), 2u);
  ASSERT_TRUE(report.true_purities.has_value());

  const std::string json = solve_report_json(report);
  EXPECT_NE(json.find("\"converged\""), std::string::npos);
  EXPECT_NE(json.find("\"er_designed\""), std::string::npos);
  EXPECT_NE(json.find("\"est_purities\""), std::string::npos);
}

TEST_F(ProblemIo, SweepConfigParsesAndRejectsUnknownKeys) {
  const std::string good = R"({
    "alpha_grid": {"start": 0.0, "stop": 0.7853981633974483, "count": 5},
    "d1": 0.9, "d2": 0.9,
    "settings": ["x", "y"],
    "shots": 1000,
    "seeds": [1, 2, 3],
    "mlse": {"tol": 1e-10, "max_iter": 500}
  })";
  const SweepConfig config = parse_sweep_config_json(good);
  EXPECT_EQ(config.alpha_grid.count, 5);
  EXPECT_EQ(config.settings.size(), 2u);
  ASSERT_TRUE(config.shots.has_value());
  EXPECT_EQ(*config.shots, 1000u);
  EXPECT_EQ(config.seeds.size(), 3u);
  EXPECT_EQ(config.mlse.tol, 1e-10);
  EXPECT_EQ(config.mlse.max_iter, 500);

  const std::string inf_shots = R"({
    "alpha_grid": {"start": 0.1, "stop": 0.2, "count": 2},
    "d1": 1.0, "d2": 0.75,
    "settings": ["x", "y", "z"],
    "shots": "inf",
    "seeds": [1]
  })";
  EXPECT_FALSE(parse_sweep_config_json(inf_shots).shots.has_value());

  try {
    parse_sweep_config_json(R"({"alpha_grid": {"start": 0, "stop": 0.2, "count": 2},
      "d1": 1, "d2": 1, "settings": ["x"], "shots": 1, "seeds": [1], "extra": 1})");
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("extra"), std::string::npos);
  }
  EXPECT_THROW(parse_sweep_config_json(R"({"alpha_grid": {"start": 0, "stop": 0.2,
    "count": 2}, "d1": 1, "d2": 1, "settings": ["x"], "shots": 0, "seeds": [1]})"),
               std::invalid_argument);
}

}  // namespace
}  // namespace qsd
