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
//
// End-to-end acceptance suite. One test per shipped criterion; each prints a
// single PASS/FAIL line so the run log doubles as a checklist.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <vector>

#include "gtest/gtest.h"
#include "qsd/calibsim.hpp"
#include "qsd/helstrom.hpp"
#include "qsd/mlse.hpp"
#include "qsd/rng.hpp"
#include "qsd/sweep.hpp"
#include "test_util.hpp"

namespace qsd {
namespace {

class Acceptance : public ::testing::Test {
 protected:
  void SetUp() override { start_ = std::chrono::steady_clock::now(); }

  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  void report(int index, const char* name) {
    std::cout << "[ACCEPTANCE] criterion " << index << " (" << name
              << "): " << (HasFailure() ? "FAIL" : "PASS") << std::endl;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

MlseProblem fig3_problem(double alpha) {
  const std::vector<DensityMatrix> truth = {make_state({alpha, 1.0, +1}),
                                            make_state({alpha, 0.75, -1})};
  CalibrationConfig config{truth, {Axis::X, Axis::Y, Axis::Z}, kAsymptoticShots, 0};
  return MlseProblem(make_prior_povm({Axis::X, Axis::Y, Axis::Z}),
                     sample_frequencies(config));
}

TEST_F(Acceptance, Criterion1ClosedFormOptimum) {
  for (double d : {0.0, 0.5, 0.9, 1.0}) {
    for (int t = 0; t < 9; ++t) {
      const double alpha = M_PI / 4 * t / 8.0;
      const DensityMatrix rho1 = make_state({alpha, d, +1});
      const DensityMatrix rho2 = make_state({alpha, d, -1});
      const DiscriminationReport report = helstrom_two_state(rho1, rho2);
      EXPECT_NEAR(report.error_rate, 0.5 * (1 - d * std::sin(2 * alpha)), 1e-12)
          << "d=" << d << " alpha=" << alpha;
      EXPECT_LT(report.extremal_residual, 1e-9);
    }
  }
  EXPECT_LT(elapsed_seconds(), 1.0);
  report(1, "closed-form optimum");
}

TEST_F(Acceptance, Criterion2OracleEquivalence) {
  SplitMix64 rng(20260810);
  for (int pair = 0; pair < 20; ++pair) {
    const DensityMatrix rho1 = test::random_density(rng, 2);
    const DensityMatrix rho2 = test::random_density(rng, 2);
    const double exact = helstrom_two_state(rho1, rho2).error_rate;
    const double grid = brute_force_oracle(rho1, rho2, 400);
    EXPECT_NEAR(grid, exact, 5e-5) << "pair " << pair;
    EXPECT_LE(exact, grid + 1e-12);
  }
  EXPECT_LT(elapsed_seconds(), 10.0);
  report(2, "oracle equivalence");
}

// Regression pin for the asymptotic design at alpha = pi/4 (frozen from the
// shipped solver configuration; the gap above 1/16 is numerically zero).
constexpr double kFrozenAsymptoticErAtQuarterPi = 0.062500000000005634;

TEST_F(Acceptance, Criterion3AsymptoticCompleteTomographyRecovery) {
  for (double alpha : {M_PI / 16, M_PI / 8, 3 * M_PI / 16, M_PI / 4}) {
    const MlseResult result = run_mlse(fig3_problem(alpha));
    const std::vector<DensityMatrix> truth = {make_state({alpha, 1.0, +1}),
                                              make_state({alpha, 0.75, -1})};
    const double er = exact_error_rate_of_design(result.opt_povm, truth);
    const double bound = 0.5 * (1 - 0.875 * std::sin(2 * alpha));
    EXPECT_NEAR(er, bound, 1e-2) << "alpha=" << alpha;
    EXPECT_GE(er, bound - 1e-12) << "alpha=" << alpha;
    if (alpha == M_PI / 4) {
      EXPECT_NEAR(er, kFrozenAsymptoticErAtQuarterPi, 1e-13);
    }
  }
  report(3, "asymptotic complete-tomography recovery");
}

TEST_F(Acceptance, Criterion4ConvergenceBehavior) {
  for (double alpha : {M_PI / 16, M_PI / 8, 3 * M_PI / 16, M_PI / 4}) {
    const MlseResult result = run_mlse(fig3_problem(alpha));
    EXPECT_TRUE(result.converged) << "alpha=" << alpha;
    EXPECT_LT(result.residual, 1e-12);
    EXPECT_GE(result.iterations, 10) << "alpha=" << alpha;
    EXPECT_LE(result.iterations, 10000) << "alpha=" << alpha;
  }
  report(4, "convergence behavior");
}

TEST_F(Acceptance, Criterion5FiniteShotEnsemble) {
  SweepConfig config;
  config.alpha_grid = {0.0, M_PI / 4, 9};
  config.d1 = 0.9;
  config.d2 = 0.9;
  config.settings = {Axis::X, Axis::Y};
  config.shots = 1000;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) config.seeds.push_back(seed);

  const std::vector<SweepRow> rows = run_sweep(config);
  ASSERT_EQ(rows.size(), 900u);
  std::vector<double> at_quarter_pi;
  for (const SweepRow& row : rows) {
    ASSERT_FALSE(row.error.has_value()) << *row.error;
    EXPECT_GE(row.er_designed, row.er_helstrom_true - 1e-12)
        << "alpha=" << row.alpha << " seed=" << row.seed;
    if (row.alpha == M_PI / 4) at_quarter_pi.push_back(row.er_designed);
  }
  ASSERT_EQ(at_quarter_pi.size(), 100u);
  std::sort(at_quarter_pi.begin(), at_quarter_pi.end());
  const double median =
      0.5 * (at_quarter_pi[49] + at_quarter_pi[50]);
  EXPECT_GT(median, 0.05);   // incomplete prior cannot beat full knowledge
  EXPECT_LT(median, 0.45);   // but discrimination clearly beats chance
  EXPECT_LT(elapsed_seconds(), 120.0);
  report(5, "finite-shot ensemble");
}

TEST_F(Acceptance, Criterion6InvariantSuite) {
  SplitMix64 rng(606060);
  long iterations_done = 0;
  while (iterations_done < 1000) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.next() % 3);
    const std::size_t hypotheses = 2 + static_cast<std::size_t>(rng.next() % 2);
    std::vector<DensityMatrix> truth;
    for (std::size_t i = 0; i < hypotheses; ++i) {
      truth.push_back(test::random_density(rng, dim));
    }
    const PovmSet prior = test::random_povm(rng, dim, 4 + rng.next() % 3);
    const MlseProblem problem(prior, FrequencyTable(born_table(truth, prior)));

    MlseIterationState st = initial_state(problem);
    for (int step = 0; step < 10; ++step, ++iterations_done) {
      st = iterate_once(st, problem);
      for (const auto& rho : st.states) {
        EXPECT_NEAR(rho.op().trace(), 1.0, 1e-10);
        EXPECT_GE(min_eigenvalue(rho.op()), -1e-9);
        EXPECT_LT((rho.matrix() - rho.matrix().adjoint()).norm(), 1e-10);
      }
      Matrix sum = Matrix::Zero(dim, dim);
      for (std::size_t j = 0; j < st.povm.size(); ++j) {
        const Matrix& element = st.povm.element(j).matrix();
        EXPECT_GE(min_eigenvalue(st.povm.element(j)), -1e-9);
        EXPECT_LT((element - element.adjoint()).norm(), 1e-10);
        sum += element;
      }
      EXPECT_LT((sum - Matrix::Identity(dim, dim)).norm(), 1e-9);
    }
  }

  // Permutation equivariance, bit-exact, three hypotheses.
  {
    std::vector<DensityMatrix> truth = {test::random_density(rng, 2),
                                        test::random_density(rng, 2),
                                        test::random_density(rng, 2)};
    const PovmSet prior = make_prior_povm({Axis::X, Axis::Y, Axis::Z});
    const Eigen::MatrixXd f = born_table(truth, prior);
    Eigen::MatrixXd f_rel(3, f.cols());
    const int sigma[3] = {2, 0, 1};
    for (int i = 0; i < 3; ++i) f_rel.row(sigma[i]) = f.row(i);
    MlseOptions options;
    options.max_iter = 150;
    const MlseResult base = run_mlse(MlseProblem(prior, FrequencyTable(f)), options);
    const MlseResult relabeled =
        run_mlse(MlseProblem(prior, FrequencyTable(f_rel)), options);
    EXPECT_EQ(base.iterations, relabeled.iterations);
    for (int i = 0; i < 3; ++i) {
      EXPECT_TRUE(base.est_states[static_cast<std::size_t>(i)].matrix() ==
                  relabeled.est_states[static_cast<std::size_t>(sigma[i])].matrix());
      EXPECT_TRUE(base.opt_povm.element(static_cast<std::size_t>(i)).matrix() ==
                  relabeled.opt_povm.element(static_cast<std::size_t>(sigma[i])).matrix());
    }
  }

  // Per-step likelihood growth on the shipped example configurations.
  std::vector<MlseProblem> shipped;
  for (double alpha : {M_PI / 16, M_PI / 8, 3 * M_PI / 16, M_PI / 4}) {
    shipped.push_back(fig3_problem(alpha));
  }
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const std::vector<DensityMatrix> truth = {make_state({M_PI / 4, 0.9, +1}),
                                              make_state({M_PI / 4, 0.9, -1})};
    CalibrationConfig calib{truth, {Axis::X, Axis::Y}, 1000, seed};
    shipped.emplace_back(make_prior_povm({Axis::X, Axis::Y}),
                         sample_frequencies(calib));
  }
  for (const MlseProblem& problem : shipped) {
    const MlseResult result = run_mlse(problem);
    for (std::size_t n = 1; n < result.loglik_trace.size(); ++n) {
      EXPECT_GE(result.loglik_trace[n], result.loglik_trace[n - 1] - 1e-12);
    }
  }

  EXPECT_LT(elapsed_seconds(), 60.0);
  report(6, "invariant suite");
}

TEST_F(Acceptance, Criterion7SamplingStatistics) {
  const std::uint64_t shots = 1000000;
  const std::vector<DensityMatrix> truth = {make_state({M_PI / 8, 0.9, +1}),
                                            make_state({M_PI / 8, 0.9, -1})};
  const Eigen::MatrixXd born =
      born_table(truth, make_prior_povm({Axis::X, Axis::Y}));
  const double m_settings = 2.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    CalibrationConfig config{truth, {Axis::X, Axis::Y}, shots, seed};
    const FrequencyTable table = sample_frequencies(config);
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index k = 0; k < 4; ++k) {
        const double p = m_settings * born(i, k);  // per-setting probability
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(shots));
        EXPECT_LE(std::abs(table.matrix()(i, k) - born(i, k)),
                  5.0 * sigma / m_settings + 1e-15)
            << "seed=" << seed << " i=" << i << " k=" << k;
      }
    }
  }
  report(7, "sampling statistics");
}

TEST_F(Acceptance, Criterion8Determinism) {
  SweepConfig config;
  config.alpha_grid = {0.0, M_PI / 4, 5};
  config.d1 = 0.9;
  config.d2 = 0.9;
  config.settings = {Axis::X, Axis::Y};
  config.shots = 1000;
  config.seeds = {11, 22, 33};

  const std::string first = sweep_csv(run_sweep(config));
  const std::string second = sweep_csv(run_sweep(config));
  EXPECT_EQ(first, second);
  const std::string serial = sweep_csv(run_sweep(config, 1));
  EXPECT_EQ(first, serial);
  report(8, "determinism");
}

}  // namespace
}  // namespace qsd
