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

#include <stdexcept>
#include <vector>

#include "qsd/states.hpp"

namespace qsd {

/// Thrown when a probability consumed by a logarithm or denominator has
/// collapsed below the floor while its data weight is positive.
class DegenerateLikelihoodError : public std::runtime_error {
 public:
  DegenerateLikelihoodError(const std::string& what, long iteration)
      : std::runtime_error(what), iteration_(iteration) {}

  /// Iteration index at which degeneracy was detected; -1 outside a run.
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

/// Row-stochastic nonnegative matrix of calibration frequencies, one row per
/// hypothesis, one column per prior-POVM outcome.
class FrequencyTable {
 public:
  explicit FrequencyTable(Eigen::MatrixXd frequencies, double row_sum_tol = 1e-9);

  Eigen::Index num_states() const { return frequencies_.rows(); }
  Eigen::Index num_outcomes() const { return frequencies_.cols(); }
  const Eigen::MatrixXd& matrix() const { return frequencies_; }

 private:
  Eigen::MatrixXd frequencies_;
};

/// A discrimination-design task: the calibration measurement, the observed
/// frequencies, and the number of decision outcomes (always equal to the
/// number of hypotheses; more outcomes than hypotheses would generalize
/// toward unambiguous discrimination, which this solver does not implement).
class MlseProblem {
 public:
  MlseProblem(PovmSet prior_povm, FrequencyTable frequencies);
  MlseProblem(PovmSet prior_povm, FrequencyTable frequencies,
              Eigen::Index num_design_outcomes);

  Eigen::Index dim() const { return prior_povm_.dim(); }
  Eigen::Index num_states() const { return frequencies_.num_states(); }
  Eigen::Index num_prior_outcomes() const { return frequencies_.num_outcomes(); }
  Eigen::Index num_design_outcomes() const { return num_design_outcomes_; }
  const PovmSet& prior_povm() const { return prior_povm_; }
  const FrequencyTable& frequencies() const { return frequencies_; }

 private:
  void validate() const;

  PovmSet prior_povm_;
  FrequencyTable frequencies_;
  Eigen::Index num_design_outcomes_;
};

struct MlseOptions {
  double tol = 1e-12;          // fixed-point residual required for convergence
  long max_iter = 100000;
  double prob_floor = 1e-300;  // floor for probabilities in logs and denominators
  double pinv_threshold = 1e-12;
  // new = (1-damping)*old + damping*update. The undamped simultaneous update
  // overshoots once iterates reach the boundary of the state space (it can
  // cycle instead of converging on complete-prior problems); half steps keep
  // every fixed point and restore convergence, so 0.5 is the default.
  double damping = 0.5;
};

/// One iterate of the coupled estimation/design fixed point, together with
/// the multipliers and likelihood evaluated at it.
struct MlseIterationState {
  std::vector<DensityMatrix> states;
  PovmSet povm;
  std::vector<double> mu;    // one positive normalizer per state
  HermitianOperator lambda;  // PSD completeness multiplier
  double loglik = 0.0;
  long iteration = 0;
};

struct MlseResult {
  std::vector<DensityMatrix> est_states;
  PovmSet opt_povm;
  std::vector<double> loglik_trace;  // entry 0 is the uniform start
  long iterations = 0;
  // Fixed-point residual of the returned iterate; the value the convergence
  // decision used.
  double residual = 0.0;
  bool converged = false;
};

/// sum_i ln P_ii + sum_ik f_ik ln p_ik, with P from the design POVM and p
/// from the prior POVM. Throws DegenerateLikelihoodError if any P_ii, or any
/// p_ik carrying positive weight, lies below the probability floor.
double log_likelihood(const std::vector<DensityMatrix>& states, const PovmSet& povm,
                      const PovmSet& prior_povm, const FrequencyTable& frequencies,
                      double prob_floor = MlseOptions{}.prob_floor);

/// State-update kernel (1/P_ii) Pi_i + sum_k (f_ik / p_ik) pi_k. Outcomes
/// with zero frequency are skipped rather than evaluated as 0/0.
HermitianOperator compute_R(const DensityMatrix& state_i,
                            const HermitianOperator& povm_element_i,
                            const PovmSet& prior_povm,
                            const Eigen::VectorXd& frequencies_row_i,
                            double prob_floor = MlseOptions{}.prob_floor);

/// Measurement-update kernel rho_j / P_jj.
HermitianOperator compute_S(const DensityMatrix& state_j, double p_jj,
                            double prob_floor = MlseOptions{}.prob_floor);

/// Maximally mixed states and uniform POVM, with multipliers and likelihood
/// evaluated there.
MlseIterationState initial_state(const MlseProblem& problem,
                                 const MlseOptions& options = {});

/// Packages an arbitrary (states, POVM) pair as an iteration state, with the
/// multipliers and likelihood evaluated at it.
MlseIterationState make_iteration_state(const std::vector<DensityMatrix>& states,
                                        const PovmSet& povm,
                                        const MlseProblem& problem,
                                        const MlseOptions& options = {},
                                        long iteration = 0);

/// One simultaneous update: every kernel and multiplier is computed from the
/// incoming iterate, then all states and all POVM elements are replaced at
/// once (damped when options.damping < 1).
MlseIterationState iterate_once(const MlseIterationState& state,
                                const MlseProblem& problem,
                                const MlseOptions& options = {});

/// Max Frobenius norm by which the iterate fails the coupled extremal
/// equations, i.e. the distance to its own undamped update.
double fixed_point_residual(const MlseIterationState& state,
                            const MlseProblem& problem,
                            const MlseOptions& options = {});

/// Full solve: repeated simultaneous updates from the uniform start until
/// successive iterates are closer than options.tol or max_iter is reached.
/// Non-convergence is reported in the result, not thrown.
MlseResult run_mlse(const MlseProblem& problem, const MlseOptions& options = {});

}  // namespace qsd
