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

#include "qsd/mlse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

namespace qsd {

FrequencyTable::FrequencyTable(Eigen::MatrixXd frequencies, double row_sum_tol)
    : frequencies_(std::move(frequencies)) {
  if (frequencies_.rows() == 0 || frequencies_.cols() == 0) {
    throw std::invalid_argument("frequency table must be non-empty");
  }
  for (Eigen::Index i = 0; i < frequencies_.rows(); ++i) {
    double row_sum = 0.0;
    for (Eigen::Index k = 0; k < frequencies_.cols(); ++k) {
      const double f = frequencies_(i, k);
      if (!(f >= 0.0 && f <= 1.0)) {
        throw std::invalid_argument("frequency (" + std::to_string(i) + "," +
                                    std::to_string(k) + ") = " + std::to_string(f) +
                                    " outside [0, 1]");
      }
      row_sum += f;
    }
    if (std::abs(row_sum - 1.0) > row_sum_tol) {
      throw std::invalid_argument("frequency row " + std::to_string(i) +
                                  " sums to " + std::to_string(row_sum) +
                                  ", expected 1 within " + std::to_string(row_sum_tol));
    }
  }
}

MlseProblem::MlseProblem(PovmSet prior_povm, FrequencyTable frequencies)
    : prior_povm_(std::move(prior_povm)),
      frequencies_(std::move(frequencies)),
      num_design_outcomes_(frequencies_.num_states()) {
  validate();
}

MlseProblem::MlseProblem(PovmSet prior_povm, FrequencyTable frequencies,
                         Eigen::Index num_design_outcomes)
    : prior_povm_(std::move(prior_povm)),
      frequencies_(std::move(frequencies)),
      num_design_outcomes_(num_design_outcomes) {
  validate();
}

void MlseProblem::validate() const {
  if (static_cast<Eigen::Index>(prior_povm_.size()) != frequencies_.num_outcomes()) {
    throw std::invalid_argument(
        "frequency table has " + std::to_string(frequencies_.num_outcomes()) +
        " columns but the prior POVM has " + std::to_string(prior_povm_.size()) +
        " elements");
  }
  if (num_design_outcomes_ > frequencies_.num_states()) {
    throw std::invalid_argument(
        "unsupported: " + std::to_string(num_design_outcomes_) +
        " design outcomes for " + std::to_string(frequencies_.num_states()) +
        " hypotheses; more outcomes than hypotheses generalizes toward "
        "unambiguous discrimination, which this solver does not implement");
  }
  if (num_design_outcomes_ != frequencies_.num_states()) {
    throw std::invalid_argument("the number of design outcomes must equal the "
                                "number of hypotheses");
  }
}

namespace {

// ---------------------------------------------------------------------------
// Internal engine on raw matrices. Public entry points unwrap the strong
// types, run here, and re-wrap (which re-validates the invariants).
// ---------------------------------------------------------------------------

double re_trace_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

// Accumulations over hypotheses use entrywise sorted folds so that
// relabeling hypotheses cannot change the rounding of any sum.
double invariant_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

Matrix invariant_matrix_sum(const std::vector<Matrix>& terms) {
  const Eigen::Index rows = terms.front().rows();
  const Eigen::Index cols = terms.front().cols();
  Matrix out(rows, cols);
  std::vector<double> re(terms.size());
  std::vector<double> im(terms.size());
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < cols; ++b) {
      for (std::size_t t = 0; t < terms.size(); ++t) {
        re[t] = terms[t](a, b).real();
        im[t] = terms[t](a, b).imag();
      }
      out(a, b) = Complex(invariant_sum(re), invariant_sum(im));
    }
  }
  return out;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// sqrt(machine epsilon): the relative scale at which an eigenvalue of a
// computed operator product stops being distinguishable from round-off.
constexpr double kLambdaNoiseFloorRel = 1.4901161193847656e-08;

struct EngineProblem {
  Eigen::Index dim = 0;
  Eigen::Index num_states = 0;    // I
  Eigen::Index num_outcomes = 0;  // K
  std::vector<Matrix> prior;
  Eigen::MatrixXd f;
};

EngineProblem unpack(const MlseProblem& problem) {
  EngineProblem ep;
  ep.dim = problem.dim();
  ep.num_states = problem.num_states();
  ep.num_outcomes = problem.num_prior_outcomes();
  ep.prior.reserve(problem.prior_povm().size());
  for (const auto& element : problem.prior_povm().elements()) {
    ep.prior.push_back(element.matrix());
  }
  ep.f = problem.frequencies().matrix();
  return ep;
}

struct EngineState {
  std::vector<Matrix> rho;
  std::vector<Matrix> povm;
};

// First weighted probability found under the floor, if any.
struct FloorHit {
  std::string description;
};

struct Probabilities {
  Eigen::VectorXd p_diag;     // P_ii, floored
  Eigen::MatrixXd p_prior;    // p_ik, floored
  std::optional<FloorHit> floor_hit;
};

Probabilities evaluate_probabilities(const EngineProblem& ep, const EngineState& st,
                                     double prob_floor) {
  Probabilities probs;
  probs.p_diag.resize(ep.num_states);
  probs.p_prior.resize(ep.num_states, ep.num_outcomes);
  for (Eigen::Index i = 0; i < ep.num_states; ++i) {
    const double p = re_trace_product(st.rho[i], st.povm[i]);
    if (p < prob_floor && !probs.floor_hit) {
      probs.floor_hit = FloorHit{"P_" + std::to_string(i) + std::to_string(i) +
                                 " = " + std::to_string(p)};
    }
    probs.p_diag[i] = std::max(p, prob_floor);
    for (Eigen::Index k = 0; k < ep.num_outcomes; ++k) {
      const double q = re_trace_product(st.rho[i], ep.prior[k]);
      if (ep.f(i, k) > 0.0 && q < prob_floor && !probs.floor_hit) {
        probs.floor_hit = FloorHit{"p(" + std::to_string(i) + "," +
                                   std::to_string(k) + ") = " + std::to_string(q)};
      }
      probs.p_prior(i, k) = std::max(q, prob_floor);
    }
  }
  return probs;
}

double evaluate_loglik(const EngineProblem& ep, const Probabilities& probs) {
  std::vector<double> contributions(ep.num_states);
  for (Eigen::Index i = 0; i < ep.num_states; ++i) {
    double c = std::log(probs.p_diag[i]);
    for (Eigen::Index k = 0; k < ep.num_outcomes; ++k) {
      if (ep.f(i, k) > 0.0) {
        c += ep.f(i, k) * std::log(probs.p_prior(i, k));
      }
    }
    contributions[static_cast<std::size_t>(i)] = c;
  }
  return invariant_sum(std::move(contributions));
}

struct StepOutput {
  std::vector<Matrix> rho_update;   // undamped updates
  std::vector<Matrix> povm_update;
  std::vector<double> mu;
  Matrix lambda;
  double loglik_at_input = 0.0;
  std::optional<FloorHit> floor_hit;
  // Completeness deficit of the updated POVM. Either ~1e-15 (healthy) or
  // order one, when the data drove the design onto a proper subspace and the
  // update can no longer be represented as a complete measurement.
  double completeness_deficit = 0.0;
};

StepOutput engine_step(const EngineProblem& ep, const EngineState& st,
                       const MlseOptions& options, long iteration_for_errors) {
  const Probabilities probs = evaluate_probabilities(ep, st, options.prob_floor);

  StepOutput out;
  out.floor_hit = probs.floor_hit;
  out.loglik_at_input = evaluate_loglik(ep, probs);
  out.rho_update.resize(st.rho.size());
  out.povm_update.resize(st.povm.size());
  out.mu.resize(st.rho.size());

  // State updates: rho_i <- R_i rho_i R_i, normalized by mu_i^2 = Tr[R rho R].
  for (Eigen::Index i = 0; i < ep.num_states; ++i) {
    Matrix r = st.povm[i] / probs.p_diag[i];
    for (Eigen::Index k = 0; k < ep.num_outcomes; ++k) {
      if (ep.f(i, k) > 0.0) {
        r += (ep.f(i, k) / probs.p_prior(i, k)) * ep.prior[k];
      }
    }
    const Matrix conjugated = symmetrize(r * st.rho[i] * r);
    const double mu_sq = conjugated.trace().real();
    if (!(mu_sq > 0.0) || !std::isfinite(mu_sq)) {
      throw DegenerateLikelihoodError(
          "state update normalizer vanished for hypothesis " + std::to_string(i),
          iteration_for_errors);
    }
    out.mu[static_cast<std::size_t>(i)] = std::sqrt(mu_sq);
    out.rho_update[static_cast<std::size_t>(i)] = conjugated / mu_sq;
  }

  // Measurement updates: Pi_j <- lambda^-1 S_j Pi_j S_j lambda^-1 with
  // lambda the PSD root of the summed conjugations.
  //
  // Eigenvalues of lambda^2 below roughly eps times its largest eigenvalue
  // are indistinguishable from the round-off of the matrix products that
  // built it; inverting their roots injects order-one indefinite noise into
  // the update. The inversion cutoff therefore never drops below
  // sqrt(machine epsilon) relative to the top of the spectrum.
  const double inversion_threshold =
      std::max(options.pinv_threshold, kLambdaNoiseFloorRel);
  std::vector<Matrix> conjugations(st.povm.size());
  for (Eigen::Index j = 0; j < ep.num_states; ++j) {
    const Matrix s = st.rho[j] / probs.p_diag[j];
    conjugations[static_cast<std::size_t>(j)] = symmetrize(s * st.povm[j] * s);
  }
  const HermitianOperator lambda =
      hermitian_sqrt(HermitianOperator::symmetrized(invariant_matrix_sum(conjugations)));
  const HermitianOperator lambda_inv = pseudo_inverse(lambda, inversion_threshold);
  out.lambda = lambda.matrix();
  for (std::size_t j = 0; j < conjugations.size(); ++j) {
    out.povm_update[j] =
        symmetrize(lambda_inv.matrix() * conjugations[j] * lambda_inv.matrix());
  }

  // Re-project onto the completeness manifold. In exact arithmetic the
  // element sum is already the identity; near-singular lambda amplifies
  // round-off (roughly eps over the squared smallest state eigenvalue), and
  // without this the sum drifts once a state approaches the boundary.
  const Matrix element_sum = invariant_matrix_sum(out.povm_update);
  const HermitianOperator correction = pseudo_inverse(
      hermitian_sqrt(HermitianOperator::symmetrized(element_sum)),
      inversion_threshold);
  for (Matrix& element : out.povm_update) {
    element = symmetrize(correction.matrix() * element * correction.matrix());
  }
  out.completeness_deficit =
      (invariant_matrix_sum(out.povm_update) - Matrix::Identity(ep.dim, ep.dim)).norm();
  return out;
}

EngineState apply_update(const EngineState& st, const StepOutput& out, double damping) {
  EngineState next;
  next.rho.resize(st.rho.size());
  next.povm.resize(st.povm.size());
  for (std::size_t i = 0; i < st.rho.size(); ++i) {
    next.rho[i] = damping == 1.0
                      ? out.rho_update[i]
                      : ((1.0 - damping) * st.rho[i] + damping * out.rho_update[i]).eval();
  }
  for (std::size_t j = 0; j < st.povm.size(); ++j) {
    next.povm[j] = damping == 1.0
                       ? out.povm_update[j]
                       : ((1.0 - damping) * st.povm[j] + damping * out.povm_update[j]).eval();
  }
  return next;
}

double update_distance(const EngineState& st, const std::vector<Matrix>& rho_new,
                       const std::vector<Matrix>& povm_new) {
  double worst = 0.0;
  for (std::size_t i = 0; i < st.rho.size(); ++i) {
    worst = std::max(worst, (rho_new[i] - st.rho[i]).norm());
  }
  for (std::size_t j = 0; j < st.povm.size(); ++j) {
    worst = std::max(worst, (povm_new[j] - st.povm[j]).norm());
  }
  return worst;
}

EngineState uniform_start(const EngineProblem& ep, Eigen::Index num_design_outcomes) {
  EngineState st;
  const Matrix eye = Matrix::Identity(ep.dim, ep.dim);
  st.rho.assign(static_cast<std::size_t>(ep.num_states),
                eye / static_cast<double>(ep.dim));
  st.povm.assign(static_cast<std::size_t>(num_design_outcomes),
                 eye / static_cast<double>(num_design_outcomes));
  return st;
}

EngineState unpack_state(const MlseIterationState& state, const MlseProblem& problem) {
  if (static_cast<Eigen::Index>(state.states.size()) != problem.num_states()) {
    throw std::invalid_argument("iteration state has " +
                                std::to_string(state.states.size()) +
                                " states, problem expects " +
                                std::to_string(problem.num_states()));
  }
  if (static_cast<Eigen::Index>(state.povm.size()) != problem.num_design_outcomes()) {
    throw std::invalid_argument("iteration state POVM size mismatch");
  }
  EngineState st;
  st.rho.reserve(state.states.size());
  for (const auto& rho : state.states) {
    if (rho.dim() != problem.dim()) {
      throw std::invalid_argument("iteration state dimension mismatch");
    }
    st.rho.push_back(rho.matrix());
  }
  st.povm.reserve(state.povm.size());
  for (const auto& element : state.povm.elements()) {
    st.povm.push_back(element.matrix());
  }
  return st;
}

// Iterate invariants are looser than the construction defaults: round-off
// accumulates over thousands of multiplicative updates.
constexpr double kIterTraceTol = 1e-10;
constexpr double kIterPsdTol = 1e-9;
constexpr double kIterCompletenessTol = 1e-9;

std::vector<DensityMatrix> wrap_states(const std::vector<Matrix>& rho) {
  std::vector<DensityMatrix> states;
  states.reserve(rho.size());
  for (const auto& m : rho) {
    states.emplace_back(HermitianOperator::symmetrized(m), kIterTraceTol, kIterPsdTol);
  }
  return states;
}

PovmSet wrap_povm(const std::vector<Matrix>& povm) {
  std::vector<HermitianOperator> elements;
  std::vector<std::string> labels;
  elements.reserve(povm.size());
  for (std::size_t j = 0; j < povm.size(); ++j) {
    elements.push_back(HermitianOperator::symmetrized(povm[j]));
    labels.push_back(std::to_string(j + 1));
  }
  return PovmSet(std::move(elements), std::move(labels), kIterPsdTol,
                 kIterCompletenessTol);
}

void throw_if_floored(const std::optional<FloorHit>& hit, long iteration) {
  if (hit) {
    throw DegenerateLikelihoodError("degenerate likelihood: " + hit->description +
                                        " below the probability floor",
                                    iteration);
  }
}

MlseIterationState wrap_iteration_state(const EngineProblem& ep, EngineState st,
                                        const MlseOptions& options, long iteration) {
  // Evaluate the multipliers and likelihood at the carried iterate.
  StepOutput eval = engine_step(ep, st, options, iteration);
  throw_if_floored(eval.floor_hit, iteration);
  MlseIterationState wrapped{wrap_states(st.rho),
                             wrap_povm(st.povm),
                             std::move(eval.mu),
                             HermitianOperator::symmetrized(eval.lambda),
                             eval.loglik_at_input,
                             iteration};
  return wrapped;
}

}  // namespace

double log_likelihood(const std::vector<DensityMatrix>& states, const PovmSet& povm,
                      const PovmSet& prior_povm, const FrequencyTable& frequencies,
                      double prob_floor) {
  if (static_cast<Eigen::Index>(states.size()) != frequencies.num_states() ||
      static_cast<Eigen::Index>(povm.size()) != frequencies.num_states() ||
      static_cast<Eigen::Index>(prior_povm.size()) != frequencies.num_outcomes()) {
    throw std::invalid_argument("log_likelihood: inconsistent sizes");
  }
  EngineProblem ep;
  ep.dim = povm.dim();
  ep.num_states = frequencies.num_states();
  ep.num_outcomes = frequencies.num_outcomes();
  for (const auto& element : prior_povm.elements()) ep.prior.push_back(element.matrix());
  ep.f = frequencies.matrix();
  EngineState st;
  for (const auto& rho : states) {
    if (rho.dim() != ep.dim) {
      throw std::invalid_argument("log_likelihood: dimension mismatch");
    }
    st.rho.push_back(rho.matrix());
  }
  for (const auto& element : povm.elements()) st.povm.push_back(element.matrix());

  const Probabilities probs = evaluate_probabilities(ep, st, prob_floor);
  throw_if_floored(probs.floor_hit, -1);
  return evaluate_loglik(ep, probs);
}

HermitianOperator compute_R(const DensityMatrix& state_i,
                            const HermitianOperator& povm_element_i,
                            const PovmSet& prior_povm,
                            const Eigen::VectorXd& frequencies_row_i,
                            double prob_floor) {
  if (static_cast<Eigen::Index>(prior_povm.size()) != frequencies_row_i.size()) {
    throw std::invalid_argument("compute_R: frequency row length " +
                                std::to_string(frequencies_row_i.size()) +
                                " does not match prior POVM size " +
                                std::to_string(prior_povm.size()));
  }
  if (state_i.dim() != povm_element_i.dim() || state_i.dim() != prior_povm.dim()) {
    throw std::invalid_argument("compute_R: dimension mismatch");
  }
  const double p_diag = trace_product(state_i.op(), povm_element_i);
  if (p_diag < prob_floor) {
    throw DegenerateLikelihoodError("compute_R: P_ii = " + std::to_string(p_diag) +
                                        " below the probability floor",
                                    -1);
  }
  Matrix r = povm_element_i.matrix() / p_diag;
  for (Eigen::Index k = 0; k < frequencies_row_i.size(); ++k) {
    const double f = frequencies_row_i[k];
    if (f == 0.0) continue;
    const double p = trace_product(state_i.op(), prior_povm.element(k));
    if (p < prob_floor) {
      throw DegenerateLikelihoodError(
          "compute_R: p_ik for outcome " + std::to_string(k) + " = " +
              std::to_string(p) + " below the probability floor with weight " +
              std::to_string(f),
          -1);
    }
    r += (f / p) * prior_povm.element(k).matrix();
  }
  return HermitianOperator::symmetrized(r);
}

HermitianOperator compute_S(const DensityMatrix& state_j, double p_jj,
                            double prob_floor) {
  if (p_jj < prob_floor) {
    throw DegenerateLikelihoodError("compute_S: P_jj = " + std::to_string(p_jj) +
                                        " below the probability floor",
                                    -1);
  }
  return HermitianOperator::symmetrized(state_j.matrix() / p_jj);
}

MlseIterationState initial_state(const MlseProblem& problem, const MlseOptions& options) {
  const EngineProblem ep = unpack(problem);
  return wrap_iteration_state(ep, uniform_start(ep, problem.num_design_outcomes()),
                              options, 0);
}

MlseIterationState make_iteration_state(const std::vector<DensityMatrix>& states,
                                        const PovmSet& povm, const MlseProblem& problem,
                                        const MlseOptions& options, long iteration) {
  if (static_cast<Eigen::Index>(states.size()) != problem.num_states() ||
      static_cast<Eigen::Index>(povm.size()) != problem.num_design_outcomes()) {
    throw std::invalid_argument("make_iteration_state: size mismatch with problem");
  }
  EngineState st;
  for (const auto& rho : states) {
    if (rho.dim() != problem.dim()) {
      throw std::invalid_argument("make_iteration_state: dimension mismatch");
    }
    st.rho.push_back(rho.matrix());
  }
  for (const auto& element : povm.elements()) st.povm.push_back(element.matrix());
  return wrap_iteration_state(unpack(problem), std::move(st), options, iteration);
}

MlseIterationState iterate_once(const MlseIterationState& state,
                                const MlseProblem& problem, const MlseOptions& options) {
  const EngineProblem ep = unpack(problem);
  const EngineState st = unpack_state(state, problem);
  StepOutput out = engine_step(ep, st, options, state.iteration);
  throw_if_floored(out.floor_hit, state.iteration);
  return wrap_iteration_state(ep, apply_update(st, out, options.damping), options,
                              state.iteration + 1);
}

double fixed_point_residual(const MlseIterationState& state, const MlseProblem& problem,
                            const MlseOptions& options) {
  const EngineProblem ep = unpack(problem);
  const EngineState st = unpack_state(state, problem);
  StepOutput out = engine_step(ep, st, options, state.iteration);
  throw_if_floored(out.floor_hit, state.iteration);
  return update_distance(st, out.rho_update, out.povm_update);
}

MlseResult run_mlse(const MlseProblem& problem, const MlseOptions& options) {
  const EngineProblem ep = unpack(problem);
  EngineState current = uniform_start(ep, problem.num_design_outcomes());

  std::vector<double> loglik_trace;
  long iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  long consecutive_floored = 0;

  auto count_floored = [&](const StepOutput& out, long iteration) {
    if (out.floor_hit) {
      if (++consecutive_floored > 100) {
        throw DegenerateLikelihoodError(
            "degenerate likelihood persisted for more than 100 consecutive "
            "iterations: " + out.floor_hit->description,
            iteration);
      }
    } else {
      consecutive_floored = 0;
    }
  };

  // Each StepOutput carries the kernels at the current iterate; it is reused
  // to measure that iterate's fixed-point residual, to record its likelihood
  // and to advance. The returned residual therefore belongs to the returned
  // iterate, so fixed_point_residual on a converged result reproduces it.
  StepOutput out = engine_step(ep, current, options, 0);
  loglik_trace.push_back(out.loglik_at_input);
  count_floored(out, 0);
  residual = update_distance(current, out.rho_update, out.povm_update);

  // Advancing onto a collapsed design (the update's POVM no longer sums to
  // the identity because its support shrank) would leave the invariants
  // unsatisfiable; the run stops at the last valid iterate instead.
  while (iterations < options.max_iter && !(residual < options.tol) &&
         out.completeness_deficit < kIterCompletenessTol) {
    current = apply_update(current, out, options.damping);
    ++iterations;

    out = engine_step(ep, current, options, iterations);
    loglik_trace.push_back(out.loglik_at_input);
    count_floored(out, iterations);
    residual = update_distance(current, out.rho_update, out.povm_update);
  }
  converged = residual < options.tol;

  return MlseResult{wrap_states(current.rho), wrap_povm(current.povm),
                    std::move(loglik_trace), iterations, residual, converged};
}

}  // namespace qsd
