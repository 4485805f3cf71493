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

#include "qsd/helstrom.hpp"

#include <cmath>
#include <stdexcept>

namespace qsd {

namespace {

void require_two_element_setup(const PovmSet& povm, const DensityMatrix& rho1,
                               const DensityMatrix& rho2) {
  if (povm.size() != 2) {
    throw std::invalid_argument("two-state discrimination needs exactly 2 POVM "
                                "elements, got " + std::to_string(povm.size()));
  }
  if (povm.dim() != rho1.dim() || rho1.dim() != rho2.dim()) {
    throw std::invalid_argument("dimension mismatch between POVM and states");
  }
}

}  // namespace

double error_rate(const PovmSet& povm, const DensityMatrix& rho1,
                  const DensityMatrix& rho2) {
  require_two_element_setup(povm, rho1, rho2);
  return 0.5 * (trace_product(povm.element(0), rho2.op()) +
                trace_product(povm.element(1), rho1.op()));
}

double helstrom_bound_pure(double overlap_magnitude) {
  if (!(overlap_magnitude >= 0.0 && overlap_magnitude <= 1.0)) {
    throw std::invalid_argument("overlap magnitude " +
                                std::to_string(overlap_magnitude) +
                                " outside [0, 1]");
  }
  return 0.5 * (1.0 - std::sqrt(1.0 - overlap_magnitude * overlap_magnitude));
}

DiscriminationReport helstrom_two_state(const DensityMatrix& rho1,
                                        const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw std::invalid_argument("dimension mismatch between states");
  }
  const Eigen::Index d = rho1.dim();
  const HermitianOperator delta =
      HermitianOperator::symmetrized(0.5 * (rho1.matrix() - rho2.matrix()));
  const Spectrum spectrum = spectral_decomposition(delta);

  // Projector onto the strictly positive eigenspace; eigenvalue-zero
  // directions fall to the complement.
  Matrix p1 = Matrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    if (spectrum.eigenvalues[n] > 0.0) {
      p1 += spectrum.eigenvectors.col(n) * spectrum.eigenvectors.col(n).adjoint();
    }
  }
  std::vector<HermitianOperator> elements;
  elements.push_back(HermitianOperator::symmetrized(p1));
  elements.push_back(HermitianOperator::symmetrized(Matrix::Identity(d, d) - p1));
  PovmSet povm(std::move(elements), std::vector<std::string>{"1", "2"});

  const double er = error_rate(povm, rho1, rho2);
  const double residual = check_extremal(povm, {rho1, rho2});
  return DiscriminationReport{std::move(povm), er, residual};
}

double brute_force_oracle(const DensityMatrix& rho1, const DensityMatrix& rho2,
                          int grid_steps) {
  if (rho1.dim() != 2 || rho2.dim() != 2) {
    throw std::invalid_argument("brute-force oracle supports qubits only");
  }
  if (grid_steps < 2) {
    throw std::invalid_argument("grid_steps must be at least 2");
  }
  const Eigen::Matrix2cd a = rho1.matrix();
  const Eigen::Matrix2cd b = rho2.matrix();

  double best = 1.0;
  for (int ti = 0; ti < grid_steps; ++ti) {
    const double theta = M_PI * static_cast<double>(ti) / (grid_steps - 1);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (int pi_idx = 0; pi_idx < grid_steps; ++pi_idx) {
      const double phi = 2.0 * M_PI * static_cast<double>(pi_idx) / grid_steps;
      // Projector onto the Bloch direction (theta, phi).
      Eigen::Matrix2cd proj;
      proj(0, 0) = Complex(0.5 * (1.0 + ct), 0.0);
      proj(1, 1) = Complex(0.5 * (1.0 - ct), 0.0);
      proj(0, 1) = 0.5 * st * Complex(std::cos(phi), -std::sin(phi));
      proj(1, 0) = std::conj(proj(0, 1));
      const double tr_proj_b = (proj * b).trace().real();
      const double tr_proj_a = (proj * a).trace().real();
      const double er = 0.5 * (tr_proj_b + 1.0 - tr_proj_a);
      best = std::min(best, er);
    }
  }
  return best;
}

double check_extremal(const PovmSet& povm, const std::vector<DensityMatrix>& states) {
  if (states.size() != 2 || povm.size() != 2) {
    throw std::invalid_argument("extremal check expects two states and two "
                                "POVM elements");
  }
  if (povm.dim() != states[0].dim() || states[0].dim() != states[1].dim()) {
    throw std::invalid_argument("dimension mismatch between POVM and states");
  }
  const Eigen::Index d = povm.dim();
  Matrix lambda = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < 2; ++i) {
    lambda += states[i].matrix() * povm.element(i).matrix();
  }

  // A measurement is the minimum-error optimum iff the multiplier is
  // Hermitian, each rho_i Pi_i equals lambda Pi_i, and lambda dominates every
  // state. The stationarity part alone holds for any projective measurement
  // (including the worst one), so all three violations enter the residual.
  double worst = 0.5 * (lambda - lambda.adjoint()).norm();
  for (std::size_t i = 0; i < 2; ++i) {
    const Matrix violation =
        states[i].matrix() * povm.element(i).matrix() - lambda * povm.element(i).matrix();
    worst = std::max(worst, violation.norm());
  }
  const HermitianOperator lambda_h = HermitianOperator::symmetrized(lambda);
  for (std::size_t i = 0; i < 2; ++i) {
    const double domination_gap = -min_eigenvalue(
        HermitianOperator::symmetrized(lambda_h.matrix() - states[i].matrix()));
    worst = std::max(worst, std::max(domination_gap, 0.0));
  }
  return worst;
}

}  // namespace qsd
