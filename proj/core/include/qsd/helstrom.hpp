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

#include "qsd/states.hpp"

namespace qsd {

/// Exact minimum-error measurement for two equiprobable states, with the
/// residual of the extremal conditions it must satisfy.
struct DiscriminationReport {
  PovmSet povm;              // two elements, element j decides hypothesis j+1
  double error_rate;         // in [0, 1/2]
  double extremal_residual;  // max Frobenius violation of the stationarity conditions
};

/// Average misidentification probability (1/2)(Tr[Pi1 rho2] + Tr[Pi2 rho1])
/// of a two-element POVM deciding between two equiprobable states.
double error_rate(const PovmSet& povm, const DensityMatrix& rho1,
                  const DensityMatrix& rho2);

/// Minimum error rate for two equiprobable pure states with the given
/// overlap magnitude: (1/2)(1 - sqrt(1 - overlap^2)).
double helstrom_bound_pure(double overlap_magnitude);

/// Optimal two-state measurement: the projector onto the strictly positive
/// eigenspace of (rho1 - rho2)/2 decides hypothesis 1, its complement decides
/// hypothesis 2. Zero eigenvalues go to the complement; the error rate does
/// not depend on that tie-break.
DiscriminationReport helstrom_two_state(const DensityMatrix& rho1,
                                        const DensityMatrix& rho2);

/// Independent check of any candidate measurement: minimizes the error rate
/// over all qubit projective measurements, with the Bloch direction swept
/// over a grid_steps x grid_steps (theta, phi) grid. Qubits only.
double brute_force_oracle(const DensityMatrix& rho1, const DensityMatrix& rho2,
                          int grid_steps);

/// Residual of the minimum-error optimality conditions for the multiplier
/// lambda = sum_i rho_i Pi_i: the largest of the stationarity violations
/// ||rho_i Pi_i - lambda Pi_i||, the anti-Hermitian part of lambda, and the
/// amount by which lambda fails to dominate each state. Zero exactly at the
/// optimal measurement.
double check_extremal(const PovmSet& povm, const std::vector<DensityMatrix>& states);

}  // namespace qsd
