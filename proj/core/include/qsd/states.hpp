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

#include <string>
#include <vector>

#include "qsd/hermitian.hpp"

namespace qsd {

/// Hermitian, PSD, unit-trace operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op, double trace_tol = 1e-12,
                         double psd_tol = 1e-10);

  Eigen::Index dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

  /// Tr[rho^2]; 1 for pure states, 1/dim for maximally mixed.
  double purity() const;

 private:
  HermitianOperator op_;
};

/// Ordered set of PSD operators summing to the identity, one label each.
class PovmSet {
 public:
  PovmSet(std::vector<HermitianOperator> elements, std::vector<std::string> labels,
          double psd_tol = 1e-10, double completeness_tol = 1e-10);

  /// Convenience constructor with labels "E0", "E1", ...
  explicit PovmSet(std::vector<HermitianOperator> elements, double psd_tol = 1e-10,
                   double completeness_tol = 1e-10);

  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.front().dim(); }
  const HermitianOperator& element(std::size_t k) const { return elements_.at(k); }
  const std::vector<HermitianOperator>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<HermitianOperator> elements_;
  std::vector<std::string> labels_;
};

/// Parameters of the two-state qubit family: diagonal fixed by alpha, the
/// off-diagonal scaled by d, with sign selecting the first or second state.
struct StateParams {
  double alpha = 0.0;  // radians, in [0, pi/4]
  double d = 1.0;      // in [0, 1]
  int sign = +1;       // +1 or -1
};

/// rho = [[cos^2 a, s d cos a sin a], [s d cos a sin a, sin^2 a]].
DensityMatrix make_state(const StateParams& params);

enum class Axis { X, Y, Z };

char axis_name(Axis axis);
Axis axis_from_name(char name);

/// Parses a comma separated axis list such as "x,y" or "x,y,z".
std::vector<Axis> parse_axes(const std::string& text);

/// Rank-1 projector onto the +/- eigenstate of the given Pauli axis.
HermitianOperator pauli_projector(Axis axis, int direction);

/// Projective settings combined into one complete POVM: the 2M projectors of
/// M distinct axes, each scaled by 1/M so the set sums to the identity and
/// outcome rows of the Born table sum to one.
PovmSet make_prior_povm(const std::vector<Axis>& settings);

/// Entry (i, k) = Re Tr[states[i] povm[k]], clamped to [0, 1].
Eigen::MatrixXd born_table(const std::vector<DensityMatrix>& states,
                           const PovmSet& povm);

}  // namespace qsd
