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

#include <Eigen/Dense>
#include <complex>

namespace qsd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Per-entry tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermiticityTol = 1e-12;

/// Eigenvalues in [-kEigenvalueClampTol, 0) are treated as round-off and
/// clamped to zero; anything below is a genuine constraint violation.
inline constexpr double kEigenvalueClampTol = 1e-10;

/// Default relative cutoff for the on-support pseudo-inverse.
inline constexpr double kDefaultPinvThreshold = 1e-12;

/// Dense complex Hermitian matrix. Immutable after construction; the checked
/// constructor rejects anti-Hermitian parts above kHermiticityTol per entry.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  /// Builds from (m + m^dag)/2 without a Hermiticity check. Used after
  /// multiplicative updates to strip accumulated anti-Hermitian round-off.
  static HermitianOperator symmetrized(const Matrix& m);

  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator zero(Eigen::Index dim);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double trace() const { return entries_.trace().real(); }

 private:
  struct Unchecked {};
  HermitianOperator(Matrix entries, Unchecked) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// Eigendecomposition with eigenvalues sorted descending; eigenvector columns
/// are aligned with the eigenvalues and orthonormal.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;
};

Spectrum spectral_decomposition(const HermitianOperator& a);

/// Re Tr[a b]. Throws on dimension mismatch, or if the imaginary part of the
/// trace exceeds 1e-10 (which would mean a broken Hermiticity invariant).
double trace_product(const HermitianOperator& a, const HermitianOperator& b);

/// Hermitian PSD square root via the spectrum. Eigenvalues in the clamp
/// window are zeroed first; eigenvalues below -kEigenvalueClampTol throw.
HermitianOperator hermitian_sqrt(const HermitianOperator& a);

/// On-support inverse of a PSD operator: eigenvalues >= rel_threshold times
/// the largest are inverted, the rest map to zero. Throws for the zero
/// operator (no support).
HermitianOperator pseudo_inverse(const HermitianOperator& a,
                                 double rel_threshold = kDefaultPinvThreshold);

/// True iff the minimum eigenvalue is >= -tol.
bool is_psd(const HermitianOperator& a, double tol);

double min_eigenvalue(const HermitianOperator& a);

double frobenius_distance(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace qsd
