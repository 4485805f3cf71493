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

#include "qsd/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qsd {

namespace {

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("operator must be square and non-empty, got " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
}

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_);
  for (Eigen::Index a = 0; a < entries_.rows(); ++a) {
    for (Eigen::Index b = a; b < entries_.cols(); ++b) {
      const Complex delta = entries_(a, b) - std::conj(entries_(b, a));
      if (std::abs(delta) > 2 * kHermiticityTol) {
        throw std::invalid_argument(
            "matrix is not Hermitian: entry (" + std::to_string(a) + "," +
            std::to_string(b) + ") deviates from the conjugate of its mirror by " +
            std::to_string(std::abs(delta) / 2));
      }
    }
  }
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& m) {
  require_square(m);
  return HermitianOperator(0.5 * (m + m.adjoint()).eval(), Unchecked{});
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  return HermitianOperator(Matrix::Zero(dim, dim), Unchecked{});
}

Spectrum spectral_decomposition(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed to converge");
  }
  // Eigen returns ascending order; flip to descending.
  const Eigen::Index d = a.dim();
  Spectrum spectrum;
  spectrum.eigenvalues = solver.eigenvalues().reverse();
  spectrum.eigenvectors = Matrix(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    spectrum.eigenvectors.col(n) = solver.eigenvectors().col(d - 1 - n);
  }
  return spectrum;
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b);
  // Tr[a b] = sum_{mn} a_mn b_nm, without forming the product.
  const Complex tr = a.matrix().cwiseProduct(b.matrix().transpose()).sum();
  if (std::abs(tr.imag()) > 1e-10) {
    throw std::runtime_error(
        "trace product has imaginary part " + std::to_string(tr.imag()) +
        "; Hermiticity invariant violated");
  }
  return tr.real();
}

HermitianOperator hermitian_sqrt(const HermitianOperator& a) {
  const Spectrum spectrum = spectral_decomposition(a);
  Eigen::VectorXd roots(a.dim());
  for (Eigen::Index n = 0; n < a.dim(); ++n) {
    const double ev = spectrum.eigenvalues[n];
    if (ev < -kEigenvalueClampTol) {
      throw std::domain_error("operator is not PSD: eigenvalue " +
                              std::to_string(ev) + " below -" +
                              std::to_string(kEigenvalueClampTol));
    }
    roots[n] = ev > 0 ? std::sqrt(ev) : 0.0;
  }
  const Matrix root = spectrum.eigenvectors * roots.asDiagonal() *
                      spectrum.eigenvectors.adjoint();
  return HermitianOperator::symmetrized(root);
}

HermitianOperator pseudo_inverse(const HermitianOperator& a, double rel_threshold) {
  const Spectrum spectrum = spectral_decomposition(a);
  const double largest = spectrum.eigenvalues[0];
  if (largest <= 0.0) {
    throw std::domain_error("pseudo-inverse of the zero operator: no support");
  }
  const double cutoff = rel_threshold * largest;
  Eigen::VectorXd inverted(a.dim());
  for (Eigen::Index n = 0; n < a.dim(); ++n) {
    const double ev = spectrum.eigenvalues[n];
    inverted[n] = ev >= cutoff ? 1.0 / ev : 0.0;
  }
  const Matrix pinv = spectrum.eigenvectors * inverted.asDiagonal() *
                      spectrum.eigenvectors.adjoint();
  return HermitianOperator::symmetrized(pinv);
}

bool is_psd(const HermitianOperator& a, double tol) {
  return min_eigenvalue(a) >= -tol;
}

double min_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed to converge");
  }
  return solver.eigenvalues()[0];
}

double frobenius_distance(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b);
  return (a.matrix() - b.matrix()).norm();
}

}  // namespace qsd
