// Copyright 2026 The pptgeom Authors
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

// Hermitian matrix algebra under the Hilbert-Schmidt inner product, partial
// transposition and the PPT predicate.

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pptgeom/core.hpp"

namespace pptgeom {

template <Scalar S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <Scalar S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

inline constexpr double kDefaultPsdTolerance = 1e-12;
inline constexpr double kDefaultPptTolerance = 1e-12;

/// Hermitian (real symmetric for S = double) matrix of dimension >= 2.
/// The stored entries are (A + A^dagger) / 2 of whatever was passed in.
template <Scalar S>
class HermitianMatrix {
 public:
  using scalar_type = S;
  using matrix_type = Matrix<S>;

  explicit HermitianMatrix(const matrix_type& a) {
    if (a.rows() != a.cols()) {
      throw DimensionError("Hermitian matrix must be square, got " + std::to_string(a.rows()) +
                           "x" + std::to_string(a.cols()));
    }
    if (a.rows() < 2) throw DimensionError("Hermitian matrix needs dimension >= 2");
    m_ = (a + a.adjoint()) * 0.5;
  }

  static HermitianMatrix identity(int n) { return HermitianMatrix(matrix_type::Identity(n, n)); }
  static HermitianMatrix zero(int n) { return HermitianMatrix(matrix_type::Zero(n, n)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const matrix_type& matrix() const { return m_; }
  S operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return std::real(m_.trace()); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same_dim(a, b);
    return HermitianMatrix(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same_dim(a, b);
    return HermitianMatrix(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix(s * a.m_);
  }
  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

  static void check_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) {
      throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                           std::to_string(b.dim()));
    }
  }

 private:
  matrix_type m_;
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
template <Scalar S>
struct Spectrum {
  Eigen::VectorXd values;
  Matrix<S> vectors;  // empty when only eigenvalues were requested
};

template <Scalar S>
Spectrum<S> spectrum(const HermitianMatrix<S>& a, bool with_vectors = true) {
  Eigen::SelfAdjointEigenSolver<Matrix<S>> solver(
      a.matrix(), with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Hermitian eigensolver did not converge (dim " << a.dim()
        << ", Frobenius norm " << a.matrix().norm() << ")";
    throw NumericalError(msg.str());
  }
  Spectrum<S> out;
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

template <Scalar S>
double min_eigenvalue(const HermitianMatrix<S>& a) {
  return spectrum(a, false).values(0);
}

/// Trace-one positive semidefinite Hermitian matrix.
template <Scalar S>
class DensityMatrix : public HermitianMatrix<S> {
 public:
  using base_type = HermitianMatrix<S>;

  /// Renormalizes to unit trace and rejects matrices with lambda_min < -tol_psd.
  explicit DensityMatrix(const base_type& h, double tol_psd = kDefaultPsdTolerance)
      : base_type(normalized(h)) {
    const double lmin = min_eigenvalue<S>(*this);
    if (lmin < -tol_psd) {
      throw DomainError("matrix is not positive semidefinite (lambda_min = " +
                        std::to_string(lmin) + ")");
    }
  }

  /// Skips the eigenvalue check. For callers that are PSD by construction.
  static DensityMatrix unchecked(const base_type& h) {
    return DensityMatrix(normalized(h), unchecked_tag{});
  }

  static DensityMatrix maximally_mixed(int n) { return unchecked(base_type::identity(n)); }

  static DensityMatrix pure(const Vector<S>& psi) {
    const double norm = psi.norm();
    if (!(norm > 0)) throw DomainError("pure state needs a nonzero vector");
    const Vector<S> u = psi / norm;
    return unchecked(base_type(u * u.adjoint()));
  }

 private:
  struct unchecked_tag {};
  DensityMatrix(const base_type& h, unchecked_tag) : base_type(h) {}

  static base_type normalized(const base_type& h) {
    const double tr = h.trace();
    if (!(std::abs(tr) > 0)) throw DomainError("cannot normalize a traceless matrix to a state");
    return (1.0 / tr) * h;
  }
};

inline constexpr double kUnitTolerance = 1e-12;

/// Hilbert-Schmidt inner product Tr(A B).
template <Scalar S>
double hs_inner(const HermitianMatrix<S>& a, const HermitianMatrix<S>& b) {
  HermitianMatrix<S>::check_same_dim(a, b);
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return std::real((a.matrix().array() * b.matrix().array().conjugate()).sum());
}

template <Scalar S>
double hs_norm(const HermitianMatrix<S>& a) {
  return std::sqrt(hs_inner(a, a));
}

template <Scalar S>
double hs_distance(const HermitianMatrix<S>& rho, const HermitianMatrix<S>& sigma) {
  return hs_norm<S>(rho - sigma);
}

/// Unit-norm traceless Hermitian matrix: a point of the unit sphere around I/N.
template <Scalar S>
class TracelessDirection : public HermitianMatrix<S> {
 public:
  using base_type = HermitianMatrix<S>;

  /// Projects out the trace and rescales to unit Hilbert-Schmidt norm.
  static TracelessDirection normalize(const base_type& h) {
    const int n = h.dim();
    const base_type traceless = h - (h.trace() / n) * base_type::identity(n);
    const double norm = hs_norm(traceless);
    if (!(norm > 0)) throw DomainError("direction has no traceless component");
    return TracelessDirection((1.0 / norm) * traceless);
  }

  /// Accepts h as-is, provided it is already traceless with unit norm.
  static TracelessDirection from_unit(const base_type& h) {
    if (std::abs(h.trace()) > kUnitTolerance) {
      throw DomainError("direction is not traceless (trace " + std::to_string(h.trace()) + ")");
    }
    const double norm = hs_norm(h);
    if (std::abs(norm - 1.0) > kUnitTolerance) {
      throw DomainError("direction does not have unit norm (norm " + std::to_string(norm) + ")");
    }
    return TracelessDirection(h);
  }

  /// Direction from the maximally mixed state towards rho.
  static TracelessDirection towards(const HermitianMatrix<S>& rho) { return normalize(rho); }

 private:
  explicit TracelessDirection(const base_type& h) : base_type(h) {}
};

/// (T (x) 1) applied to a raw K*M square matrix.
template <Scalar S>
Matrix<S> partial_transpose_raw(const Matrix<S>& a, int k, int m) {
  Matrix<S> out(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      // block (i, j) of the output is block (j, i) of the input
      out.block(i * m, j * m, m, m) = a.block(j * m, i * m, m, m);
    }
  }
  return out;
}

/// Transpose on the first tensor factor: out((i,a),(j,b)) = in((j,a),(i,b)).
template <Scalar S>
HermitianMatrix<S> partial_transpose(const HermitianMatrix<S>& a, const BipartiteShape& shape) {
  if (a.dim() != shape.n()) {
    throw DimensionError("partial transpose: matrix dimension " + std::to_string(a.dim()) +
                         " does not match shape " + shape.to_string());
  }
  return HermitianMatrix<S>(partial_transpose_raw<S>(a.matrix(), shape.k(), shape.m()));
}

template <Scalar S>
TracelessDirection<S> partial_transpose(const TracelessDirection<S>& w,
                                        const BipartiteShape& shape) {
  return TracelessDirection<S>::from_unit(
      partial_transpose(static_cast<const HermitianMatrix<S>&>(w), shape));
}

template <Scalar S>
bool is_ppt(const DensityMatrix<S>& rho, const BipartiteShape& shape,
            double tol = kDefaultPptTolerance) {
  return min_eigenvalue(partial_transpose<S>(rho, shape)) >= -tol;
}

/// Sum of the absolute values of the negative eigenvalues of T_A(rho).
template <Scalar S>
double negativity(const DensityMatrix<S>& rho, const BipartiteShape& shape) {
  const auto values = spectrum(partial_transpose<S>(rho, shape), false).values;
  double sum = 0;
  for (double v : values) {
    if (v < 0) sum -= v;
  }
  return sum;
}

/// HS-orthonormal basis of traceless Hermitian N x N matrices: symmetric
/// off-diagonal elements, then (complex only) antisymmetric ones, then the
/// N-1 diagonal elements diag(1,..,1,-l,0,..)/sqrt(l(l+1)).
template <Scalar S>
std::vector<HermitianMatrix<S>> gell_mann_basis(int n) {
  std::vector<HermitianMatrix<S>> basis;
  basis.reserve(static_cast<std::size_t>(ambient_dimension(n, field_of<S>)));
  const double h = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix<S> e = Matrix<S>::Zero(n, n);
      e(j, k) = h;
      e(k, j) = h;
      basis.emplace_back(e);
    }
  }
  if constexpr (field_of<S> == Field::complex) {
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Matrix<S> e = Matrix<S>::Zero(n, n);
        e(j, k) = complex_t(0, -h);
        e(k, j) = complex_t(0, h);
        basis.emplace_back(e);
      }
    }
  }
  for (int l = 1; l < n; ++l) {
    Matrix<S> e = Matrix<S>::Zero(n, n);
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) e(i, i) = c;
    e(l, l) = -l * c;
    basis.emplace_back(e);
  }
  return basis;
}

}  // namespace pptgeom
