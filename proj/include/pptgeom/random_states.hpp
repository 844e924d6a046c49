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

// Samplers for Hilbert-Schmidt distributed states, HS surface distributed
// boundary states, Haar unitaries/orthogonals and uniform traceless directions.
//
// Spectra come from fixed-trace Wishart matrices. For an n x m Ginibre G
// (n <= m) the eigenvalues of G G^dagger / Tr(G G^dagger) have density
//
//   complex:  prod_i l_i^(m-n)       * prod_{i<j} (l_i - l_j)^2
//   real:     prod_i l_i^((m-n-1)/2) * prod_{i<j} |l_i - l_j|
//
// on the simplex. The HS volume element needs exponent 0 on l_i, the surface
// element of the boundary (one eigenvalue pinned at 0) needs exponent 2
// (complex) or 1 (real), whence the extra-column counts below.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "pptgeom/core.hpp"
#include "pptgeom/hermitian.hpp"
#include "pptgeom/rng.hpp"

namespace pptgeom {

template <Scalar S>
S gaussian_entry(RngStream& rng) {
  if constexpr (field_of<S> == Field::complex) {
    const double re = rng.normal();
    const double im = rng.normal();
    return complex_t(re, im) * (1.0 / std::numbers::sqrt2);
  } else {
    return rng.normal();
  }
}

/// Matrix with i.i.d. standard Gaussian entries (unit variance per entry).
template <Scalar S>
Matrix<S> ginibre(int rows, int cols, RngStream& rng) {
  Matrix<S> g(rows, cols);
  // column-major fill order is part of the determinism contract
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = gaussian_entry<S>(rng);
  }
  return g;
}

/// Haar-distributed unitary (complex) or orthogonal (real) matrix from the QR
/// decomposition of a Ginibre matrix, with R's diagonal made positive.
template <Scalar S>
Matrix<S> sample_haar_unitary(int n, RngStream& rng) {
  if (n < 1) throw DomainError("Haar sampler needs n >= 1");
  const Matrix<S> g = ginibre<S>(n, n, rng);
  const Eigen::HouseholderQR<Matrix<S>> qr(g);
  Matrix<S> q = qr.householderQ();
  const Matrix<S>& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const S d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

namespace detail {

inline constexpr int interior_extra_columns(Field f) { return f == Field::complex ? 0 : 1; }
inline constexpr int boundary_extra_columns(Field f) { return f == Field::complex ? 2 : 3; }

template <Scalar S>
Matrix<S> fixed_trace_wishart(int n, int extra_columns, RngStream& rng) {
  const Matrix<S> g = ginibre<S>(n, n + extra_columns, rng);
  Matrix<S> w = g * g.adjoint();
  return w / std::real(w.trace());
}

}  // namespace detail

/// Density matrix distributed according to the Hilbert-Schmidt measure.
template <Scalar S>
DensityMatrix<S> sample_state_hs(int n, RngStream& rng) {
  if (n < 2) throw DomainError("state sampler needs N >= 2");
  const Matrix<S> w = detail::fixed_trace_wishart<S>(
      n, detail::interior_extra_columns(field_of<S>), rng);
  return DensityMatrix<S>::unchecked(HermitianMatrix<S>(w));
}

/// Nonzero eigenvalues (N - 1 of them, descending) of an HS-surface boundary
/// state, i.e. density prod (l_i - l_j)^beta prod l_i^beta on the simplex.
template <Scalar S>
Eigen::VectorXd sample_boundary_spectrum(int n, RngStream& rng) {
  if (n < 2) throw DomainError("boundary sampler needs N >= 2");
  if (n == 2) return Eigen::VectorXd::Ones(1);
  const Matrix<S> w = detail::fixed_trace_wishart<S>(
      n - 1, detail::boundary_extra_columns(field_of<S>), rng);
  Eigen::SelfAdjointEigenSolver<Matrix<S>> solver(w, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Wishart eigensolver failed");
  Eigen::VectorXd values = solver.eigenvalues().reverse();
  values = values.cwiseMax(0.0);
  return values / values.sum();
}

template <Scalar S>
struct BoundaryState {
  DensityMatrix<S> state;
  Vector<S> zero_eigvec;
  Eigen::VectorXd eigenvalues;  // descending, last entry is the pinned 0
};

/// Boundary state drawn from the HS surface measure on the boundary of the
/// state body: spectrum from sample_boundary_spectrum, eigenbasis Haar.
template <Scalar S>
BoundaryState<S> sample_boundary_state_hs(int n, RngStream& rng) {
  const Eigen::VectorXd nonzero = sample_boundary_spectrum<S>(n, rng);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  values.head(n - 1) = nonzero;
  const Matrix<S> u = sample_haar_unitary<S>(n, rng);
  const Matrix<S> rho = u * values.cast<S>().asDiagonal() * u.adjoint();
  return BoundaryState<S>{DensityMatrix<S>::unchecked(HermitianMatrix<S>(rho)), u.col(n - 1),
                          values};
}

/// Uniform point on the unit sphere of traceless Hermitian matrices: standard
/// Gaussian coordinates on the generalized Gell-Mann basis, normalized. The
/// basis is expanded entrywise (same ordering as gell_mann_basis).
template <Scalar S>
class DirectionSampler {
 public:
  explicit DirectionSampler(int n) : n_(n) {
    if (n < 2) throw DomainError("direction sampler needs N >= 2");
  }

  int n() const { return n_; }
  int dim() const { return ambient_dimension(n_, field_of<S>); }

  TracelessDirection<S> operator()(RngStream& rng) const {
    const Eigen::VectorXd c = coordinates(rng);
    return TracelessDirection<S>::from_unit(HermitianMatrix<S>(expand(c / c.norm())));
  }

  /// Raw Gaussian coordinates in basis order.
  Eigen::VectorXd coordinates(RngStream& rng) const {
    Eigen::VectorXd c(dim());
    for (int i = 0; i < dim(); ++i) c(i) = rng.normal();
    return c;
  }

  Matrix<S> expand(const Eigen::VectorXd& c) const {
    const double h = 1.0 / std::numbers::sqrt2;
    Matrix<S> m = Matrix<S>::Zero(n_, n_);
    int idx = 0;
    for (int j = 0; j < n_; ++j) {
      for (int k = j + 1; k < n_; ++k, ++idx) {
        m(j, k) += c(idx) * h;
        m(k, j) += c(idx) * h;
      }
    }
    if constexpr (field_of<S> == Field::complex) {
      for (int j = 0; j < n_; ++j) {
        for (int k = j + 1; k < n_; ++k, ++idx) {
          m(j, k) += complex_t(0, -c(idx) * h);
          m(k, j) += complex_t(0, c(idx) * h);
        }
      }
    }
    for (int l = 1; l < n_; ++l, ++idx) {
      const double s = c(idx) / std::sqrt(static_cast<double>(l) * (l + 1));
      for (int i = 0; i < l; ++i) m(i, i) += s;
      m(l, l) -= l * s;
    }
    return m;
  }

 private:
  int n_;
};

template <Scalar S>
TracelessDirection<S> sample_direction(const BipartiteShape& shape, RngStream& rng) {
  if (shape.field() != field_of<S>) throw DomainError("shape field does not match scalar type");
  return DirectionSampler<S>(shape.n())(rng);
}

}  // namespace pptgeom
