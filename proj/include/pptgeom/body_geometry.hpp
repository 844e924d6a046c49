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

// Exact geometry of the state body M(N) and of the PPT body
// M(N) intersected with T_A(M(N)), both centred at rho* = I/N.
//
// Along a traceless unit direction w the segment rho* + t w stays positive
// until t = 1 / (N |lambda_min(w)|). The PPT body adds the same constraint for
// T_A(w), since T_A(rho*) = rho*. At the contact point the binding constraint
// <phi| X |phi> >= 0 (X = point or T_A(point)) has gradient P_phi (or
// T_A(P_phi)), so the outward normal is the normalized traceless part of
// minus that matrix.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "pptgeom/core.hpp"
#include "pptgeom/hermitian.hpp"

namespace pptgeom {

enum class BodyKind { full_state, ppt };

inline std::string_view to_string(BodyKind k) { return k == BodyKind::ppt ? "ppt" : "full"; }

inline BodyKind parse_body_kind(std::string_view s) {
  if (s == "full" || s == "full-state-body" || s == "full_state") return BodyKind::full_state;
  if (s == "ppt" || s == "ppt-body") return BodyKind::ppt;
  throw DomainError("unknown body kind '" + std::string(s) + "' (expected full|ppt)");
}

class BodySpec {
 public:
  BodySpec(BodyKind kind, BipartiteShape shape) : kind_(kind), shape_(shape) {
    if (kind == BodyKind::ppt && (shape.k() < 2 || shape.m() < 2)) {
      throw DomainError("PPT body needs K >= 2 and M >= 2, got " + shape.to_string());
    }
  }

  static BodySpec full(int n, Field field = Field::complex) {
    return {BodyKind::full_state, BipartiteShape::single(n, field)};
  }
  static BodySpec ppt(int k, int m, Field field = Field::complex) {
    return {BodyKind::ppt, BipartiteShape(k, m, field)};
  }

  BodyKind kind() const { return kind_; }
  const BipartiteShape& shape() const { return shape_; }
  Field field() const { return shape_.field(); }
  int n() const { return shape_.n(); }
  int dim() const { return shape_.dim(); }

  std::string to_string() const {
    return std::string(pptgeom::to_string(kind_)) + " " + shape_.to_string() + " " +
           std::string(pptgeom::to_string(shape_.field()));
  }

 private:
  BodyKind kind_;
  BipartiteShape shape_;
};

/// Radius of the insphere around I/N; shared by both fields and both bodies.
inline double inscribed_radius(int n) {
  if (n < 2) throw DomainError("inscribed radius needs N >= 2");
  return 1.0 / std::sqrt(static_cast<double>(n - 1) * n);
}

/// A/V of the complex state body, sqrt(N(N-1)) (N^2-1).
inline double analytic_area_volume_ratio(int n, Field field = Field::complex) {
  if (n < 2) throw DomainError("area/volume ratio needs N >= 2");
  if (field != Field::complex) {
    throw DomainError("no closed-form area/volume ratio for the real state body");
  }
  return std::sqrt(static_cast<double>(n) * (n - 1)) * (static_cast<double>(n) * n - 1);
}

enum class Binding { direct, partial_transpose };

inline std::string_view to_string(Binding b) {
  return b == Binding::direct ? "direct" : "partial-transpose";
}

enum class Genericity {
  generic,
  degenerate,  // binding zero eigenvalue is not simple
  corner,      // both constraints bind (PPT body only)
};

/// Eigenvalue gap below which a contact is considered non-generic.
inline constexpr double kGenericGap = 1e-10;

template <Scalar S>
struct BoundaryContact {
  DensityMatrix<S> point;
  TracelessDirection<S> normal;
  Binding binding;
  Vector<S> zero_eigvec;
  double radius;
  Genericity genericity;

  bool generic() const { return genericity == Genericity::generic; }
};

namespace detail {

template <Scalar S>
void check_direction(const BodySpec& body, const TracelessDirection<S>& w) {
  if (w.dim() != body.n()) {
    throw DimensionError("direction dimension " + std::to_string(w.dim()) +
                         " does not match body dimension " + std::to_string(body.n()));
  }
  if (body.field() != field_of<S>) throw DomainError("direction field does not match body");
}

inline double radius_from_min_eigenvalue(int n, double lmin) {
  if (!(lmin < 0)) throw NumericalError("traceless direction without a negative eigenvalue");
  return 1.0 / (n * -lmin);
}

}  // namespace detail

template <Scalar S>
double radial_function(const BodySpec& body, const TracelessDirection<S>& w) {
  detail::check_direction(body, w);
  const int n = body.n();
  double r = detail::radius_from_min_eigenvalue(n, min_eigenvalue<S>(w));
  if (body.kind() == BodyKind::ppt) {
    const double lmin_pt = min_eigenvalue(partial_transpose<S>(w, body.shape()));
    r = std::min(r, detail::radius_from_min_eigenvalue(n, lmin_pt));
  }
  return r;
}

template <Scalar S>
BoundaryContact<S> boundary_contact(const BodySpec& body, const TracelessDirection<S>& w) {
  detail::check_direction(body, w);
  const int n = body.n();
  const BipartiteShape& shape = body.shape();

  const Spectrum<S> direct = spectrum<S>(w);
  const double r_direct = detail::radius_from_min_eigenvalue(n, direct.values(0));

  Binding binding = Binding::direct;
  double r = r_direct;
  const Spectrum<S>* bind = &direct;
  Spectrum<S> transposed;
  double other_at_contact = 0;  // lambda_min of the non-binding matrix at the point
  if (body.kind() == BodyKind::ppt) {
    transposed = spectrum(partial_transpose<S>(w, shape));
    const double r_pt = detail::radius_from_min_eigenvalue(n, transposed.values(0));
    if (r_pt < r_direct) {
      binding = Binding::partial_transpose;
      r = r_pt;
      bind = &transposed;
      other_at_contact = 1.0 / n + r * direct.values(0);
    } else {
      other_at_contact = 1.0 / n + r * transposed.values(0);
    }
  }

  Genericity genericity = Genericity::generic;
  if (r * (bind->values(1) - bind->values(0)) < kGenericGap) {
    genericity = Genericity::degenerate;
  } else if (body.kind() == BodyKind::ppt && other_at_contact < kGenericGap) {
    genericity = Genericity::corner;
  }

  const Vector<S> phi = bind->vectors.col(0);
  Matrix<S> gradient = phi * phi.adjoint();
  if (binding == Binding::partial_transpose) {
    gradient = partial_transpose_raw<S>(gradient, shape.k(), shape.m());
  }
  const HermitianMatrix<S> rho_star = HermitianMatrix<S>::identity(n);
  const HermitianMatrix<S> center = (1.0 / n) * rho_star;
  const auto point = DensityMatrix<S>::unchecked(center + r * static_cast<const HermitianMatrix<S>&>(w));

  auto normal = TracelessDirection<S>::normalize(-1.0 * HermitianMatrix<S>(gradient));
  if (hs_inner<S>(point - center, normal) < 0) {
    normal = TracelessDirection<S>::normalize(HermitianMatrix<S>(gradient));
  }
  return BoundaryContact<S>{point, normal, binding, phi, r, genericity};
}

/// Distance from rho* to the supporting hyperplane at the contact point along
/// w; empty for non-generic directions.
template <Scalar S>
std::optional<double> support_height(const BodySpec& body, const TracelessDirection<S>& w) {
  const BoundaryContact<S> c = boundary_contact(body, w);
  if (!c.generic()) return std::nullopt;
  return c.radius * hs_inner<S>(w, c.normal);
}

/// Smallest eigenvalue of the matrix whose positivity binds at the contact.
template <Scalar S>
double binding_min_eigenvalue(const BodySpec& body, const BoundaryContact<S>& c) {
  if (c.binding == Binding::direct) return min_eigenvalue<S>(c.point);
  return min_eigenvalue(partial_transpose<S>(c.point, body.shape()));
}

/// (I - |psi><psi|) / (N - 1): the point where the face orthogonal to psi
/// touches the insphere.
template <Scalar S>
DensityMatrix<S> tangency_state(const Vector<S>& psi, int n) {
  if (n < 2) throw DomainError("tangency state needs N >= 2");
  if (psi.size() != n) throw DimensionError("tangency state: vector length does not match N");
  if (std::abs(psi.norm() - 1.0) > kUnitTolerance) {
    throw DomainError("tangency state needs a unit vector");
  }
  const Matrix<S> sigma = (Matrix<S>::Identity(n, n) - psi * psi.adjoint()) / (n - 1.0);
  return DensityMatrix<S>::unchecked(HermitianMatrix<S>(sigma));
}

}  // namespace pptgeom
