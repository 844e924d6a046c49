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


#include <cmath>

#include <gtest/gtest.h>

#include "pptgeom/body_geometry.hpp"
#include "pptgeom/random_states.hpp"

namespace {

using pptgeom::BipartiteShape;
using pptgeom::BodyKind;
using pptgeom::BodySpec;
using pptgeom::complex_t;
using pptgeom::Field;
using pptgeom::RngStream;
using pptgeom::TracelessDirection;
using pptgeom::Vector;

TracelessDirection<complex_t> bell_direction() {
  Vector<complex_t> phi = Vector<complex_t>::Zero(4);
  phi(0) = phi(3) = 1 / std::sqrt(2.0);
  return TracelessDirection<complex_t>::towards(pptgeom::DensityMatrix<complex_t>::pure(phi));
}

TEST(BodySpec, Validation) {
  EXPECT_THROW(BodySpec(BodyKind::ppt, BipartiteShape::single(4)), pptgeom::DomainError);
  EXPECT_EQ(BodySpec::full(3, Field::real).dim(), 5);
  EXPECT_EQ(BodySpec::ppt(2, 3).dim(), 35);
  EXPECT_EQ(pptgeom::parse_body_kind("ppt"), BodyKind::ppt);
  EXPECT_THROW(pptgeom::parse_body_kind("sep"), pptgeom::DomainError);
}

TEST(InscribedRadius, ClosedForm) {
  EXPECT_NEAR(pptgeom::inscribed_radius(2), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(pptgeom::inscribed_radius(4), 1 / std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(pptgeom::analytic_area_volume_ratio(2), std::sqrt(2.0) * 3, 1e-13);
  EXPECT_THROW(pptgeom::analytic_area_volume_ratio(3, Field::real), pptgeom::DomainError);
}

TEST(Radial, BellDirection) {
  const auto w = bell_direction();
  EXPECT_NEAR(pptgeom::radial_function(BodySpec::full(4), w), std::sqrt(3.0) / 2, 1e-14);
  EXPECT_NEAR(pptgeom::radial_function(BodySpec::ppt(2, 2), w), 1 / std::sqrt(12.0), 1e-14);
  // the PPT boundary along this ray is the Werner state at p = 1/3
  const auto c = pptgeom::boundary_contact(BodySpec::ppt(2, 2), w);
  EXPECT_EQ(c.binding, pptgeom::Binding::partial_transpose);
  Vector<complex_t> phi = Vector<complex_t>::Zero(4);
  phi(0) = phi(3) = 1 / std::sqrt(2.0);
  const pptgeom::Matrix<complex_t> expected =
      (phi * phi.adjoint()) / 3.0 + pptgeom::Matrix<complex_t>::Identity(4, 4) * (2.0 / 3.0) / 4.0;
  EXPECT_LT((c.point.matrix() - expected).norm(), 1e-14);
}

TEST(Radial, QubitBodyIsABall) {
  RngStream rng(1);
  const pptgeom::DirectionSampler<complex_t> sampler(2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(pptgeom::radial_function(BodySpec::full(2), sampler(rng)), 1 / std::sqrt(2.0),
                1e-14);
  }
}

template <class S>
void check_body_properties(const BodySpec& body, int trials) {
  RngStream rng(static_cast<std::uint64_t>(body.dim()) * 7919 + (body.kind() == BodyKind::ppt));
  const pptgeom::DirectionSampler<S> sampler(body.n());
  const BodySpec full(BodyKind::full_state, body.shape());
  const double r_in = pptgeom::inscribed_radius(body.n());
  const double r_out = std::sqrt((body.n() - 1.0) / body.n());
  int generic = 0;
  for (int i = 0; i < trials; ++i) {
    const auto w = sampler(rng);
    const double r = pptgeom::radial_function(body, w);
    EXPECT_GE(r, r_in - 1e-12);
    EXPECT_LE(r, r_out + 1e-12);
    EXPECT_LE(r, pptgeom::radial_function(full, w) + 1e-15);

    const auto c = pptgeom::boundary_contact(body, w);
    EXPECT_NEAR(c.radius, r, 1e-15);
    EXPECT_NEAR(pptgeom::binding_min_eigenvalue(body, c), 0.0, 1e-12);
    EXPECT_GT(pptgeom::min_eigenvalue<S>(c.point), -1e-12);
    if (body.kind() == BodyKind::ppt) {
      EXPECT_TRUE(pptgeom::is_ppt(c.point, body.shape(), 1e-12));
    }
    EXPECT_GT(pptgeom::hs_inner<S>(w, c.normal), 0.0);
    EXPECT_NEAR(pptgeom::hs_norm<S>(c.normal), 1.0, 1e-13);

    const auto h = pptgeom::support_height(body, w);
    if (h) {
      ++generic;
      EXPECT_NEAR(*h, r_in, 1e-12) << body.to_string();
    }
  }
  EXPECT_EQ(generic, trials);
}

TEST(ConstantHeight, FullBodies) {
  for (int n : {2, 3, 4, 6}) {
    check_body_properties<complex_t>(BodySpec::full(n), 200);
    check_body_properties<double>(BodySpec::full(n, Field::real), 200);
  }
}

TEST(ConstantHeight, PptBodies) {
  for (auto [k, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    check_body_properties<complex_t>(BodySpec::ppt(k, m), 200);
    check_body_properties<double>(BodySpec::ppt(k, m, Field::real), 200);
  }
}

TEST(ConstantHeight, TangencyStateLiesOnFaceAndInsphere) {
  RngStream rng(3);
  for (int n : {2, 3, 5}) {
    Vector<complex_t> psi = pptgeom::sample_haar_unitary<complex_t>(n, rng).col(0);
    const auto sigma = pptgeom::tangency_state<complex_t>(psi, n);
    const auto center = pptgeom::DensityMatrix<complex_t>::maximally_mixed(n);
    EXPECT_NEAR(pptgeom::hs_distance<complex_t>(sigma, center), pptgeom::inscribed_radius(n),
                1e-14);
    EXPECT_NEAR(std::real(psi.dot(sigma.matrix() * psi)), 0.0, 1e-14);
  }
  EXPECT_THROW(pptgeom::tangency_state<complex_t>(Vector<complex_t>::Ones(3), 3),
               pptgeom::DomainError);
}

TEST(Genericity, DegenerateDirectionIsFlagged) {
  // diag(1, 1, -1, -1) / 2 has a doubly degenerate minimum eigenvalue
  pptgeom::Matrix<double> a = pptgeom::Matrix<double>::Zero(4, 4);
  a.diagonal() << 0.5, 0.5, -0.5, -0.5;
  const auto w = TracelessDirection<double>::from_unit(pptgeom::HermitianMatrix<double>(a));
  const auto c = pptgeom::boundary_contact(BodySpec::full(4, Field::real), w);
  EXPECT_EQ(c.genericity, pptgeom::Genericity::degenerate);
  EXPECT_FALSE(pptgeom::support_height(BodySpec::full(4, Field::real), w).has_value());
}

TEST(Radial, RejectsMismatchedDirections) {
  RngStream rng(4);
  const auto w3 = pptgeom::DirectionSampler<complex_t>(3)(rng);
  EXPECT_THROW(pptgeom::radial_function(BodySpec::full(4), w3), pptgeom::DimensionError);
  const auto wr = pptgeom::DirectionSampler<double>(4)(rng);
  EXPECT_THROW(pptgeom::radial_function(BodySpec::full(4), wr), pptgeom::DomainError);
}

}  // namespace
