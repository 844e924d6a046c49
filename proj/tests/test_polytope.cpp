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
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "pptgeom/polytope.hpp"

namespace {

using pptgeom::RngStream;
using pptgeom::TangentBody;

constexpr double kK = 3.0;
constexpr double kRelFloor = 1e-9;

bool within(const pptgeom::Estimate& e, double target) {
  return e.within(target, kK, kRelFloor * target);
}

TangentBody rectangle() {
  return TangentBody(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, -1),
                         Eigen::Vector2d(0, 1 / 1.5)});
}

TEST(TangentBody, Validation) {
  EXPECT_THROW(TangentBody(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}), pptgeom::DomainError);
  EXPECT_THROW(TangentBody(2, {Eigen::Vector2d(1.5, 0), Eigen::Vector2d(-1, 0)}), pptgeom::DomainError);
  EXPECT_THROW(TangentBody(2, {Eigen::Vector2d(0, 0)}), pptgeom::DomainError);
  EXPECT_THROW(TangentBody(1, {Eigen::VectorXd::Ones(1)}), pptgeom::DomainError);
  EXPECT_THROW(TangentBody(3, {Eigen::Vector2d(1, 0)}), pptgeom::DimensionError);
  EXPECT_THROW(TangentBody(2, {}), pptgeom::DomainError);
}

TEST(TangentBody, CanonicalGeneratorOrder) {
  auto g = TangentBody::cube(3).generators();
  std::reverse(g.begin(), g.end());
  g.push_back(g.front());
  EXPECT_EQ(TangentBody(3, g), TangentBody::cube(3));
  EXPECT_EQ(TangentBody::cube(3).generators().size(), 6u);
}

TEST(TangentBody, SimplexGeneratorsAreUnitAndBalanced) {
  for (int d : {2, 3, 4, 7}) {
    const auto s = TangentBody::regular_simplex(d);
    ASSERT_EQ(s.generators().size(), static_cast<std::size_t>(d + 1));
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (const auto& y : s.generators()) sum += y;
    EXPECT_LT(sum.norm(), 1e-13);
    EXPECT_TRUE(s.all_unit());
    // pairwise inner products -1/D
    EXPECT_NEAR(s.generators()[0].dot(s.generators()[1]), -1.0 / d, 1e-13);
  }
}

TEST(PolarRadial, CubeAxesAndDiagonals) {
  const auto cube = TangentBody::cube(2);
  EXPECT_NEAR(pptgeom::polar_radial(cube, Eigen::Vector2d(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(pptgeom::polar_radial(cube, Eigen::Vector2d(1, 1).normalized()), std::sqrt(2.0),
              1e-14);
  EXPECT_THROW(pptgeom::polar_radial(cube, Eigen::Vector2d(1, 1)), pptgeom::DomainError);
}

TEST(PolarContact, FaceGeometry) {
  const auto r = rectangle();
  const auto c = pptgeom::polar_contact(r, Eigen::Vector2d(0, 1));
  EXPECT_NEAR(c.radius, 1.5, 1e-15);
  EXPECT_NEAR(c.support_distance, 1.5, 1e-15);
  EXPECT_NEAR(c.normal.dot(Eigen::Vector2d(0, 1)), 1.0, 1e-15);
  EXPECT_TRUE(c.generic);
  const auto corner = pptgeom::polar_contact(TangentBody::cube(2), Eigen::Vector2d(1, 1).normalized());
  EXPECT_FALSE(corner.generic);
}

TEST(PolytopeGamma, UnitGeneratorBodiesGiveD) {
  for (int d : {2, 3, 4}) {
    const auto cube = pptgeom::polytope_gamma_mc(TangentBody::cube(d), 20000, RngStream(1));
    EXPECT_TRUE(within(cube.gamma, d)) << "cube D=" << d << " " << cube.gamma.value;
    EXPECT_NEAR(cube.volume.value, std::pow(2.0, d), 4 * cube.volume.std_error);
    EXPECT_NEAR(cube.area.value, 2 * d * std::pow(2.0, d - 1), 4 * cube.area.std_error);
    const auto simplex =
        pptgeom::polytope_gamma_mc(TangentBody::regular_simplex(d), 20000, RngStream(2), 2);
    EXPECT_TRUE(within(simplex.gamma, d)) << "simplex D=" << d << " " << simplex.gamma.value;
    EXPECT_EQ(simplex.faces_hit, d + 1);
  }
}

TEST(PolytopeGamma, RectangleCounterexample) {
  const auto g = pptgeom::polytope_gamma_mc(rectangle(), 100000, RngStream(3), 2);
  EXPECT_NEAR(g.insphere_radius, 1.0, 1e-15);
  EXPECT_TRUE(within(g.gamma, 1.8)) << g.gamma.value << " +- " << g.gamma.std_error;
  EXPECT_NEAR(g.volume.value, 5.0, 4 * g.volume.std_error);
  EXPECT_NEAR(g.area.value, 9.0, 4 * g.area.std_error);
}

TEST(PolytopeGamma, IntersectionsStayConstantHeight) {
  const auto octagon = pptgeom::intersect_bodies(TangentBody::cube(2),
                                                 TangentBody::rotated_square(std::numbers::pi / 4));
  EXPECT_EQ(octagon.generators().size(), 8u);
  const auto g = pptgeom::polytope_gamma_mc(octagon, 20000, RngStream(4));
  EXPECT_TRUE(within(g.gamma, 2.0)) << g.gamma.value;
  // regular octagon with inradius 1: area 8 tan(pi/8)
  EXPECT_NEAR(g.volume.value, 8 * std::tan(std::numbers::pi / 8), 4 * g.volume.std_error + 1e-12);

  const auto mixed = pptgeom::intersect_bodies(TangentBody::cube(3), TangentBody::regular_simplex(3));
  EXPECT_TRUE(within(pptgeom::polytope_gamma_mc(mixed, 20000, RngStream(5)).gamma, 3.0));
  EXPECT_THROW(pptgeom::intersect_bodies(TangentBody::cube(2), TangentBody::cube(3)),
               pptgeom::DimensionError);
}

TEST(HeightCheck, RandomUnitBodiesPassShrunkFail) {
  RngStream rng(6);
  int binding = 0;
  for (int t = 0; t < 5; ++t) {
    // few generators, so a shrunk one usually still carries a facet
    const auto body = TangentBody::random_unit(4, 12, rng);
    const auto ok = pptgeom::constant_height_check(body, 2000, 1e-12, rng.child(100 + t));
    EXPECT_TRUE(ok.pass);
    EXPECT_LE(ok.max_deviation, 1e-12);

    auto g = body.generators();
    const Eigen::VectorXd dir = g[0];
    g[0] *= 0.8;
    const TangentBody shrunk(4, g);
    const auto bad = pptgeom::constant_height_check(shrunk, 2000, 1e-12, rng.child(200 + t));
    // the face of the shrunk generator binds if it is met along its own direction
    if (pptgeom::polar_contact(shrunk, dir).support_distance > 1.2) {
      ++binding;
      EXPECT_FALSE(bad.pass);
      EXPECT_NEAR(bad.max_deviation, 0.25, 1e-12);
    }
  }
  EXPECT_GT(binding, 0);
}

// gamma = D exactly when the height check passes, strictly below otherwise.
TEST(HeightCheck, EquivalentToGammaEqualsD) {
  for (const auto& body : {TangentBody::cube(3), rectangle(),
                           TangentBody(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(-0.9, 0),
                                           Eigen::Vector2d(0, 1), Eigen::Vector2d(0, -1)})}) {
    const auto hc = pptgeom::constant_height_check(body, 2000, 1e-12, RngStream(7));
    const auto g = pptgeom::polytope_gamma_mc(body, 40000, RngStream(8));
    const double d = body.dim();
    if (hc.pass) {
      EXPECT_TRUE(within(g.gamma, d));
    } else {
      EXPECT_GT(d - g.gamma.value, kK * g.gamma.std_error);
    }
  }
}

}  // namespace
