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

#include "pptgeom/estimators.hpp"

namespace {

using pptgeom::BipartiteShape;
using pptgeom::BodyKind;
using pptgeom::BodySpec;
using pptgeom::Field;
using pptgeom::RngStream;

constexpr double kK = 3.0;          // acceptance band, stderr units
constexpr double kRefK = 4.0;       // band for literature reference values
constexpr double kRelFloor = 1e-9;  // zero-variance slack, relative

bool within(const pptgeom::Estimate& e, double target, double k = kK) {
  return e.within(target, k, kRelFloor * std::abs(target));
}

TEST(Radial, QubitVolumeAndAreaAreExact) {
  const auto rep = pptgeom::mc_radial(BodySpec::full(2), 5000, RngStream(1));
  EXPECT_NEAR(rep.volume.value, std::numbers::pi * std::numbers::sqrt2 / 3, 1e-12);
  EXPECT_NEAR(rep.area.value, 2 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(rep.gamma.value, 3.0, 1e-12);
  EXPECT_EQ(rep.area.skipped, 0);
  EXPECT_EQ(rep.gamma.estimator_id, "mc_gamma");
}

TEST(Radial, GammaEqualsDimension) {
  for (Field f : {Field::complex, Field::real}) {
    for (int n : {3, 4}) {
      const BodySpec body(BodyKind::full_state, BipartiteShape::single(n, f));
      const auto g = pptgeom::mc_gamma(body, 20000, RngStream(2), 2);
      EXPECT_TRUE(within(g, body.dim())) << body.to_string() << " gamma " << g.value;
    }
  }
  const BodySpec real_ppt = BodySpec::ppt(2, 2, Field::real);
  ASSERT_EQ(real_ppt.dim(), 9);
  const auto g = pptgeom::mc_gamma(real_ppt, 20000, RngStream(3));
  EXPECT_TRUE(within(g, 9.0)) << g.value;
}

TEST(Radial, AreaVolumeRatioMatchesClosedForm) {
  const auto rep = pptgeom::mc_radial(BodySpec::full(3), 50000, RngStream(4), 2);
  const double ratio = rep.area.value / rep.volume.value;
  EXPECT_NEAR(ratio, pptgeom::analytic_area_volume_ratio(3), 1e-9 * ratio);
}

TEST(Radial, VolumeOnlyPathUsesSameDirections) {
  const BodySpec body = BodySpec::ppt(2, 2);
  const auto v = pptgeom::mc_volume(body, 5000, RngStream(5), 3);
  const auto rep = pptgeom::mc_radial(body, 5000, RngStream(5), 3);
  EXPECT_NEAR(v.value, rep.volume.value, 1e-15 * v.value);
  EXPECT_GT(v.std_error, 0.0);
}

TEST(Radial, PptBodyIsSmaller) {
  const auto full = pptgeom::mc_volume(BodySpec::full(4), 20000, RngStream(6));
  const auto ppt = pptgeom::mc_volume(BodySpec::ppt(2, 2), 20000, RngStream(6));
  EXPECT_LT(ppt.value, full.value);
}

TEST(Certificate, ConstantHeightHolds) {
  for (const auto& body : {BodySpec::full(4), BodySpec::ppt(2, 3), BodySpec::ppt(2, 2, Field::real)}) {
    const auto cert = pptgeom::certify_constant_height(body, 2000, RngStream(7), 2);
    EXPECT_LE(cert.max_deviation, 1e-9) << body.to_string();
    EXPECT_EQ(cert.n_samples, 2000);
    EXPECT_LT(cert.non_generic_fraction(), 1e-3);
  }
}

// Literature values: p_V = 8/33 (complex 2x2), 29/64 (real 2x2).
TEST(HitRates, ReferenceSeparableProbabilities) {
  const auto pc = pptgeom::estimate_p_interior(BipartiteShape(2, 2), 40000, RngStream(8));
  EXPECT_TRUE(within(pc, 8.0 / 33.0, kRefK)) << pc.value << " +- " << pc.std_error;
  const auto pr =
      pptgeom::estimate_p_interior(BipartiteShape(2, 2, Field::real), 40000, RngStream(9));
  EXPECT_TRUE(within(pr, 29.0 / 64.0, kRefK)) << pr.value << " +- " << pr.std_error;
}

// Fixed-seed regression anchor. Not ground truth: it pins the exact output of
// the sampler/Philox pipeline so accidental changes to the stream layout show up.
TEST(HitRates, PinnedRegressionAnchor) {
  const auto p = pptgeom::estimate_p_interior(BipartiteShape(2, 2), 20000, RngStream(20260101));
  EXPECT_EQ(std::lround(p.value * 20000), 4916L);
}

TEST(HitRates, TrivialSplitHasNoVariance) {
  const auto p = pptgeom::estimate_p_boundary(BipartiteShape::single(3), 2000, RngStream(10));
  EXPECT_EQ(p.value, 1.0);
  EXPECT_EQ(p.std_error, 0.0);
}

TEST(Omega, EqualsTwo) {
  for (const auto& shape : {BipartiteShape(2, 2), BipartiteShape(2, 2, Field::real)}) {
    const auto rep = pptgeom::estimate_omega(shape, 40000, RngStream(11), 2);
    EXPECT_LE(std::abs(rep.omega - 2.0), kK * rep.omega_std_error)
        << shape.to_string() << " " << pptgeom::to_string(shape.field()) << " omega "
        << rep.omega;
    EXPECT_GT(rep.p_boundary.value, 0.0);
    EXPECT_NE(rep.p_interior.stream_id, rep.p_boundary.stream_id);
  }
}

TEST(Omega, RequiresEnoughSamples) {
  EXPECT_THROW(pptgeom::estimate_omega(BipartiteShape(2, 2), 9999, RngStream(0)),
               pptgeom::DomainError);
  EXPECT_THROW(pptgeom::mc_volume(BodySpec::full(3), 999, RngStream(0)), pptgeom::DomainError);
}

TEST(Determinism, SameSeedAndShardsIsBitIdentical) {
  const BipartiteShape shape(2, 2);
  const auto a = pptgeom::estimate_p_boundary(shape, 4000, RngStream(12), 3);
  const auto b = pptgeom::estimate_p_boundary(shape, 4000, RngStream(12), 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const auto g1 = pptgeom::mc_gamma(BodySpec::ppt(2, 2), 3000, RngStream(13), 4);
  const auto g2 = pptgeom::mc_gamma(BodySpec::ppt(2, 2), 3000, RngStream(13), 4);
  EXPECT_EQ(g1.value, g2.value);
  EXPECT_EQ(g1.std_error, g2.std_error);
}

TEST(Determinism, ShardCountChangesStreamsNotStatistics) {
  const BipartiteShape shape(2, 2);
  const auto one = pptgeom::estimate_p_interior(shape, 20000, RngStream(15), 1);
  const auto four = pptgeom::estimate_p_interior(shape, 20000, RngStream(15), 4);
  EXPECT_NE(one.value, four.value);
  EXPECT_LT(pptgeom::discrepancy_sigma(one, four), 4.0);
  EXPECT_EQ(four.shards, 4);
  EXPECT_EQ(four.n_samples, 20000);
}

TEST(Pathways, HitCountAgreesWithRadialAreaFraction) {
  const BipartiteShape shape(2, 2);
  const auto hits = pptgeom::estimate_p_boundary(shape, 20000, RngStream(15), 2);
  const auto radial = pptgeom::radial_ppt_area_fraction(shape, 20000, RngStream(16), 2);
  EXPECT_LT(pptgeom::discrepancy_sigma(hits, radial), kK)
      << hits.value << " vs " << radial.value;
}

TEST(Pathways, CrossValidatedArea) {
  const auto rep = pptgeom::cross_validate_area(BipartiteShape(2, 2), 20000, RngStream(17), 2);
  EXPECT_LT(rep.discrepancy_sigma, kK);
  const auto trivial = pptgeom::cross_validate_area(BipartiteShape::single(3), 10000, RngStream(18));
  EXPECT_EQ(trivial.p_boundary.value, 1.0);
  EXPECT_NEAR(trivial.area_ppt_from_hits.value, trivial.area_total.value, 0.0);
  EXPECT_LT(trivial.discrepancy_sigma, kK);
}

// Linear small-delta scaling: halving delta halves the fraction.
TEST(CornerProbe, HalvingDeltaHalvesFraction) {
  const std::vector<double> deltas = {1e-2, 5e-3, 1e-3, 5e-4};
  const auto rows = pptgeom::corner_probe(BipartiteShape(2, 2), 100000, deltas, RngStream(19));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].count, rows[i - 1].count);
  EXPECT_NEAR(rows[1].fraction / rows[0].fraction, 0.5, 0.15);
  EXPECT_NEAR(rows[3].fraction / rows[2].fraction, 0.5, 0.15);
  const auto zero = pptgeom::corner_probe(BipartiteShape(2, 2), 2000, {0.0}, RngStream(20));
  EXPECT_EQ(zero[0].count, 0);
}

TEST(CornerProbe, RejectsBadDeltas) {
  EXPECT_THROW(pptgeom::corner_probe(BipartiteShape(2, 2), 2000, {1e-2, 1e-1}, RngStream(0)),
               pptgeom::DomainError);
  EXPECT_THROW(pptgeom::corner_probe(BipartiteShape(2, 2), 2000, {-1.0}, RngStream(0)),
               pptgeom::DomainError);
}

}  // namespace
