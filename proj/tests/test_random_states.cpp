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
#include <vector>

#include <gtest/gtest.h>

#include "pptgeom/metropolis.hpp"
#include "pptgeom/random_states.hpp"
#include "pptgeom/stats.hpp"
#include "pptgeom/validation.hpp"

namespace {

using pptgeom::complex_t;
using pptgeom::Field;
using pptgeom::Matrix;
using pptgeom::Moments;
using pptgeom::RngStream;

constexpr double kBand = 4.0;  // stderr band for moment checks

template <class S>
class Samplers : public ::testing::Test {};
using Scalars = ::testing::Types<complex_t, double>;
TYPED_TEST_SUITE(Samplers, Scalars);

TYPED_TEST(Samplers, HsStatesAreStates) {
  using S = TypeParam;
  RngStream rng(1);
  for (int n : {2, 3, 4, 6}) {
    for (int t = 0; t < 50; ++t) {
      const auto rho = pptgeom::sample_state_hs<S>(n, rng);
      EXPECT_NEAR(rho.trace(), 1.0, 1e-13);
      EXPECT_GT(pptgeom::min_eigenvalue<S>(rho), -1e-14);
      EXPECT_LT((rho.matrix() - rho.matrix().adjoint()).norm(), 1e-15);
    }
  }
}

TYPED_TEST(Samplers, HaarIsUnitaryWithUniformColumnWeight) {
  using S = TypeParam;
  RngStream rng(2);
  for (int t = 0; t < 20; ++t) {
    const Matrix<S> u = pptgeom::sample_haar_unitary<S>(5, rng);
    EXPECT_LT((u.adjoint() * u - Matrix<S>::Identity(5, 5)).norm(), 1e-13);
  }
  EXPECT_TRUE((pptgeom::validate_haar_column<S>(4, 20000, RngStream(3), kBand).pass));
}

TYPED_TEST(Samplers, BoundaryStatesHaveKernelVector) {
  using S = TypeParam;
  RngStream rng(4);
  for (int n : {2, 3, 4, 6}) {
    for (int t = 0; t < 30; ++t) {
      const auto b = pptgeom::sample_boundary_state_hs<S>(n, rng);
      EXPECT_NEAR(b.state.trace(), 1.0, 1e-13);
      EXPECT_LT((b.state.matrix() * b.zero_eigvec).norm(), 1e-13);
      EXPECT_NEAR(b.eigenvalues(n - 1), 0.0, 0.0);
      const auto values = pptgeom::spectrum<S>(b.state, false).values;
      EXPECT_GT(values(1), 1e-12) << "rank must be exactly N - 1";
    }
  }
}

TYPED_TEST(Samplers, DirectionExpansionMatchesBasis) {
  using S = TypeParam;
  for (int n : {2, 3, 4}) {
    const pptgeom::DirectionSampler<S> sampler(n);
    const auto basis = pptgeom::gell_mann_basis<S>(n);
    ASSERT_EQ(static_cast<int>(basis.size()), sampler.dim());
    for (int i = 0; i < sampler.dim(); ++i) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(sampler.dim());
      c(i) = 1;
      EXPECT_LT((sampler.expand(c) - basis[static_cast<std::size_t>(i)].matrix()).norm(), 1e-15);
    }
  }
}

// For any fixed unit traceless A, <w, A>^2 has mean 1/D under the uniform
// direction law.
TYPED_TEST(Samplers, DirectionsAreIsotropic) {
  using S = TypeParam;
  const int n = 3;
  const pptgeom::DirectionSampler<S> sampler(n);
  Matrix<S> a = Matrix<S>::Zero(n, n);
  a(0, 0) = 1;
  a(1, 2) = 2;
  a(2, 1) = 2;
  const auto fixed = pptgeom::TracelessDirection<S>::normalize(pptgeom::HermitianMatrix<S>(a));
  RngStream rng(5);
  Moments m, lin;
  for (int i = 0; i < 40000; ++i) {
    const auto w = sampler(rng);
    ASSERT_NEAR(w.trace(), 0.0, 1e-14);
    ASSERT_NEAR(pptgeom::hs_norm<S>(w), 1.0, 1e-14);
    const double x = pptgeom::hs_inner<S>(w, fixed);
    lin.add(x);
    m.add(x * x);
  }
  EXPECT_NEAR(lin.mean(), 0.0, kBand * lin.std_error());
  EXPECT_NEAR(m.mean(), 1.0 / sampler.dim(), kBand * m.std_error());
}

// Spectral gap x = l_max - l_min closed forms on the two-point simplex:
//   interior N = 2: density x^beta        => E x = (beta+1)/(beta+2)
//   boundary N = 3: density x^beta (1-x^2)^beta => 35/64 (beta=2), 8/15 (beta=1)
double interior_gap_mean(Field f) { return f == Field::complex ? 3.0 / 4.0 : 2.0 / 3.0; }
double boundary_gap_mean(Field f) { return f == Field::complex ? 35.0 / 64.0 : 8.0 / 15.0; }

TYPED_TEST(Samplers, InteriorGapMatchesClosedForm) {
  using S = TypeParam;
  constexpr Field f = pptgeom::field_of<S>;
  RngStream rng(6);
  Moments m;
  for (int i = 0; i < 40000; ++i) {
    const auto v = pptgeom::spectrum<S>(pptgeom::sample_state_hs<S>(2, rng), false).values;
    m.add(v(1) - v(0));
  }
  EXPECT_NEAR(m.mean(), interior_gap_mean(f), kBand * m.std_error());
}

TYPED_TEST(Samplers, BoundaryGapMatchesClosedForm) {
  using S = TypeParam;
  constexpr Field f = pptgeom::field_of<S>;
  RngStream rng(7);
  Moments m;
  for (int i = 0; i < 40000; ++i) {
    const auto v = pptgeom::sample_boundary_spectrum<S>(3, rng);
    ASSERT_NEAR(v.sum(), 1.0, 1e-14);
    ASSERT_GE(v(0), v(1));
    m.add(v(0) - v(1));
  }
  EXPECT_NEAR(m.mean(), boundary_gap_mean(f), kBand * m.std_error());
}

// The Metropolis reference must itself reproduce the closed forms before it
// can be trusted as an oracle for larger N.
TEST(Metropolis, ReproducesClosedForms) {
  for (Field f : {Field::complex, Field::real}) {
    pptgeom::SimplexMetropolis interior(2, pptgeom::interior_spectral_density(f), RngStream(8));
    pptgeom::SimplexMetropolis boundary(2, pptgeom::boundary_spectral_density(f), RngStream(9));
    Moments mi, mb;
    for (int i = 0; i < 40000; ++i) {
      const auto a = interior.next();
      const auto b = boundary.next();
      ASSERT_GE(a(0), a(1));
      mi.add(a(0) - a(1));
      mb.add(b(0) - b(1));
    }
    // successive draws are correlated; widen the band accordingly
    EXPECT_NEAR(mi.mean(), interior_gap_mean(f), 3 * kBand * mi.std_error());
    EXPECT_NEAR(mb.mean(), boundary_gap_mean(f), 3 * kBand * mb.std_error());
    EXPECT_GT(interior.acceptance_rate(), 0.2);
    EXPECT_LT(interior.acceptance_rate(), 0.95);
  }
}

TEST(Metropolis, LogDensityOutsideSimplexIsMinusInfinity) {
  const pptgeom::SpectralDensity d{2, 2};
  Eigen::VectorXd v(3);
  v << 0.5, 0.6, -0.1;
  EXPECT_TRUE(std::isinf(d.log_density(v)));
  v << 0.5, 0.3, 0.2;
  EXPECT_TRUE(std::isfinite(d.log_density(v)));
}

TEST(SamplerValidation, WishartAgreesWithMetropolisN3N4) {
  for (Field f : {Field::complex, Field::real}) {
    for (int n : {3, 4}) {
      const auto check = pptgeom::visit_field(f, [&](auto tag) {
        using S = typename decltype(tag)::type;
        return pptgeom::validate_boundary_spectrum<S>(n, 20000, RngStream(10 + n));
      });
      EXPECT_TRUE(check.pass) << pptgeom::to_string(f) << " N=" << n << " p=" << check.p_value;
    }
  }
}

TEST(SamplerValidation, N2PurityTailAndBloch) {
  for (Field f : {Field::complex, Field::real}) {
    const auto checks = pptgeom::validate_samplers(2, f, 40000, RngStream(20));
    for (const auto& c : checks) {
      EXPECT_TRUE(c.pass) << pptgeom::to_string(f) << " " << c.name << " value " << c.value
                          << " target " << c.target;
    }
  }
  EXPECT_NEAR(pptgeom::purity_tail_target(Field::complex), 1 - std::pow(2.0, -1.5), 0);
}

// A wrong exponent must be caught: the interior (alpha = 0) law is not the
// boundary law, so comparing one against the other fails.
TEST(SamplerValidation, DetectsWrongDensity) {
  std::vector<Eigen::VectorXd> direct, reference;
  RngStream rng(30);
  pptgeom::SimplexMetropolis chain(3, pptgeom::interior_spectral_density(Field::complex),
                                   RngStream(31));
  for (int i = 0; i < 20000; ++i) {
    direct.push_back(pptgeom::sample_boundary_spectrum<complex_t>(4, rng));
    reference.push_back(chain.next());
  }
  const auto t = pptgeom::chi2_two_sample(pptgeom::spectrum_histogram(direct),
                                          pptgeom::spectrum_histogram(reference));
  EXPECT_LT(t.p_value, 1e-6);
}

TEST(Samplers, RejectTinyDimensions) {
  RngStream rng(0);
  EXPECT_THROW(pptgeom::sample_state_hs<double>(1, rng), pptgeom::DomainError);
  EXPECT_THROW(pptgeom::sample_boundary_spectrum<double>(1, rng), pptgeom::DomainError);
  EXPECT_THROW(pptgeom::DirectionSampler<double>(1), pptgeom::DomainError);
  EXPECT_THROW(pptgeom::sample_direction<double>(pptgeom::BipartiteShape(2, 2), rng),
               pptgeom::DomainError);
}

}  // namespace
