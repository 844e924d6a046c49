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

// Statistical checks of the samplers against closed forms and against the
// Metropolis reference sampler.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pptgeom/core.hpp"
#include "pptgeom/hermitian.hpp"
#include "pptgeom/metropolis.hpp"
#include "pptgeom/random_states.hpp"
#include "pptgeom/rng.hpp"
#include "pptgeom/stats.hpp"

namespace pptgeom {

struct SamplerCheck {
  std::string name;
  double value = 0;  // estimate, or test statistic
  double std_error = 0;
  double target = 0;
  double p_value = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
};

/// Histogram of sorted spectra (descending). Two eigenvalues: 20 bins of
/// lambda_max on [1/2, 1]. More: 10 x 10 grid of (lambda_max, lambda_min).
inline std::vector<double> spectrum_histogram(const std::vector<Eigen::VectorXd>& spectra) {
  if (spectra.empty()) return {};
  const auto k = static_cast<int>(spectra.front().size());
  auto bin = [](double x, double lo, double hi, int bins) {
    const int b = static_cast<int>((x - lo) / (hi - lo) * bins);
    return std::clamp(b, 0, bins - 1);
  };
  if (k == 2) {
    std::vector<double> h(20, 0.0);
    for (const auto& s : spectra) h[static_cast<std::size_t>(bin(s(0), 0.5, 1.0, 20))] += 1;
    return h;
  }
  std::vector<double> h(100, 0.0);
  for (const auto& s : spectra) {
    const int a = bin(s(0), 1.0 / k, 1.0, 10);
    const int b = bin(s(k - 1), 0.0, 1.0 / k, 10);
    h[static_cast<std::size_t>(a * 10 + b)] += 1;
  }
  return h;
}

namespace detail {

template <class Draw>
SamplerCheck compare_with_metropolis(std::string name, int size, SpectralDensity density,
                                     std::int64_t samples, RngStream rng, double alpha,
                                     Draw&& draw) {
  std::vector<Eigen::VectorXd> direct;
  std::vector<Eigen::VectorXd> reference;
  direct.reserve(static_cast<std::size_t>(samples));
  reference.reserve(static_cast<std::size_t>(samples));
  RngStream direct_rng = rng.child(1);
  for (std::int64_t i = 0; i < samples; ++i) direct.push_back(draw(direct_rng));
  SimplexMetropolis chain(size, density, rng.child(2));
  for (std::int64_t i = 0; i < samples; ++i) reference.push_back(chain.next());
  const TestResult t = chi2_two_sample(spectrum_histogram(direct), spectrum_histogram(reference));
  SamplerCheck c;
  c.name = std::move(name);
  c.value = t.statistic;
  c.target = t.dof;
  c.p_value = t.p_value;
  c.pass = t.p_value > alpha;
  return c;
}

}  // namespace detail

/// Nonzero boundary spectrum (Wishart construction) against Metropolis. N >= 3.
template <Scalar S>
SamplerCheck validate_boundary_spectrum(int n, std::int64_t samples, const RngStream& rng,
                                        double alpha = 0.01) {
  if (n < 3) throw DomainError("boundary spectrum check needs N >= 3");
  return detail::compare_with_metropolis(
      "boundary_spectrum_vs_metropolis", n - 1, boundary_spectral_density(field_of<S>), samples,
      rng, alpha, [n](RngStream& r) { return sample_boundary_spectrum<S>(n, r); });
}

/// Interior HS spectrum against Metropolis.
template <Scalar S>
SamplerCheck validate_interior_spectrum(int n, std::int64_t samples, const RngStream& rng,
                                        double alpha = 0.01) {
  return detail::compare_with_metropolis(
      "interior_spectrum_vs_metropolis", n, interior_spectral_density(field_of<S>), samples, rng,
      alpha, [n](RngStream& r) {
        const DensityMatrix<S> rho = sample_state_hs<S>(n, r);
        Eigen::VectorXd v = spectrum<S>(rho, false).values.reverse();
        return v;
      });
}

/// P(Tr rho^2 > 3/4) for N = 2. The HS-uniform Bloch ball (complex, D = 3)
/// gives 1 - 2^{-3/2}; the Bloch disc (real, D = 2) gives 1/2.
inline double purity_tail_target(Field f) {
  return f == Field::complex ? 1.0 - std::pow(2.0, -1.5) : 0.5;
}

template <Scalar S>
SamplerCheck validate_purity_tail(std::int64_t samples, const RngStream& rng, double k = 4) {
  RngStream r = rng;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const DensityMatrix<S> rho = sample_state_hs<S>(2, r);
    if (hs_inner<S>(rho, rho) > 0.75) ++hits;
  }
  SamplerCheck c;
  c.name = "purity_tail_n2";
  c.value = static_cast<double>(hits) / static_cast<double>(samples);
  c.std_error = std::sqrt(c.value * (1 - c.value) / static_cast<double>(samples));
  c.target = purity_tail_target(field_of<S>);
  c.pass = std::abs(c.value - c.target) <= k * c.std_error;
  return c;
}

/// N = 2 boundary states are pure with Bloch vectors uniform on the sphere
/// (complex) or circle (real): each component has mean 0 and mean square
/// 1/3 (resp. 1/2).
template <Scalar S>
std::vector<SamplerCheck> validate_bloch_uniformity(std::int64_t samples, const RngStream& rng,
                                                    double k = 4) {
  constexpr bool is_complex = field_of<S> == Field::complex;
  const int comps = is_complex ? 3 : 2;
  std::vector<Moments> first(static_cast<std::size_t>(comps));
  std::vector<Moments> second(static_cast<std::size_t>(comps));
  RngStream r = rng;
  for (std::int64_t i = 0; i < samples; ++i) {
    const auto b = sample_boundary_state_hs<S>(2, r);
    const auto& m = b.state.matrix();
    std::vector<double> v;
    v.push_back(2 * std::real(m(0, 1)));
    if constexpr (is_complex) v.push_back(-2 * std::imag(m(0, 1)));
    v.push_back(std::real(m(0, 0) - m(1, 1)));
    for (int j = 0; j < comps; ++j) {
      first[static_cast<std::size_t>(j)].add(v[static_cast<std::size_t>(j)]);
      second[static_cast<std::size_t>(j)].add(v[static_cast<std::size_t>(j)] *
                                              v[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<SamplerCheck> out;
  const char* axes[] = {"x", is_complex ? "y" : "z", "z"};
  for (int j = 0; j < comps; ++j) {
    const auto& f = first[static_cast<std::size_t>(j)];
    const auto& s = second[static_cast<std::size_t>(j)];
    SamplerCheck mean{std::string("bloch_mean_") + axes[j], f.mean(), f.std_error(), 0.0};
    mean.pass = std::abs(mean.value) <= k * mean.std_error;
    SamplerCheck sq{std::string("bloch_mean_square_") + axes[j], s.mean(), s.std_error(),
                    1.0 / comps};
    sq.pass = std::abs(sq.value - sq.target) <= k * sq.std_error;
    out.push_back(mean);
    out.push_back(sq);
  }
  return out;
}

/// E|U_00|^2 = 1/N for Haar U.
template <Scalar S>
SamplerCheck validate_haar_column(int n, std::int64_t samples, const RngStream& rng,
                                  double k = 4) {
  RngStream r = rng;
  Moments m;
  for (std::int64_t i = 0; i < samples; ++i) {
    const Matrix<S> u = sample_haar_unitary<S>(n, r);
    m.add(std::norm(u(0, 0)));
  }
  SamplerCheck c{"haar_first_entry_mean_square", m.mean(), m.std_error(), 1.0 / n};
  c.pass = std::abs(c.value - c.target) <= k * c.std_error;
  return c;
}

/// Every applicable check for dimension n.
inline std::vector<SamplerCheck> validate_samplers(int n, Field field, std::int64_t samples,
                                                   const RngStream& rng, double alpha = 0.01,
                                                   double k = 4) {
  return visit_field(field, [&](auto tag) {
    using S = typename decltype(tag)::type;
    std::vector<SamplerCheck> out;
    out.push_back(validate_haar_column<S>(n, samples, rng.child(1), k));
    out.push_back(validate_interior_spectrum<S>(n, samples, rng.child(2), alpha));
    if (n >= 3) out.push_back(validate_boundary_spectrum<S>(n, samples, rng.child(3), alpha));
    if (n == 2) {
      out.push_back(validate_purity_tail<S>(samples, rng.child(4), k));
      for (auto& c : validate_bloch_uniformity<S>(samples, rng.child(5), k)) out.push_back(c);
    }
    return out;
  });
}

}  // namespace pptgeom
