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

// Random-walk Metropolis sampler for spectral densities on the probability
// simplex. It shares nothing with the Wishart construction and serves as the
// reference the spectral samplers are validated against.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <Eigen/Dense>

#include "pptgeom/core.hpp"
#include "pptgeom/rng.hpp"

namespace pptgeom {

/// Density prod_{i<j} |l_i - l_j|^beta * prod_i l_i^alpha on {l_i > 0, sum l_i = 1}.
struct SpectralDensity {
  double beta;
  double alpha;

  double log_density(const Eigen::VectorXd& l) const {
    double acc = 0;
    for (Eigen::Index i = 0; i < l.size(); ++i) {
      if (l(i) <= 0) return -std::numeric_limits<double>::infinity();
      acc += alpha * std::log(l(i));
      for (Eigen::Index j = i + 1; j < l.size(); ++j) {
        acc += beta * std::log(std::abs(l(i) - l(j)));
      }
    }
    return acc;
  }
};

/// Nonzero spectrum of an HS-surface boundary state: the HS volume density
/// with the last eigenvalue set to zero.
inline SpectralDensity boundary_spectral_density(Field f) {
  return f == Field::complex ? SpectralDensity{2, 2} : SpectralDensity{1, 1};
}

/// Spectrum of an HS-distributed interior state.
inline SpectralDensity interior_spectral_density(Field f) {
  return f == Field::complex ? SpectralDensity{2, 0} : SpectralDensity{1, 0};
}

class SimplexMetropolis {
 public:
  struct Options {
    double step = 0.15;  // half-width of the pairwise mass transfer
    int thin = 25;       // proposals between returned samples
    int burn_in = 5000;
  };

  SimplexMetropolis(int size, SpectralDensity density, RngStream rng)
      : SimplexMetropolis(size, density, std::move(rng), Options{}) {}

  SimplexMetropolis(int size, SpectralDensity density, RngStream rng, Options options)
      : density_(density), rng_(std::move(rng)), opt_(options),
        state_(Eigen::VectorXd::Constant(size, 1.0 / size)) {
    if (size < 1) throw DomainError("Metropolis sampler needs at least one eigenvalue");
    // spread the start so the Vandermonde factor is finite
    for (int i = 0; i < size; ++i) state_(i) = (i + 1.0);
    state_ /= state_.sum();
    log_p_ = density_.log_density(state_);
    for (int i = 0; i < opt_.burn_in; ++i) step_once();
    accepted_ = proposed_ = 0;
  }

  /// Next sample, sorted descending.
  Eigen::VectorXd next() {
    for (int i = 0; i < opt_.thin; ++i) step_once();
    Eigen::VectorXd out = state_;
    std::sort(out.data(), out.data() + out.size(), std::greater<>());
    return out;
  }

  double acceptance_rate() const {
    return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / proposed_;
  }

 private:
  void step_once() {
    const auto size = static_cast<int>(state_.size());
    if (size == 1) return;
    ++proposed_;
    const int i = static_cast<int>(rng_.uniform() * size);
    int j = static_cast<int>(rng_.uniform() * (size - 1));
    if (j >= i) ++j;
    const double shift = (2.0 * rng_.uniform() - 1.0) * opt_.step;
    Eigen::VectorXd proposal = state_;
    proposal(i) -= shift;
    proposal(j) += shift;
    const double log_q = density_.log_density(proposal);
    if (std::log(rng_.uniform()) < log_q - log_p_) {
      state_ = proposal;
      log_p_ = log_q;
      ++accepted_;
    }
  }

  SpectralDensity density_;
  RngStream rng_;
  Options opt_;
  Eigen::VectorXd state_;
  double log_p_ = 0;
  long accepted_ = 0;
  long proposed_ = 0;
};

}  // namespace pptgeom
