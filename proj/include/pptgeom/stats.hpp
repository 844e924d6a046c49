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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "pptgeom/core.hpp"

namespace pptgeom {

/// Compensated (Kahan-Babuska) sum.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

/// Running mean and second central moment (Welford), mergeable (Chan et al.).
class Moments {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const Moments& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double delta = o.mean_ - mean_;
    mean_ += delta * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

/// Paired moments of (a, b) for ratio estimators E[a]/E[b].
class PairedMoments {
 public:
  void add(double a, double b) {
    ++n_;
    const double da = a - mean_a_;
    const double db = b - mean_b_;
    mean_a_ += da / static_cast<double>(n_);
    mean_b_ += db / static_cast<double>(n_);
    m2a_ += da * (a - mean_a_);
    m2b_ += db * (b - mean_b_);
    cab_ += da * (b - mean_b_);
  }

  void merge(const PairedMoments& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n1 = static_cast<double>(n_);
    const double n2 = static_cast<double>(o.n_);
    const double n = n1 + n2;
    const double da = o.mean_a_ - mean_a_;
    const double db = o.mean_b_ - mean_b_;
    mean_a_ += da * n2 / n;
    mean_b_ += db * n2 / n;
    m2a_ += o.m2a_ + da * da * n1 * n2 / n;
    m2b_ += o.m2b_ + db * db * n1 * n2 / n;
    cab_ += o.cab_ + da * db * n1 * n2 / n;
    n_ += o.n_;
  }

  std::int64_t count() const { return n_; }
  double mean_a() const { return mean_a_; }
  double mean_b() const { return mean_b_; }
  double var_a() const { return n_ > 1 ? m2a_ / static_cast<double>(n_ - 1) : 0.0; }
  double var_b() const { return n_ > 1 ? m2b_ / static_cast<double>(n_ - 1) : 0.0; }
  double cov_ab() const { return n_ > 1 ? cab_ / static_cast<double>(n_ - 1) : 0.0; }

  double ratio() const { return mean_a_ / mean_b_; }

  /// Delta-method standard error of mean_a / mean_b.
  double ratio_std_error() const {
    if (n_ < 2) return 0.0;
    const double r = ratio();
    const double var = var_a() - 2 * r * cov_ab() + r * r * var_b();
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n_)) / std::abs(mean_b_);
  }

 private:
  std::int64_t n_ = 0;
  double mean_a_ = 0;
  double mean_b_ = 0;
  double m2a_ = 0;
  double m2b_ = 0;
  double cab_ = 0;
};

/// Area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
inline double unit_sphere_area(int d) {
  if (d < 1) throw DomainError("sphere area needs d >= 1");
  return 2.0 * std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d));
}

struct TestResult {
  double statistic;
  double dof;  // chi-square only
  double p_value;
};

/// Two-sample chi-square homogeneity test on binned counts. Bins empty in both
/// samples are dropped from the statistic and the degrees of freedom.
inline TestResult chi2_two_sample(const std::vector<double>& r, const std::vector<double>& s) {
  if (r.size() != s.size()) throw DimensionError("chi2 test: histograms differ in bin count");
  double rt = 0;
  double st = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    rt += r[i];
    st += s[i];
  }
  if (!(rt > 0) || !(st > 0)) throw DomainError("chi2 test: empty histogram");
  const double kr = std::sqrt(st / rt);
  const double ks = std::sqrt(rt / st);
  double chi2 = 0;
  int bins = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double total = r[i] + s[i];
    if (total <= 0) continue;
    const double d = kr * r[i] - ks * s[i];
    chi2 += d * d / total;
    ++bins;
  }
  const double dof = bins - 1;
  if (dof < 1) return {chi2, dof, 1.0};
  const boost::math::chi_squared dist(dof);
  return {chi2, dof, boost::math::cdf(boost::math::complement(dist, chi2))};
}

/// Kolmogorov distribution tail Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
inline double kolmogorov_tail(double x) {
  if (x < 0.2) return 1.0;
  double sum = 0;
  double sign = 1;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Two-sample Kolmogorov-Smirnov test with the Stephens small-sample correction.
inline TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, 0, kolmogorov_tail((en + 0.12 + 0.11 / en) * d)};
}

/// Sample of a Monte Carlo estimator.
struct Estimate {
  double value = 0;
  double std_error = 0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  int shards = 1;
  std::string estimator_id;
  std::int64_t skipped = 0;  // non-generic samples left out
  std::vector<std::string> warnings;

  /// Deviation from `target` in units of the standard error. A zero-variance
  /// estimate that matches the target to `abs_floor` reports 0.
  double sigma_deviation(double target, double abs_floor = 0) const {
    const double diff = std::abs(value - target);
    if (diff <= abs_floor) return 0.0;
    return std_error > 0 ? diff / std_error : std::numeric_limits<double>::infinity();
  }

  /// |value - target| <= k * std_error + abs_floor.
  bool within(double target, double k, double abs_floor = 0) const {
    return std::abs(value - target) <= k * std_error + abs_floor;
  }
};

/// Combined-standard-error distance between two independent estimates.
inline double discrepancy_sigma(const Estimate& a, const Estimate& b) {
  const double se = std::hypot(a.std_error, b.std_error);
  const double diff = std::abs(a.value - b.value);
  if (diff == 0) return 0.0;
  return se > 0 ? diff / se : std::numeric_limits<double>::infinity();
}

}  // namespace pptgeom
