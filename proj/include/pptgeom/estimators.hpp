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

// Monte Carlo estimators for volumes, areas, gamma = r A / V, the interior and
// boundary PPT probabilities and their ratio Omega.
//
// Radial integrals over a body X with the insphere of radius s at the origin:
//
//   V = (1/D) int_{S^{D-1}} r(w)^D dw,   A = int_{S^{D-1}} r(w)^{D-1} / <w, n(w)> dw.
//
// Integrands are accumulated scaled by s^D, i.e. as (r/s)^D and
// (r/s)^{D-1} / (s <w, n>). Both are >= 1-ish and bounded by (N-1)^D, so the
// scaled sums neither underflow nor overflow for D up to a few hundred.
//
// Every estimator splits its n samples over `shards` independent streams
// base.child(shard), runs the shards on separate threads and merges them in
// shard order; results depend only on (n, seed, stream, shards).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "pptgeom/body_geometry.hpp"
#include "pptgeom/core.hpp"
#include "pptgeom/hermitian.hpp"
#include "pptgeom/random_states.hpp"
#include "pptgeom/rng.hpp"
#include "pptgeom/stats.hpp"

namespace pptgeom {

inline constexpr std::int64_t kMinSamples = 1000;
inline constexpr std::int64_t kMinOmegaSamples = 10000;
/// Fraction of skipped non-generic directions above which a warning is attached.
inline constexpr double kMaxSkippedFraction = 1e-3;

namespace detail {

inline void require_samples(std::int64_t n, std::int64_t minimum, const char* what) {
  if (n < minimum) {
    throw DomainError(std::string(what) + " needs at least " + std::to_string(minimum) +
                      " samples, got " + std::to_string(n));
  }
}

template <class Acc, class Fn>
Acc run_sharded(std::int64_t n, const RngStream& base, int shards, Fn&& fn) {
  if (shards < 1) throw DomainError("shard count must be >= 1");
  std::vector<Acc> parts(static_cast<std::size_t>(shards));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
  auto work = [&](int s) {
    try {
      const std::int64_t count = n / shards + (s < n % shards ? 1 : 0);
      RngStream rng = base.child(static_cast<std::uint64_t>(s));
      parts[static_cast<std::size_t>(s)] = fn(count, rng);
    } catch (...) {
      errors[static_cast<std::size_t>(s)] = std::current_exception();
    }
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(shards));
    for (int s = 0; s < shards; ++s) threads.emplace_back(work, s);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

inline Estimate make_estimate(std::string id, const RngStream& rng, int shards) {
  Estimate e;
  e.estimator_id = std::move(id);
  e.seed = rng.seed();
  e.stream_id = rng.stream_id();
  e.shards = shards;
  return e;
}

struct RadialAccumulator {
  Moments volume;             // (r/s)^D over all directions
  PairedMoments area_volume;  // ((r/s)^{D-1} / (s <w,n>), (r/s)^D) over generic directions
  std::int64_t skipped = 0;

  void merge(const RadialAccumulator& o) {
    volume.merge(o.volume);
    area_volume.merge(o.area_volume);
    skipped += o.skipped;
  }
};

template <Scalar S>
RadialAccumulator radial_shard(const BodySpec& body, std::int64_t count, RngStream& rng,
                               bool with_area) {
  const DirectionSampler<S> directions(body.n());
  const int d = body.dim();
  const double s = inscribed_radius(body.n());
  RadialAccumulator acc;
  for (std::int64_t i = 0; i < count; ++i) {
    const TracelessDirection<S> w = directions(rng);
    if (!with_area) {
      const double r = radial_function(body, w);
      acc.volume.add(std::exp(d * std::log(r / s)));
      continue;
    }
    const BoundaryContact<S> c = boundary_contact(body, w);
    const double log_ratio = std::log(c.radius / s);
    const double vol = std::exp(d * log_ratio);
    acc.volume.add(vol);
    if (!c.generic()) {
      ++acc.skipped;
      continue;
    }
    const double cos_wn = hs_inner<S>(w, c.normal);
    acc.area_volume.add(std::exp((d - 1) * log_ratio) / (s * cos_wn), vol);
  }
  return acc;
}

inline RadialAccumulator radial_samples(const BodySpec& body, std::int64_t n,
                                        const RngStream& rng, int shards, bool with_area) {
  return visit_field(body.field(), [&](auto tag) {
    using S = typename decltype(tag)::type;
    return run_sharded<RadialAccumulator>(n, rng, shards,
                                          [&](std::int64_t count, RngStream& shard_rng) {
                                            return radial_shard<S>(body, count, shard_rng,
                                                                   with_area);
                                          });
  });
}

inline void attach_skip_warning(Estimate& e) {
  if (e.n_samples > 0 &&
      static_cast<double>(e.skipped) / static_cast<double>(e.n_samples) > kMaxSkippedFraction) {
    e.warnings.push_back("non-generic fraction " +
                         std::to_string(static_cast<double>(e.skipped) / e.n_samples) +
                         " exceeds " + std::to_string(kMaxSkippedFraction));
  }
}

struct HitCounter {
  std::int64_t n = 0;
  std::int64_t hits = 0;
  void merge(const HitCounter& o) {
    n += o.n;
    hits += o.hits;
  }
};

inline Estimate binomial_estimate(const HitCounter& c, Estimate e) {
  e.n_samples = c.n;
  const double p = static_cast<double>(c.hits) / static_cast<double>(c.n);
  e.value = p;
  e.std_error = std::sqrt(p * (1 - p) / static_cast<double>(c.n));
  return e;
}

}  // namespace detail

/// Volume, area and gamma of a body from one set of radial samples.
struct RadialReport {
  Estimate volume;
  Estimate area;
  Estimate gamma;
};

inline RadialReport mc_radial(const BodySpec& body, std::int64_t n, const RngStream& rng,
                              int shards = 1) {
  detail::require_samples(n, kMinSamples, "radial estimator");
  const auto acc = detail::radial_samples(body, n, rng, shards, true);
  const int d = body.dim();
  const double s = inscribed_radius(body.n());
  const double sphere = unit_sphere_area(d);
  const double scale = std::pow(s, d);

  RadialReport out;
  out.volume = detail::make_estimate("mc_volume", rng, shards);
  out.volume.n_samples = acc.volume.count();
  out.volume.value = sphere / d * scale * acc.volume.mean();
  out.volume.std_error = sphere / d * scale * acc.volume.std_error();

  out.area = detail::make_estimate("mc_area", rng, shards);
  out.area.n_samples = n;
  out.area.skipped = acc.skipped;
  out.area.value = sphere * scale * acc.area_volume.mean_a();
  const auto generic = static_cast<double>(acc.area_volume.count());
  out.area.std_error =
      generic > 1 ? sphere * scale * std::sqrt(acc.area_volume.var_a() / generic) : 0.0;
  detail::attach_skip_warning(out.area);

  out.gamma = detail::make_estimate("mc_gamma", rng, shards);
  out.gamma.n_samples = n;
  out.gamma.skipped = acc.skipped;
  out.gamma.value = s * d * acc.area_volume.ratio();
  out.gamma.std_error = s * d * acc.area_volume.ratio_std_error();
  out.gamma.warnings = out.area.warnings;
  return out;
}

/// V = (S_{D-1} / D) E[r^D].
inline Estimate mc_volume(const BodySpec& body, std::int64_t n, const RngStream& rng,
                          int shards = 1) {
  detail::require_samples(n, kMinSamples, "mc_volume");
  const auto acc = detail::radial_samples(body, n, rng, shards, false);
  const int d = body.dim();
  const double factor = unit_sphere_area(d) / d * std::pow(inscribed_radius(body.n()), d);
  Estimate e = detail::make_estimate("mc_volume", rng, shards);
  e.n_samples = acc.volume.count();
  e.value = factor * acc.volume.mean();
  e.std_error = factor * acc.volume.std_error();
  return e;
}

/// A = S_{D-1} E[r^{D-1} / <w, n(w)>], non-generic directions skipped.
inline Estimate mc_area(const BodySpec& body, std::int64_t n, const RngStream& rng,
                        int shards = 1) {
  return mc_radial(body, n, rng, shards).area;
}

/// gamma = r_in * A / V as a ratio estimator on shared directions.
inline Estimate mc_gamma(const BodySpec& body, std::int64_t n, const RngStream& rng,
                         int shards = 1) {
  return mc_radial(body, n, rng, shards).gamma;
}

struct HeightCertificate {
  double inscribed_radius = 0;
  double max_deviation = 0;  // max |support_height - inscribed_radius|
  std::int64_t n_samples = 0;
  std::int64_t non_generic = 0;

  double non_generic_fraction() const {
    return n_samples > 0 ? static_cast<double>(non_generic) / static_cast<double>(n_samples) : 0;
  }
};

/// Support heights over n random directions compared with the insphere radius.
inline HeightCertificate certify_constant_height(const BodySpec& body, std::int64_t n,
                                                 const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinSamples, "certify_constant_height");
  const double radius = inscribed_radius(body.n());
  struct Acc {
    double max_dev = 0;
    std::int64_t n = 0;
    std::int64_t non_generic = 0;
    void merge(const Acc& o) {
      max_dev = std::max(max_dev, o.max_dev);
      n += o.n;
      non_generic += o.non_generic;
    }
  };
  const auto acc = visit_field(body.field(), [&](auto tag) {
    using S = typename decltype(tag)::type;
    return detail::run_sharded<Acc>(n, rng, shards, [&](std::int64_t count, RngStream& r) {
      const DirectionSampler<S> directions(body.n());
      Acc a;
      for (std::int64_t i = 0; i < count; ++i) {
        ++a.n;
        const auto h = support_height(body, directions(r));
        if (!h) {
          ++a.non_generic;
          continue;
        }
        a.max_dev = std::max(a.max_dev, std::abs(*h - radius));
      }
      return a;
    });
  });
  return HeightCertificate{radius, acc.max_dev, acc.n, acc.non_generic};
}

/// Fraction of HS-random states that are PPT.
inline Estimate estimate_p_interior(const BipartiteShape& shape, std::int64_t n,
                                    const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinSamples, "estimate_p_interior");
  const auto counts = visit_field(shape.field(), [&](auto tag) {
    using S = typename decltype(tag)::type;
    return detail::run_sharded<detail::HitCounter>(
        n, rng, shards, [&](std::int64_t count, RngStream& r) {
          detail::HitCounter c;
          for (std::int64_t i = 0; i < count; ++i) {
            const DensityMatrix<S> rho = sample_state_hs<S>(shape.n(), r);
            ++c.n;
            if (is_ppt(rho, shape)) ++c.hits;
          }
          return c;
        });
  });
  return detail::binomial_estimate(counts,
                                   detail::make_estimate("estimate_p_interior", rng, shards));
}

/// Fraction of HS-surface-random boundary states that are PPT, i.e. A_P / A_tot.
inline Estimate estimate_p_boundary(const BipartiteShape& shape, std::int64_t n,
                                    const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinSamples, "estimate_p_boundary");
  const auto counts = visit_field(shape.field(), [&](auto tag) {
    using S = typename decltype(tag)::type;
    return detail::run_sharded<detail::HitCounter>(
        n, rng, shards, [&](std::int64_t count, RngStream& r) {
          detail::HitCounter c;
          for (std::int64_t i = 0; i < count; ++i) {
            const BoundaryState<S> b = sample_boundary_state_hs<S>(shape.n(), r);
            ++c.n;
            if (is_ppt(b.state, shape)) ++c.hits;
          }
          return c;
        });
  });
  return detail::binomial_estimate(counts,
                                   detail::make_estimate("estimate_p_boundary", rng, shards));
}

struct OmegaReport {
  Estimate p_interior;
  Estimate p_boundary;
  double omega = 0;
  double omega_std_error = 0;
  BipartiteShape shape;
};

/// Omega = p_V / p_A, each side from its own stream; first-order error propagation.
inline OmegaReport estimate_omega(const BipartiteShape& shape, std::int64_t n,
                                  const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinOmegaSamples, "estimate_omega");
  const Estimate pv = estimate_p_interior(shape, n, rng.child(1), shards);
  const Estimate pa = estimate_p_boundary(shape, n, rng.child(2), shards);
  if (pa.value <= 0) {
    throw NumericalError("insufficient samples: no PPT boundary state among " +
                         std::to_string(pa.n_samples) + " draws");
  }
  const double omega = pv.value / pa.value;
  double rel2 = (pa.std_error / pa.value) * (pa.std_error / pa.value);
  if (pv.value > 0) rel2 += (pv.std_error / pv.value) * (pv.std_error / pv.value);
  return OmegaReport{pv, pa, omega, omega * std::sqrt(rel2), shape};
}

struct CornerRow {
  double delta;
  double fraction;
  double std_error;
  std::int64_t count;
};

/// For HS boundary states, the fraction with |lambda_min(T_A rho)| < delta.
inline std::vector<CornerRow> corner_probe(const BipartiteShape& shape, std::int64_t n,
                                           const std::vector<double>& deltas,
                                           const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinSamples, "corner_probe");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0)) throw DomainError("corner_probe: deltas must be non-negative");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) {
      throw DomainError("corner_probe: deltas must be strictly decreasing");
    }
  }
  struct Counts {
    std::int64_t n = 0;
    std::vector<std::int64_t> below;
    void merge(const Counts& o) {
      n += o.n;
      if (below.empty()) below.assign(o.below.size(), 0);
      for (std::size_t i = 0; i < o.below.size(); ++i) below[i] += o.below[i];
    }
  };
  const auto counts = visit_field(shape.field(), [&](auto tag) {
    using S = typename decltype(tag)::type;
    return detail::run_sharded<Counts>(n, rng, shards, [&](std::int64_t count, RngStream& r) {
      Counts c;
      c.below.assign(deltas.size(), 0);
      for (std::int64_t i = 0; i < count; ++i) {
        const BoundaryState<S> b = sample_boundary_state_hs<S>(shape.n(), r);
        const double lmin = std::abs(min_eigenvalue(partial_transpose<S>(b.state, shape)));
        ++c.n;
        for (std::size_t k = 0; k < deltas.size(); ++k) {
          if (lmin < deltas[k]) ++c.below[k];
        }
      }
      return c;
    });
  });
  std::vector<CornerRow> rows;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const double p = static_cast<double>(counts.below[k]) / static_cast<double>(counts.n);
    rows.push_back({deltas[k], p, std::sqrt(p * (1 - p) / static_cast<double>(counts.n)),
                    counts.below[k]});
  }
  return rows;
}

/// A_P / A_tot as an area-weighted radial integral: the share of the full
/// body's surface integrand carried by directions whose contact point is PPT.
inline Estimate radial_ppt_area_fraction(const BipartiteShape& shape, std::int64_t n,
                                         const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinSamples, "radial_ppt_area_fraction");
  const BodySpec full(BodyKind::full_state, shape);
  struct Acc {
    PairedMoments weighted;
    std::int64_t skipped = 0;
    void merge(const Acc& o) {
      weighted.merge(o.weighted);
      skipped += o.skipped;
    }
  };
  const auto acc = visit_field(shape.field(), [&](auto tag) {
    using S = typename decltype(tag)::type;
    return detail::run_sharded<Acc>(n, rng, shards, [&](std::int64_t count, RngStream& r) {
      const DirectionSampler<S> directions(shape.n());
      const int d = shape.dim();
      const double s = inscribed_radius(shape.n());
      Acc a;
      for (std::int64_t i = 0; i < count; ++i) {
        const TracelessDirection<S> w = directions(r);
        const BoundaryContact<S> c = boundary_contact(full, w);
        if (!c.generic()) {
          ++a.skipped;
          continue;
        }
        const double weight =
            std::exp((d - 1) * std::log(c.radius / s)) / (s * hs_inner<S>(w, c.normal));
        const bool ppt = is_ppt(c.point, shape);
        a.weighted.add(ppt ? weight : 0.0, weight);
      }
      return a;
    });
  });
  Estimate e = detail::make_estimate("radial_ppt_area_fraction", rng, shards);
  e.n_samples = n;
  e.skipped = acc.skipped;
  e.value = acc.weighted.ratio();
  e.std_error = acc.weighted.ratio_std_error();
  detail::attach_skip_warning(e);
  return e;
}

struct AreaCrossCheck {
  Estimate area_ppt_radial;    // mc_area on the PPT body
  Estimate p_boundary;         // A_P / A_tot by hit counting
  Estimate area_total;         // A_tot
  Estimate area_ppt_from_hits; // 2 p_A A_tot (p_A A_tot when K = 1)
  double discrepancy_sigma = 0;
};

/// A_PPT computed from the PPT body's own radial integral and from the
/// boundary hit rate of the full body.
inline AreaCrossCheck cross_validate_area(const BipartiteShape& shape, std::int64_t n,
                                          const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinOmegaSamples, "cross_validate_area");
  // With K = 1, T_A is the identity: the PPT body is the full body and both
  // boundary copies coincide, so A_PPT = A_P rather than 2 A_P.
  const bool trivial = shape.k() == 1;
  const BodySpec ppt_body(trivial ? BodyKind::full_state : BodyKind::ppt, shape);
  const BodySpec full_body(BodyKind::full_state, shape);

  AreaCrossCheck out;
  out.area_ppt_radial = mc_area(ppt_body, n, rng.child(1), shards);
  out.p_boundary = estimate_p_boundary(shape, n, rng.child(2), shards);
  if (shape.field() == Field::complex) {
    const Estimate v = mc_volume(full_body, n, rng.child(3), shards);
    const double ratio = analytic_area_volume_ratio(shape.n());
    out.area_total = v;
    out.area_total.estimator_id = "analytic_ratio*mc_volume";
    out.area_total.value = ratio * v.value;
    out.area_total.std_error = ratio * v.std_error;
  } else {
    out.area_total = mc_area(full_body, n, rng.child(3), shards);
  }
  const double factor = trivial ? 1.0 : 2.0;
  const Estimate& p = out.p_boundary;
  const Estimate& a = out.area_total;
  Estimate h = detail::make_estimate("p_boundary*area_total", rng, shards);
  h.n_samples = n;
  h.value = factor * p.value * a.value;
  double rel2 = 0;
  if (p.value > 0) rel2 += (p.std_error / p.value) * (p.std_error / p.value);
  if (a.value > 0) rel2 += (a.std_error / a.value) * (a.std_error / a.value);
  h.std_error = std::abs(h.value) * std::sqrt(rel2);
  out.area_ppt_from_hits = h;
  out.discrepancy_sigma = discrepancy_sigma(out.area_ppt_radial, out.area_ppt_from_hits);
  return out;
}

}  // namespace pptgeom
