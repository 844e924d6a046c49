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

// Convex bodies in R^D given as polars {x : <x, y> <= 1 for all y in Y} of a
// finite generator set Y inside the closed unit ball. Only support
// maximizations are needed, so no vertex enumeration happens here.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pptgeom/core.hpp"
#include "pptgeom/estimators.hpp"
#include "pptgeom/rng.hpp"
#include "pptgeom/stats.hpp"

namespace pptgeom {

/// Thrown when some direction has no positive support value.
class UnboundedDirection : public DomainError {
 public:
  using DomainError::DomainError;
};

inline Eigen::VectorXd sample_unit_vector(int d, RngStream& rng) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal();
  return v / v.norm();
}

class TangentBody {
 public:
  TangentBody(int dim, std::vector<Eigen::VectorXd> generators)
      : dim_(dim), generators_(std::move(generators)) {
    if (dim < 2) throw DomainError("tangent body needs D >= 2");
    if (generators_.empty()) throw DomainError("tangent body needs generators");
    for (const auto& y : generators_) {
      if (y.size() != dim) throw DimensionError("generator length does not match D");
      const double norm = y.norm();
      if (!(norm > 0)) throw DomainError("zero generator");
      // a generator outside the unit ball would cut the unit insphere
      if (norm > 1.0 + 1e-12) {
        throw DomainError("generator norm " + std::to_string(norm) + " exceeds 1");
      }
    }
    auto less = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                          b.data() + b.size());
    };
    std::sort(generators_.begin(), generators_.end(), less);
    generators_.erase(std::unique(generators_.begin(), generators_.end(),
                                  [](const auto& a, const auto& b) { return a == b; }),
                      generators_.end());
    check_bounded();
  }

  /// [-1, 1]^D.
  static TangentBody cube(int d) {
    std::vector<Eigen::VectorXd> g;
    for (int i = 0; i < d; ++i) {
      g.push_back(Eigen::VectorXd::Unit(d, i));
      g.push_back(-Eigen::VectorXd::Unit(d, i));
    }
    return {d, std::move(g)};
  }

  /// Regular simplex circumscribed about the unit ball: D+1 unit generators
  /// summing to zero.
  static TangentBody regular_simplex(int d) {
    // centred standard basis of R^{D+1}, expressed in an orthonormal basis of
    // the hyperplane sum x = 0
    const Eigen::MatrixXd centred =
        Eigen::MatrixXd::Identity(d + 1, d + 1) -
        Eigen::MatrixXd::Constant(d + 1, d + 1, 1.0 / (d + 1));
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(centred);
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd basis = q.leftCols(d);
    std::vector<Eigen::VectorXd> g;
    for (int i = 0; i <= d; ++i) {
      Eigen::VectorXd y = basis.transpose() * centred.col(i);
      g.push_back(y / y.norm());
    }
    return {d, std::move(g)};
  }

  /// Square [-1,1]^2 rotated by `angle`.
  static TangentBody rotated_square(double angle) {
    std::vector<Eigen::VectorXd> g;
    for (int k = 0; k < 4; ++k) {
      const double t = angle + k * std::numbers::pi / 2;
      g.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
    return {2, std::move(g)};
  }

  /// Polar of `count` uniform random unit vectors.
  static TangentBody random_unit(int d, int count, RngStream& rng) {
    std::vector<Eigen::VectorXd> g;
    g.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g.push_back(sample_unit_vector(d, rng));
    return {d, std::move(g)};
  }

  int dim() const { return dim_; }
  const std::vector<Eigen::VectorXd>& generators() const { return generators_; }

  bool all_unit(double tol = 1e-12) const {
    return std::all_of(generators_.begin(), generators_.end(),
                       [&](const auto& y) { return std::abs(y.norm() - 1.0) <= tol; });
  }

  friend bool operator==(const TangentBody& a, const TangentBody& b) {
    return a.dim_ == b.dim_ && a.generators_ == b.generators_;
  }

 private:
  // Boundedness needs 0 in the interior of conv(Y): the generators must span
  // R^D and no probe direction may be free of positive support. Directions
  // missed here are caught by polar_radial at sampling time.
  void check_bounded() const {
    Eigen::MatrixXd m(dim_, static_cast<Eigen::Index>(generators_.size()));
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      m.col(static_cast<Eigen::Index>(i)) = generators_[i];
    }
    if (Eigen::FullPivLU<Eigen::MatrixXd>(m).rank() < dim_) {
      throw DomainError("generators do not span R^D: the polar body is unbounded");
    }
    auto probe = [&](const Eigen::VectorXd& w) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& y : generators_) best = std::max(best, w.dot(y));
      if (!(best > 0)) {
        throw DomainError("origin is not interior to the generator hull: the polar body is unbounded");
      }
    };
    for (int i = 0; i < dim_; ++i) {
      probe(Eigen::VectorXd::Unit(dim_, i));
      probe(-Eigen::VectorXd::Unit(dim_, i));
    }
    for (const auto& y : generators_) probe(-y);
  }

  int dim_;
  std::vector<Eigen::VectorXd> generators_;
};

namespace detail {

inline void check_unit(const TangentBody& body, const Eigen::VectorXd& w) {
  if (w.size() != body.dim()) throw DimensionError("direction length does not match D");
  if (std::abs(w.norm() - 1.0) > 1e-10) throw DomainError("direction must be a unit vector");
}

struct SupportMax {
  double best = -std::numeric_limits<double>::infinity();
  double second = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

inline SupportMax support_max(const TangentBody& body, const Eigen::VectorXd& w) {
  SupportMax m;
  const auto& g = body.generators();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = w.dot(g[i]);
    if (v > m.best) {
      m.second = m.best;
      m.best = v;
      m.index = i;
    } else if (v > m.second) {
      m.second = v;
    }
  }
  if (!(m.best > 0)) {
    std::ostringstream msg;
    msg << "unbounded direction (" << w.transpose() << "): no generator has positive support";
    throw UnboundedDirection(msg.str());
  }
  return m;
}

}  // namespace detail

/// r(w) = 1 / max_y <w, y>.
inline double polar_radial(const TangentBody& body, const Eigen::VectorXd& w) {
  detail::check_unit(body, w);
  return 1.0 / detail::support_max(body, w).best;
}

/// Relative gap between the two largest support values below which the
/// maximizing face is ambiguous.
inline constexpr double kPolarTieTolerance = 1e-12;

struct PolarContact {
  Eigen::VectorXd point;
  Eigen::VectorXd normal;
  double support_distance;  // distance from the origin to the face's hyperplane
  double radius;
  std::size_t generator;
  bool generic;
};

inline PolarContact polar_contact(const TangentBody& body, const Eigen::VectorXd& w) {
  detail::check_unit(body, w);
  const auto m = detail::support_max(body, w);
  const Eigen::VectorXd& y = body.generators()[m.index];
  const double norm = y.norm();
  const double r = 1.0 / m.best;
  const bool generic = (m.best - m.second) > kPolarTieTolerance * m.best;
  return PolarContact{r * w, y / norm, 1.0 / norm, r, m.index, generic};
}

/// Generator union: (Y1 u Y2)° = Y1° n Y2°.
inline TangentBody intersect_bodies(const TangentBody& a, const TangentBody& b) {
  if (a.dim() != b.dim()) throw DimensionError("cannot intersect bodies of different dimension");
  std::vector<Eigen::VectorXd> g = a.generators();
  g.insert(g.end(), b.generators().begin(), b.generators().end());
  return {a.dim(), std::move(g)};
}

struct PolytopeGamma {
  Estimate gamma;
  Estimate volume;
  Estimate area;
  double insphere_radius;     // min support distance over faces that were hit
  std::int64_t faces_hit;
};

/// gamma = r A / V from the radial integrals of this body, with r estimated as
/// the smallest support distance among binding faces.
inline PolytopeGamma polytope_gamma_mc(const TangentBody& body, std::int64_t n,
                                       const RngStream& rng, int shards = 1) {
  detail::require_samples(n, kMinSamples, "polytope_gamma_mc");
  struct Acc {
    PairedMoments area_volume;
    std::int64_t skipped = 0;
    double min_support = std::numeric_limits<double>::infinity();
    std::vector<char> hit;
    void merge(const Acc& o) {
      area_volume.merge(o.area_volume);
      skipped += o.skipped;
      min_support = std::min(min_support, o.min_support);
      if (hit.empty()) hit.assign(o.hit.size(), 0);
      for (std::size_t i = 0; i < o.hit.size(); ++i) hit[i] = static_cast<char>(hit[i] | o.hit[i]);
    }
  };
  const int d = body.dim();
  const auto acc = detail::run_sharded<Acc>(n, rng, shards, [&](std::int64_t count, RngStream& r) {
    Acc a;
    a.hit.assign(body.generators().size(), 0);
    for (std::int64_t i = 0; i < count; ++i) {
      const Eigen::VectorXd w = sample_unit_vector(d, r);
      const PolarContact c = polar_contact(body, w);
      if (!c.generic) {
        ++a.skipped;
        continue;
      }
      a.hit[c.generator] = 1;
      a.min_support = std::min(a.min_support, c.support_distance);
      const double rd1 = std::pow(c.radius, d - 1);
      a.area_volume.add(rd1 / w.dot(c.normal), rd1 * c.radius);
    }
    return a;
  });

  const double sphere = unit_sphere_area(d);
  const double generic = static_cast<double>(acc.area_volume.count());
  PolytopeGamma out;
  out.insphere_radius = acc.min_support;
  out.faces_hit = std::count(acc.hit.begin(), acc.hit.end(), 1);

  out.volume = detail::make_estimate("polytope_volume", rng, shards);
  out.volume.n_samples = n;
  out.volume.value = sphere / d * acc.area_volume.mean_b();
  out.volume.std_error = sphere / d * std::sqrt(acc.area_volume.var_b() / generic);

  out.area = detail::make_estimate("polytope_area", rng, shards);
  out.area.n_samples = n;
  out.area.skipped = acc.skipped;
  out.area.value = sphere * acc.area_volume.mean_a();
  out.area.std_error = sphere * std::sqrt(acc.area_volume.var_a() / generic);
  detail::attach_skip_warning(out.area);

  out.gamma = detail::make_estimate("polytope_gamma_mc", rng, shards);
  out.gamma.n_samples = n;
  out.gamma.skipped = acc.skipped;
  out.gamma.value = out.insphere_radius * d * acc.area_volume.ratio();
  out.gamma.std_error = out.insphere_radius * d * acc.area_volume.ratio_std_error();
  out.gamma.warnings = out.area.warnings;
  return out;
}

struct HeightCheckReport {
  double max_deviation = 0;      // max |support distance - 1| over binding faces
  Eigen::VectorXd worst_direction;
  std::int64_t probes = 0;
  std::int64_t non_generic = 0;
  std::int64_t faces_hit = 0;
  double tol = 0;
  bool pass = false;
};

/// Probes n random directions plus every generator's own direction and checks
/// that each face met is tangent to the unit ball.
inline HeightCheckReport constant_height_check(const TangentBody& body, std::int64_t n,
                                               double tol, const RngStream& rng) {
  detail::require_samples(n, kMinSamples, "constant_height_check");
  HeightCheckReport rep;
  rep.tol = tol;
  rep.worst_direction = Eigen::VectorXd::Zero(body.dim());
  std::vector<char> hit(body.generators().size(), 0);
  auto visit = [&](const Eigen::VectorXd& w) {
    ++rep.probes;
    const PolarContact c = polar_contact(body, w);
    if (!c.generic) {
      ++rep.non_generic;
      return;
    }
    hit[c.generator] = 1;
    const double dev = std::abs(c.support_distance - 1.0);
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_direction = w;
    }
  };
  RngStream r = rng;
  for (std::int64_t i = 0; i < n; ++i) visit(sample_unit_vector(body.dim(), r));
  for (const auto& y : body.generators()) visit(y / y.norm());
  rep.faces_hit = std::count(hit.begin(), hit.end(), 1);
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace pptgeom
