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

// Experiment configuration, dispatch, result persistence and reporting.
// The command-line tool is a thin shell over run_experiment() and report().
//
// Config schema (JSON object; unknown keys are rejected):
//
//   experiment   string  omega | gamma | height-check | corner-probe |
//                        area-crosscheck | polytope-gamma | sampler-validate
//   n_samples    integer samples (per side for omega)
//   seed         integer 64-bit unsigned
//   output_path  string  directory receiving records and results.csv
//   shape        "KxM" or [K, M]      all but polytope-gamma
//   field        "complex" | "real"   all but polytope-gamma
//   shards       integer >= 1 (default 1)
//   body         "full" | "ppt"       gamma, height-check (default full)
//   deltas       [numbers]            corner-probe (default 1e-1 .. 1e-4)
//   polytope     object               polytope-gamma, see make_polytope()
//   target       number               polytope-gamma, optional
//   tolerances   object               overrides of Tolerances fields
//   description  string               free text, ignored
//
// results.csv columns, in order:
//   timestamp,config_hash,experiment,shape,field,n_samples,seed,shards,
//   metric,estimate,stderr,target,sigma_deviation,pass

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pptgeom/pptgeom.hpp"

#ifndef PPTGEOM_VERSION_STRING
#define PPTGEOM_VERSION_STRING "0.1.0"
#endif

namespace pptgeom::runner {

using json = nlohmann::json;

inline constexpr const char* kLibraryVersion = PPTGEOM_VERSION_STRING;

enum ExitCode : int {
  kExitPass = 0,
  kExitAcceptanceFailure = 1,
  kExitConfigError = 2,
  kExitRuntimeError = 3,
};

/// Invalid configuration; names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Experiment {
  omega,
  gamma,
  height_check,
  corner_probe,
  area_crosscheck,
  polytope_gamma,
  sampler_validate,
};

inline const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> names = {
      {"omega", Experiment::omega},
      {"gamma", Experiment::gamma},
      {"height-check", Experiment::height_check},
      {"corner-probe", Experiment::corner_probe},
      {"area-crosscheck", Experiment::area_crosscheck},
      {"polytope-gamma", Experiment::polytope_gamma},
      {"sampler-validate", Experiment::sampler_validate},
  };
  return names;
}

inline std::string to_string(Experiment e) {
  for (const auto& [name, value] : experiment_names()) {
    if (value == e) return name;
  }
  return "unknown";
}

inline std::int64_t minimum_samples(Experiment e) {
  switch (e) {
    case Experiment::omega:
    case Experiment::area_crosscheck:
      return kMinOmegaSamples;
    default:
      return kMinSamples;
  }
}

struct Tolerances {
  double k_sigma = 3.0;               // acceptance band in standard errors
  double numeric_floor = 1e-9;        // relative slack for zero-variance estimates
  double height_tol = 1e-9;           // |support height - r|
  double max_non_generic = 1e-3;      // allowed fraction of flagged directions
  double p_value = 0.01;              // goodness-of-fit threshold
  double sampler_k = 4.0;             // band for sampler moment checks
  double corner_max_last_ratio = 0.2; // fraction(delta/10) / fraction(delta), last step
  double polytope_height_tol = 1e-12;

  json to_json() const {
    return {{"k_sigma", k_sigma},
            {"numeric_floor", numeric_floor},
            {"height_tol", height_tol},
            {"max_non_generic", max_non_generic},
            {"p_value", p_value},
            {"sampler_k", sampler_k},
            {"corner_max_last_ratio", corner_max_last_ratio},
            {"polytope_height_tol", polytope_height_tol}};
  }
};

struct ExperimentConfig {
  Experiment experiment = Experiment::omega;
  std::optional<BipartiteShape> shape;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  int shards = 1;
  Tolerances tolerances;
  std::string output_path;
  BodyKind body = BodyKind::full_state;
  std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4};
  json polytope;
  std::optional<double> target;
  std::string description;

  static ExperimentConfig from_json(const json& j);

  /// Canonical form: every field explicit, keys sorted.
  json to_json() const {
    json j;
    j["experiment"] = to_string(experiment);
    j["n_samples"] = n_samples;
    j["seed"] = seed;
    j["shards"] = shards;
    j["output_path"] = output_path;
    j["tolerances"] = tolerances.to_json();
    if (shape) {
      j["shape"] = shape->to_string();
      j["field"] = std::string(pptgeom::to_string(shape->field()));
    }
    if (experiment == Experiment::gamma || experiment == Experiment::height_check) {
      j["body"] = std::string(pptgeom::to_string(body));
    }
    if (experiment == Experiment::corner_probe) j["deltas"] = deltas;
    if (experiment == Experiment::polytope_gamma) {
      j["polytope"] = polytope;
      if (target) j["target"] = *target;
    }
    if (!description.empty()) j["description"] = description;
    return j;
  }

  /// 64-bit FNV-1a of the canonical config without output_path, as hex.
  std::string hash() const {
    json j = to_json();
    j.erase("output_path");
    j.erase("description");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
  }
};

namespace detail {

inline const json& require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(key, "missing required field");
  return j.at(key);
}

inline std::int64_t as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<std::int64_t>();
}

inline double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

inline std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

inline BipartiteShape parse_shape(const json& v, Field field) {
  try {
    if (v.is_string()) return BipartiteShape::parse(v.get<std::string>(), field);
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
      return BipartiteShape(v[0].get<int>(), v[1].get<int>(), field);
    }
  } catch (const DomainError& e) {
    throw ConfigError("shape", e.what());
  }
  throw ConfigError("shape", "expected \"KxM\" or [K, M]");
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_json(const json& j) {
  using namespace detail;
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  static const std::set<std::string> known = {
      "experiment", "n_samples", "seed",    "output_path", "shape",       "field",
      "shards",     "body",      "deltas",  "polytope",    "target",      "tolerances",
      "description"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(key, "unknown field");
  }

  ExperimentConfig c;
  const std::string name = as_string(require(j, "experiment"), "experiment");
  const auto it = experiment_names().find(name);
  if (it == experiment_names().end()) throw ConfigError("experiment", "unknown experiment '" + name + "'");
  c.experiment = it->second;

  c.n_samples = as_int(require(j, "n_samples"), "n_samples");
  if (c.n_samples < minimum_samples(c.experiment)) {
    throw ConfigError("n_samples", "must be >= " + std::to_string(minimum_samples(c.experiment)) +
                                       " for " + name);
  }
  const json& seed = require(j, "seed");
  if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                    seed.get<std::int64_t>() < 0)) {
    throw ConfigError("seed", "expected a non-negative 64-bit integer");
  }
  c.seed = seed.get<std::uint64_t>();
  c.output_path = as_string(require(j, "output_path"), "output_path");
  if (c.output_path.empty()) throw ConfigError("output_path", "must not be empty");

  if (j.contains("shards")) {
    const auto shards = as_int(j.at("shards"), "shards");
    if (shards < 1 || shards > 4096) throw ConfigError("shards", "must be in [1, 4096]");
    c.shards = static_cast<int>(shards);
  }
  if (j.contains("description")) c.description = as_string(j.at("description"), "description");

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    std::map<std::string, double*> slots = {
        {"k_sigma", &c.tolerances.k_sigma},
        {"numeric_floor", &c.tolerances.numeric_floor},
        {"height_tol", &c.tolerances.height_tol},
        {"max_non_generic", &c.tolerances.max_non_generic},
        {"p_value", &c.tolerances.p_value},
        {"sampler_k", &c.tolerances.sampler_k},
        {"corner_max_last_ratio", &c.tolerances.corner_max_last_ratio},
        {"polytope_height_tol", &c.tolerances.polytope_height_tol}};
    for (const auto& [key, value] : t.items()) {
      const auto slot = slots.find(key);
      if (slot == slots.end()) throw ConfigError("tolerances." + key, "unknown tolerance");
      const double v = as_number(value, "tolerances." + key);
      if (!(v >= 0)) throw ConfigError("tolerances." + key, "must be non-negative");
      *slot->second = v;
    }
  }

  if (c.experiment == Experiment::polytope_gamma) {
    c.polytope = require(j, "polytope");
    if (!c.polytope.is_object()) throw ConfigError("polytope", "expected an object");
    if (j.contains("target")) c.target = as_number(j.at("target"), "target");
  } else {
    Field field;
    try {
      field = parse_field(as_string(require(j, "field"), "field"));
    } catch (const DomainError& e) {
      throw ConfigError("field", e.what());
    }
    c.shape = parse_shape(require(j, "shape"), field);
  }

  if (j.contains("body")) {
    try {
      c.body = parse_body_kind(as_string(j.at("body"), "body"));
    } catch (const DomainError& e) {
      throw ConfigError("body", e.what());
    }
    if (c.body == BodyKind::ppt && c.shape && (c.shape->k() < 2 || c.shape->m() < 2)) {
      throw ConfigError("body", "PPT body needs a shape with K >= 2 and M >= 2");
    }
  }
  if (j.contains("deltas")) {
    const json& d = j.at("deltas");
    if (!d.is_array() || d.empty()) throw ConfigError("deltas", "expected a non-empty array");
    c.deltas.clear();
    for (const auto& v : d) c.deltas.push_back(as_number(v, "deltas"));
    for (std::size_t i = 0; i < c.deltas.size(); ++i) {
      if (!(c.deltas[i] >= 0) || (i > 0 && !(c.deltas[i] < c.deltas[i - 1]))) {
        throw ConfigError("deltas", "must be non-negative and strictly decreasing");
      }
    }
  }
  return c;
}

/// Command-line overrides of config fields.
struct Overrides {
  std::optional<std::string> experiment;
  std::optional<std::uint64_t> seed;
  std::optional<int> shards;
  std::optional<std::int64_t> samples;
  std::optional<std::string> field;
  std::optional<std::string> shape;
};

inline void apply_overrides(json& j, const Overrides& o) {
  if (!j.is_object()) return;
  if (o.experiment) j["experiment"] = *o.experiment;
  if (o.seed) j["seed"] = *o.seed;
  if (o.shards) j["shards"] = *o.shards;
  if (o.samples) j["n_samples"] = *o.samples;
  if (o.field) j["field"] = *o.field;
  if (o.shape) j["shape"] = *o.shape;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& o = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  apply_overrides(j, o);
  return ExperimentConfig::from_json(j);
}

/// Headline figure of an experiment.
struct Summary {
  std::string metric;
  double estimate = 0;
  double std_error = 0;
  std::optional<double> target;
  std::optional<double> sigma_deviation;
  bool pass = false;

  json to_json() const {
    json j = {{"metric", metric}, {"estimate", estimate}, {"stderr", std_error}, {"pass", pass}};
    j["target"] = target ? json(*target) : json(nullptr);
    j["sigma_deviation"] = sigma_deviation ? json(*sigma_deviation) : json(nullptr);
    return j;
  }
};

struct Outcome {
  json results;
  Summary summary;
};

inline json to_json(const Estimate& e) {
  return {{"value", e.value},         {"stderr", e.std_error},    {"n_samples", e.n_samples},
          {"seed", e.seed},           {"stream_id", e.stream_id}, {"shards", e.shards},
          {"estimator", e.estimator_id}, {"skipped", e.skipped},  {"warnings", e.warnings}};
}

namespace detail {

inline json check_json(const std::string& name, const Estimate& e, double target, bool pass,
                       double floor) {
  return {{"name", name},
          {"value", e.value},
          {"stderr", e.std_error},
          {"target", target},
          {"sigma_deviation", e.sigma_deviation(target, floor)},
          {"pass", pass}};
}

inline Outcome run_omega(const ExperimentConfig& c) {
  const auto rep = estimate_omega(*c.shape, c.n_samples, RngStream(c.seed), c.shards);
  Estimate omega;
  omega.value = rep.omega;
  omega.std_error = rep.omega_std_error;
  const double target = 2.0;
  const double floor = c.tolerances.numeric_floor * target;
  Outcome out;
  out.results = {{"p_interior", to_json(rep.p_interior)},
                 {"p_boundary", to_json(rep.p_boundary)},
                 {"omega", rep.omega},
                 {"omega_stderr", rep.omega_std_error}};
  out.summary = {"omega", rep.omega, rep.omega_std_error, target,
                 omega.sigma_deviation(target, floor),
                 omega.within(target, c.tolerances.k_sigma, floor)};
  return out;
}

inline Outcome run_gamma(const ExperimentConfig& c) {
  const BodySpec body(c.body, *c.shape);
  const auto rep = mc_radial(body, c.n_samples, RngStream(c.seed), c.shards);
  const double d = body.dim();
  const double k = c.tolerances.k_sigma;
  const double rel = c.tolerances.numeric_floor;

  json checks = json::array();
  bool pass = rep.gamma.within(d, k, rel * d);
  checks.push_back(check_json("gamma", rep.gamma, d, pass, rel * d));
  if (c.body == BodyKind::full_state && c.shape->field() == Field::complex && body.n() == 2) {
    // M(2) is the Bloch ball of radius 1/sqrt(2) in R^3
    const double v_exact = std::numbers::pi * std::numbers::sqrt2 / 3.0;
    const double a_exact = 2.0 * std::numbers::pi;
    const bool v_ok = rep.volume.within(v_exact, k, rel * v_exact);
    const bool a_ok = rep.area.within(a_exact, k, rel * a_exact);
    checks.push_back(check_json("volume", rep.volume, v_exact, v_ok, rel * v_exact));
    checks.push_back(check_json("area", rep.area, a_exact, a_ok, rel * a_exact));
    pass = pass && v_ok && a_ok;
  }
  const double non_generic = static_cast<double>(rep.area.skipped) / c.n_samples;
  pass = pass && non_generic < c.tolerances.max_non_generic;

  Outcome out;
  out.results = {{"body", body.to_string()},
                 {"dimension", body.dim()},
                 {"inscribed_radius", inscribed_radius(body.n())},
                 {"volume", to_json(rep.volume)},
                 {"area", to_json(rep.area)},
                 {"gamma", to_json(rep.gamma)},
                 {"non_generic_fraction", non_generic},
                 {"checks", checks}};
  if (c.shape->field() == Field::complex) {
    out.results["analytic_area_volume_ratio"] = analytic_area_volume_ratio(body.n());
  }
  out.summary = {"gamma", rep.gamma.value, rep.gamma.std_error, d,
                 rep.gamma.sigma_deviation(d, rel * d), pass};
  return out;
}

inline Outcome run_height_check(const ExperimentConfig& c) {
  const BodySpec body(c.body, *c.shape);
  const auto cert = certify_constant_height(body, c.n_samples, RngStream(c.seed), c.shards);
  const bool pass = cert.max_deviation <= c.tolerances.height_tol &&
                    cert.non_generic_fraction() < c.tolerances.max_non_generic;
  Outcome out;
  out.results = {{"body", body.to_string()},
                 {"inscribed_radius", cert.inscribed_radius},
                 {"max_deviation", cert.max_deviation},
                 {"n_samples", cert.n_samples},
                 {"non_generic", cert.non_generic},
                 {"non_generic_fraction", cert.non_generic_fraction()},
                 {"height_tol", c.tolerances.height_tol}};
  out.summary = {"max_height_deviation", cert.max_deviation, 0.0, 0.0, std::nullopt, pass};
  return out;
}

inline Outcome run_corner_probe(const ExperimentConfig& c) {
  const auto rows = corner_probe(*c.shape, c.n_samples, c.deltas, RngStream(c.seed), c.shards);
  json table = json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table.push_back({{"delta", rows[i].delta},
                     {"fraction", rows[i].fraction},
                     {"stderr", rows[i].std_error},
                     {"count", rows[i].count}});
    if (i > 0) {
      const bool decreasing = rows[i - 1].count > 0 ? rows[i].count < rows[i - 1].count
                                                    : rows[i].count == 0;
      monotone = monotone && decreasing;
    }
  }
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double ratio_se = 0;
  if (rows.size() >= 2 && rows[rows.size() - 2].count > 0) {
    const auto prev = static_cast<double>(rows[rows.size() - 2].count);
    ratio = static_cast<double>(rows.back().count) / prev;
    ratio_se = std::sqrt(ratio * (1 - ratio) / prev);
  }
  const bool pass = monotone && ratio <= c.tolerances.corner_max_last_ratio;
  Outcome out;
  out.results = {{"rows", table},
                 {"monotone", monotone},
                 {"last_ratio", ratio},
                 {"last_ratio_stderr", ratio_se}};
  out.summary = {"corner_last_ratio", ratio, ratio_se, c.tolerances.corner_max_last_ratio,
                 std::nullopt, pass};
  return out;
}

inline Outcome run_area_crosscheck(const ExperimentConfig& c) {
  const auto rep = cross_validate_area(*c.shape, c.n_samples, RngStream(c.seed), c.shards);
  const bool pass = rep.discrepancy_sigma < c.tolerances.k_sigma;
  Outcome out;
  out.results = {{"area_ppt_radial", to_json(rep.area_ppt_radial)},
                 {"p_boundary", to_json(rep.p_boundary)},
                 {"area_total", to_json(rep.area_total)},
                 {"area_ppt_from_hits", to_json(rep.area_ppt_from_hits)},
                 {"discrepancy_sigma", rep.discrepancy_sigma}};
  out.summary = {"area_ppt",
                 rep.area_ppt_radial.value,
                 rep.area_ppt_radial.std_error,
                 rep.area_ppt_from_hits.value,
                 rep.discrepancy_sigma,
                 pass};
  return out;
}

}  // namespace detail

/// Builds a tangent body from a polytope description:
///   {"generators": [[...], ...]}                  explicit generator list
///   {"preset": "cube" | "simplex", "dim": D}
///   {"preset": "rectangle"}                      [-1,1] x [-1,1.5]
///   {"preset": "octagon"}                        square n 45-degree rotated square
///   {"preset": "cube-simplex", "dim": D}         cube n regular simplex
///   {"preset": "random-unit", "dim": D, "count": C, "seed": s}
inline TangentBody make_polytope(const json& desc) {
  using namespace detail;
  auto dim = [&]() {
    const auto d = as_int(require(desc, "dim"), "polytope.dim");
    if (d < 2 || d > 64) throw ConfigError("polytope.dim", "must be in [2, 64]");
    return static_cast<int>(d);
  };
  try {
    if (desc.contains("generators")) {
      const json& g = desc.at("generators");
      if (!g.is_array() || g.empty()) throw ConfigError("polytope.generators", "expected a non-empty array");
      std::vector<Eigen::VectorXd> gens;
      const std::size_t d = g[0].is_array() ? g[0].size() : 0;
      for (const auto& row : g) {
        if (!row.is_array() || row.size() != d || d < 2) {
          throw ConfigError("polytope.generators", "expected equal-length numeric vectors (D >= 2)");
        }
        Eigen::VectorXd v(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = as_number(row[i], "polytope.generators");
        gens.push_back(v);
      }
      return TangentBody(static_cast<int>(d), std::move(gens));
    }
    const std::string preset = as_string(require(desc, "preset"), "polytope.preset");
    if (preset == "cube") return TangentBody::cube(dim());
    if (preset == "simplex") return TangentBody::regular_simplex(dim());
    if (preset == "rectangle") {
      return TangentBody(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, -1),
                             Eigen::Vector2d(0, 1.0 / 1.5)});
    }
    if (preset == "octagon") {
      return intersect_bodies(TangentBody::cube(2),
                              TangentBody::rotated_square(std::numbers::pi / 4));
    }
    if (preset == "cube-simplex") {
      const int d = dim();
      return intersect_bodies(TangentBody::cube(d), TangentBody::regular_simplex(d));
    }
    if (preset == "random-unit") {
      const int d = dim();
      const auto count = as_int(require(desc, "count"), "polytope.count");
      const auto seed = desc.contains("seed") ? as_int(desc.at("seed"), "polytope.seed") : 0;
      RngStream rng(static_cast<std::uint64_t>(seed));
      return TangentBody::random_unit(d, static_cast<int>(count), rng);
    }
    throw ConfigError("polytope.preset", "unknown preset '" + preset + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError("polytope", e.what());
  }
}

namespace detail {

inline Outcome run_polytope_gamma(const ExperimentConfig& c) {
  const TangentBody body = make_polytope(c.polytope);
  const RngStream rng(c.seed);
  const auto g = polytope_gamma_mc(body, c.n_samples, rng.child(1), c.shards);
  const auto hc = constant_height_check(body, c.n_samples, c.tolerances.polytope_height_tol,
                                        rng.child(2));
  const double d = body.dim();
  const double k = c.tolerances.k_sigma;
  const double rel = c.tolerances.numeric_floor;

  std::optional<double> target = c.target;
  if (!target && body.all_unit()) target = d;
  bool pass;
  std::string verdict;
  if (target) {
    pass = g.gamma.within(*target, k, rel * *target);
    verdict = "gamma within band of target";
  } else if (hc.pass) {
    pass = g.gamma.within(d, k, rel * d);
    verdict = "constant height: gamma must equal D";
  } else {
    pass = d - g.gamma.value > k * g.gamma.std_error;
    verdict = "not constant height: gamma must fall below D";
  }
  Outcome out;
  out.results = {{"dimension", body.dim()},
                 {"generators", body.generators().size()},
                 {"all_unit", body.all_unit()},
                 {"gamma", to_json(g.gamma)},
                 {"volume", to_json(g.volume)},
                 {"area", to_json(g.area)},
                 {"insphere_radius", g.insphere_radius},
                 {"faces_hit", g.faces_hit},
                 {"height_check",
                  {{"max_deviation", hc.max_deviation},
                   {"probes", hc.probes},
                   {"non_generic", hc.non_generic},
                   {"faces_hit", hc.faces_hit},
                   {"tol", hc.tol},
                   {"pass", hc.pass}}},
                 {"verdict", verdict}};
  std::optional<double> sigma;
  if (target) sigma = g.gamma.sigma_deviation(*target, rel * *target);
  out.summary = {"gamma", g.gamma.value, g.gamma.std_error, target, sigma, pass};
  return out;
}

inline Outcome run_sampler_validate(const ExperimentConfig& c) {
  const auto checks = validate_samplers(c.shape->n(), c.shape->field(), c.n_samples,
                                        RngStream(c.seed), c.tolerances.p_value,
                                        c.tolerances.sampler_k);
  json arr = json::array();
  int passed = 0;
  for (const auto& s : checks) {
    arr.push_back({{"name", s.name},
                   {"value", s.value},
                   {"stderr", s.std_error},
                   {"target", s.target},
                   {"p_value", std::isnan(s.p_value) ? json(nullptr) : json(s.p_value)},
                   {"pass", s.pass}});
    if (s.pass) ++passed;
  }
  const auto total = static_cast<double>(checks.size());
  Outcome out;
  out.results = {{"n", c.shape->n()}, {"checks", arr}};
  out.summary = {"sampler_checks_passed", static_cast<double>(passed), 0.0, total, std::nullopt,
                 passed == static_cast<int>(checks.size())};
  return out;
}

}  // namespace detail

/// Runs the configured experiment without touching the filesystem.
inline Outcome execute(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::omega: return detail::run_omega(c);
    case Experiment::gamma: return detail::run_gamma(c);
    case Experiment::height_check: return detail::run_height_check(c);
    case Experiment::corner_probe: return detail::run_corner_probe(c);
    case Experiment::area_crosscheck: return detail::run_area_crosscheck(c);
    case Experiment::polytope_gamma: return detail::run_polytope_gamma(c);
    case Experiment::sampler_validate: return detail::run_sampler_validate(c);
  }
  throw ConfigError("experiment", "unhandled experiment");
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json make_record(const ExperimentConfig& c, const Outcome& o, double wall_seconds,
                        const std::string& timestamp) {
  return {{"config_hash", c.hash()},
          {"experiment", to_string(c.experiment)},
          {"config", c.to_json()},
          {"results", o.results},
          {"summary", o.summary.to_json()},
          {"rng_algorithm", std::string(RngStream::algorithm_id)},
          {"library_version", kLibraryVersion},
          {"wall_time_s", wall_seconds},
          {"timestamp", timestamp}};
}

/// Writes `text` to `path` through a temporary file and a rename.
inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline const char* kCsvHeader =
    "timestamp,config_hash,experiment,shape,field,n_samples,seed,shards,metric,estimate,stderr,"
    "target,sigma_deviation,pass";

inline std::string csv_number(const json& v) { return v.is_null() ? "" : v.dump(); }

inline std::string csv_row(const json& record) {
  const json& cfg = record.at("config");
  const json& s = record.at("summary");
  std::ostringstream os;
  os << record.at("timestamp").get<std::string>() << ',' << record.at("config_hash").get<std::string>()
     << ',' << record.at("experiment").get<std::string>() << ','
     << cfg.value("shape", std::string{}) << ',' << cfg.value("field", std::string{}) << ','
     << cfg.at("n_samples").dump() << ',' << cfg.at("seed").dump() << ','
     << cfg.at("shards").dump() << ',' << s.at("metric").get<std::string>() << ','
     << csv_number(s.at("estimate")) << ',' << csv_number(s.at("stderr")) << ','
     << csv_number(s.at("target")) << ',' << csv_number(s.at("sigma_deviation")) << ','
     << (s.at("pass").get<bool>() ? "pass" : "fail");
  return os.str();
}

struct RunResult {
  json record;
  std::filesystem::path record_path;
  int exit_code;
};

/// execute() plus persistence: <output_path>/<experiment>-<hash>.json and a
/// row appended to <output_path>/results.csv. Exit code 0 on pass, 1 when the
/// acceptance band is missed.
inline RunResult run_experiment(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const Outcome outcome = execute(c);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunResult r;
  r.record = make_record(c, outcome, wall, utc_timestamp());

  const std::filesystem::path dir(c.output_path);
  std::filesystem::create_directories(dir);
  r.record_path = dir / (to_string(c.experiment) + "-" + c.hash() + ".json");
  write_atomically(r.record_path, r.record.dump(2) + "\n");

  const auto csv = dir / "results.csv";
  const bool fresh = !std::filesystem::exists(csv);
  std::ofstream out(csv, std::ios::app);
  if (fresh) out << kCsvHeader << '\n';
  out << csv_row(r.record) << '\n';

  r.exit_code = outcome.summary.pass ? kExitPass : kExitAcceptanceFailure;
  return r;
}

/// One-line human summary of a record.
inline std::string summary_line(const json& record) {
  const json& s = record.at("summary");
  const json& cfg = record.at("config");
  std::ostringstream os;
  os << (s.at("pass").get<bool>() ? "PASS " : "FAIL ") << record.at("experiment").get<std::string>();
  if (cfg.contains("shape")) os << ' ' << cfg.at("shape").get<std::string>() << ' ' << cfg.at("field").get<std::string>();
  if (cfg.contains("body")) os << ' ' << cfg.at("body").get<std::string>();
  os << ": " << s.at("metric").get<std::string>() << " = " << csv_number(s.at("estimate"));
  if (!s.at("stderr").is_null() && s.at("stderr").get<double>() > 0) os << " +- " << s.at("stderr").dump();
  if (!s.at("target").is_null()) os << " (target " << s.at("target").dump() << ")";
  if (!s.at("sigma_deviation").is_null()) os << ", " << s.at("sigma_deviation").dump() << " sigma";
  return os.str();
}

struct ReportResult {
  std::vector<json> records;
  std::vector<std::pair<std::string, std::string>> errors;  // file, message
  std::string markdown;
  std::string csv;
  int exit_code = kExitPass;
};

/// Summarizes every *.json record in `dir` into summary.md and summary.csv.
inline ReportResult report(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("results_dir", dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" && p.filename().string()[0] != '.') {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());

  ReportResult rep;
  std::map<std::string, std::vector<json>> groups;
  for (const auto& f : files) {
    try {
      std::ifstream in(f);
      json r = json::parse(in);
      for (const char* key : {"experiment", "config", "summary", "config_hash"}) {
        if (!r.contains(key)) throw Error(std::string("missing '") + key + "'");
      }
      for (const char* key : {"metric", "estimate", "stderr", "target", "sigma_deviation", "pass"}) {
        if (!r.at("summary").contains(key)) throw Error(std::string("summary missing '") + key + "'");
      }
      groups[r.at("experiment").get<std::string>()].push_back(r);
      rep.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      rep.errors.emplace_back(f.filename().string(), e.what());
    }
  }

  std::ostringstream md;
  std::ostringstream csv;
  md << "# Results summary\n\n";
  csv << "experiment,shape,field,body,estimate,stderr,target,sigma_deviation,pass\n";
  const std::string head =
      "| experiment | shape | field | estimate ± stderr | target | σ-deviation | pass |\n"
      "|---|---|---|---|---|---|---|\n";
  if (groups.empty()) md << head;
  for (const auto& [experiment, records] : groups) {
    md << "## " << experiment << "\n\n" << head;
    for (const auto& r : records) {
      const json& cfg = r.at("config");
      const json& s = r.at("summary");
      const std::string shape = cfg.value("shape", std::string("-"));
      const std::string field = cfg.value("field", std::string("-"));
      const std::string body = cfg.value("body", std::string{});
      const std::string pass = s.at("pass").get<bool>() ? "pass" : "fail";
      md << "| " << experiment << (body.empty() ? "" : " (" + body + ")") << " | " << shape
         << " | " << field << " | " << csv_number(s.at("estimate")) << " ± "
         << csv_number(s.at("stderr")) << " | " << csv_number(s.at("target")) << " | "
         << csv_number(s.at("sigma_deviation")) << " | " << pass << " |\n";
      csv << experiment << ',' << shape << ',' << field << ',' << body << ','
          << csv_number(s.at("estimate")) << ',' << csv_number(s.at("stderr")) << ','
          << csv_number(s.at("target")) << ',' << csv_number(s.at("sigma_deviation")) << ','
          << pass << '\n';
    }
    md << '\n';
  }
  if (!rep.errors.empty()) {
    md << "## Errors\n\n";
    for (const auto& [file, msg] : rep.errors) md << "- `" << file << "`: " << msg << '\n';
  }
  rep.markdown = md.str();
  rep.csv = csv.str();
  write_atomically(dir / "summary.md", rep.markdown);
  write_atomically(dir / "summary.csv", rep.csv);
  if (!files.empty() && rep.records.empty()) rep.exit_code = kExitRuntimeError;
  return rep;
}

}  // namespace pptgeom::runner
