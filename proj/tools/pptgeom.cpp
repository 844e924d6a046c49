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

// pptgeom run <config.json>            run one experiment, persist its record
// pptgeom report <results_dir>         write summary.md / summary.csv
// pptgeom validate-samplers <config>   sampler self-checks for the config's shape
//
// Exit codes: 0 pass, 1 acceptance failure, 2 config error, 3 runtime error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pptgeom/runner.hpp"

namespace {

namespace rn = pptgeom::runner;

struct OverrideFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> shards;
  std::optional<std::int64_t> samples;
  std::optional<std::string> field;
  std::optional<std::string> shape;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "override the config seed");
    app->add_option("--shards", shards, "override the shard count")->check(CLI::PositiveNumber);
    app->add_option("--samples", samples, "override n_samples");
    app->add_option("--field", field, "override the field (complex|real)");
    app->add_option("--shape", shape, "override the shape (KxM)");
  }

  rn::Overrides get() const { return {std::nullopt, seed, shards, samples, field, shape}; }
};

int run_config(const std::string& path, rn::Overrides overrides, bool verbose) {
  const rn::ExperimentConfig config = rn::load_config(path, overrides);
  const rn::RunResult result = rn::run_experiment(config);
  std::cout << rn::summary_line(result.record) << '\n';
  if (verbose) std::cout << result.record.dump(2) << '\n';
  std::cout << "record: " << result.record_path.string() << '\n';
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo geometry of quantum state bodies and the PPT set"};
  app.set_version_flag("--version", std::string(rn::kLibraryVersion));
  app.require_subcommand(1);

  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "print the full result record");

  std::string run_path;
  OverrideFlags run_flags;
  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", run_path, "config file")->required();
  run_flags.attach(run);

  std::string report_dir;
  auto* report = app.add_subcommand("report", "summarize the records in a results directory");
  report->add_option("results_dir", report_dir, "directory holding result records")->required();

  std::string validate_path;
  OverrideFlags validate_flags;
  auto* validate =
      app.add_subcommand("validate-samplers", "check the samplers for the config's dimension");
  validate->add_option("config", validate_path, "config file")->required();
  validate_flags.attach(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rn::kExitPass : rn::kExitConfigError;
  }

  try {
    if (*run) return run_config(run_path, run_flags.get(), verbose);
    if (*validate) {
      rn::Overrides o = validate_flags.get();
      o.experiment = "sampler-validate";
      return run_config(validate_path, o, verbose);
    }
    if (*report) {
      const rn::ReportResult r = rn::report(report_dir);
      std::cout << r.markdown;
      for (const auto& [file, msg] : r.errors) std::cerr << "unreadable record " << file << ": " << msg << '\n';
      return r.exit_code;
    }
  } catch (const rn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rn::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rn::kExitRuntimeError;
  }
  return rn::kExitConfigError;
}
