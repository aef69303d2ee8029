// Copyright 2026 The pejkit Authors.
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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pejkit/commands.hpp"
#include "pejkit/error.hpp"
#include "pejkit/manifest.hpp"

namespace {

void add_common_options(CLI::App* sub, pejkit::CommandOptions* opts, std::uint64_t* seed,
                        bool* seed_set, bool with_format = true) {
  sub->add_option("--config", opts->config_path, "config file (TOML or JSON)");
  sub->add_option("--out", opts->out_dir, "output directory");
  sub->add_option("--seed", *seed, "seed override for all randomness")
      ->each([seed_set](const std::string&) { *seed_set = true; });
  if (with_format) {
    sub->add_option("--format", opts->format, "log/curve file format (csv or json)")
        ->check(CLI::IsMember({"csv", "json"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distills joint torque-angle logs into parallel-elastic curves and "
               "quantifies the motor-power offload."};
  app.set_version_flag("--version", std::string(pejkit::kToolVersion));
  app.require_subcommand(1);

  pejkit::CommandOptions opts;
  std::uint64_t seed = 0;
  bool seed_set = false;

  std::string scenario_path, log_path, report_a, report_b, curves_dir;
  bool online = false, no_pej = false, with_series = false;

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic trajectory log");
  synth->add_option("scenario", scenario_path, "scenario file (TOML or JSON)")->required();
  add_common_options(synth, &opts, &seed, &seed_set);

  CLI::App* distill = app.add_subcommand("distill", "fit elastic curves from a log");
  distill->add_option("log", log_path, "trajectory log (CSV stem or JSON file)")->required();
  distill->add_flag("--online", online, "replay the log as a stream with periodic updates");
  add_common_options(distill, &opts, &seed, &seed_set);

  CLI::App* eval = app.add_subcommand("eval", "compute metrics and plots for a log");
  eval->add_option("log", log_path, "trajectory log (CSV stem or JSON file)")->required();
  eval->add_option("--curves", curves_dir, "directory holding curve_<group> files");
  eval->add_flag("--no-pej", no_pej, "evaluate without elastic assistance");
  eval->add_flag("--series", with_series, "also dump the per-timestep series as CSV");
  add_common_options(eval, &opts, &seed, &seed_set, /*with_format=*/false);

  CLI::App* compare = app.add_subcommand("compare", "compare two metric reports");
  compare->add_option("baseline", report_a, "baseline report.json")->required();
  compare->add_option("candidate", report_b, "candidate report.json")->required();
  add_common_options(compare, &opts, &seed, &seed_set, /*with_format=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(pejkit::ErrorKind::kUsage);
  }

  if (seed_set) opts.seed = seed;

  try {
    if (synth->parsed()) return pejkit::cmd_synth(scenario_path, opts);
    if (distill->parsed()) return pejkit::cmd_distill(log_path, online, opts);
    if (eval->parsed()) {
      if (!no_pej && curves_dir.empty()) {
        throw pejkit::Error(pejkit::ErrorKind::kUsage, "eval needs --curves DIR or --no-pej");
      }
      if (no_pej && !curves_dir.empty()) {
        throw pejkit::Error(pejkit::ErrorKind::kUsage, "--curves and --no-pej are mutually exclusive");
      }
      return pejkit::cmd_eval(log_path, curves_dir, no_pej, opts, with_series);
    }
    if (compare->parsed()) return pejkit::cmd_compare(report_a, report_b, opts);
  } catch (const pejkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
