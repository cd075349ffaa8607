// Copyright 2026 The IslandRun Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "islandrun/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "islandrun/errors.hpp"
#include "islandrun/harness.hpp"
#include "islandrun/scenario_config.hpp"

namespace islandrun::cli {
namespace {

namespace fs = std::filesystem;
using harness::Agent;
using harness::Policy;

struct Invocation {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string policy = "islandrun";
  std::string disable;
  int verbosity = 0;
};

harness::RunOptions run_options(const Invocation& inv) {
  harness::RunOptions o;
  o.seed = inv.seed;
  if (!inv.mode.empty()) o.mode = waves::parse_routing_mode(inv.mode);
  o.policy = *harness::parse_policy(inv.policy);
  if (!inv.disable.empty()) o.disabled = harness::parse_agent(inv.disable);
  return o;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

// Loads and validates; prints the report on failure or when verbose.
std::optional<harness::ScenarioConfig> load_valid(const Invocation& inv, std::ostream& out,
                                                  std::ostream& err) {
  auto config = harness::load_config(inv.config);
  const auto report = harness::validate_config(config);
  if (!report.ok()) {
    err << report.to_text();
    return std::nullopt;
  }
  if (inv.verbosity > 0 && !report.notes.empty()) out << report.to_text();
  return config;
}

std::string trace_text(const harness::RunResult& r) {
  std::ostringstream s;
  harness::write_trace(s, r.trace);
  return s.str();
}

int do_validate(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const auto config = harness::load_config(inv.config);
  const auto report = harness::validate_config(config);
  (report.ok() ? out : err) << report.to_text();
  return report.ok() ? kSuccess : kValidationFailure;
}

int do_run(const Invocation& inv, std::string_view stem, std::ostream& out, std::ostream& err) {
  auto config = load_valid(inv, out, err);
  if (!config) return kValidationFailure;
  const auto result = harness::run_scenario(*config, run_options(inv));
  const auto metrics = result.metrics.to_text();
  out << metrics;
  if (!inv.out_dir.empty()) {
    fs::create_directories(inv.out_dir);
    write_file(fs::path(inv.out_dir) / fmt::format("{}.jsonl", stem), trace_text(result));
    write_file(fs::path(inv.out_dir) / fmt::format("{}.metrics.txt", stem), metrics);
  }
  return kSuccess;
}

int do_compare(const Invocation& inv, std::ostream& out, std::ostream& err) {
  auto config = load_valid(inv, out, err);
  if (!config) return kValidationFailure;
  const auto results = harness::compare_policies(*config, run_options(inv));
  const auto table = harness::format_comparison(results);
  out << table;
  if (!inv.out_dir.empty()) {
    fs::create_directories(inv.out_dir);
    write_file(fs::path(inv.out_dir) / "compare.txt", table);
    for (const auto& r : results) {
      const auto stem = fmt::format("trace-{}", harness::to_string(r.metrics.policy));
      write_file(fs::path(inv.out_dir) / fmt::format("{}.jsonl", stem), trace_text(r));
    }
  }
  return kSuccess;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"IslandRun scenario runner", "islandrun"};
  app.require_subcommand(1);
  Invocation inv;

  const std::vector<std::string> modes = {"scalarized", "constraint"};
  std::vector<std::string> policies;
  for (auto p : harness::all_policies()) policies.emplace_back(harness::to_string(p));
  const std::vector<std::string> agents = {"mist", "tide", "lighthouse"};

  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--config", inv.config, "Scenario YAML file")->required()->check(CLI::ExistingFile);
    auto* o = sub->add_option("--out", inv.out_dir, "Output directory for traces and reports");
    if (needs_out) o->required();
    sub->add_option("--seed", inv.seed, "Override the scenario seed");
    sub->add_option("--mode", inv.mode, "Routing mode override")->check(CLI::IsMember(modes));
    sub->add_flag("-v,--verbose", inv.verbosity, "Print validation notes");
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario config statically");
  validate->add_option("--config", inv.config, "Scenario YAML file")->required()->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "Run one policy and write trace + metrics");
  add_common(run, false);
  run->add_option("--policy", inv.policy, "Routing policy")->check(CLI::IsMember(policies));
  run->add_option("--disable", inv.disable, "Disable one agent")->check(CLI::IsMember(agents));

  auto* ablate = app.add_subcommand("ablate", "Run with one agent disabled");
  add_common(ablate, false);
  ablate->add_option("--disable", inv.disable, "Agent to disable")
      ->required()
      ->check(CLI::IsMember(agents));

  auto* compare = app.add_subcommand("compare", "Run all five policies on the same workload");
  add_common(compare, false);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kValidationFailure;
  }

  try {
    if (validate->parsed()) return do_validate(inv, out, err);
    if (run->parsed()) {
      const auto stem = inv.disable.empty() ? fmt::format("trace-{}", inv.policy)
                                            : fmt::format("trace-{}-no-{}", inv.policy, inv.disable);
      return do_run(inv, stem, out, err);
    }
    if (ablate->parsed()) return do_run(inv, fmt::format("trace-no-{}", inv.disable), out, err);
    if (compare->parsed()) return do_compare(inv, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const PrivacyViolationError& e) {
    err << "privacy violation, run aborted: " << e.what() << '\n';
    return kPrivacyViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kRuntimeError;
}

}  // namespace islandrun::cli
