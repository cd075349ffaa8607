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

// Scenario configuration: the YAML document the CLI and the simulator consume
// (schema in docs/config.md).

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "islandrun/lighthouse.hpp"
#include "islandrun/registry.hpp"
#include "islandrun/tide.hpp"
#include "islandrun/waves.hpp"

namespace islandrun::harness {

struct IslandConfig {
  registry::IslandDeclaration declaration;
  tide::BufferProfile buffer_profile = tide::BufferProfile::Conservative;
  std::string capacity_script;  // empty: always idle
  int line = 0;
};

struct CapacityScript {
  std::vector<tide::CapacityRow> rows;
  int line = 0;
};

// The island sends no heartbeats in [from, until).
struct OfflineInterval {
  std::string island;
  tide::Tick from = 0;
  tide::Tick until = 0;
  int line = 0;
};

struct TierMix {
  double primary = 0.0;
  double secondary = 1.0;
  double burstable = 0.0;
};

enum class Band { Low, Moderate, High };

std::string_view to_string(Band b);
std::optional<Band> parse_band(std::string_view text);

struct BandSpec {
  Band band = Band::Low;
  double fraction = 0.0;
  std::optional<TierMix> tier_mix;  // falls back to the workload mix
  std::vector<std::string> required_assets;
  double asset_fraction = 0.0;  // share of the band's requests needing the assets
  int line = 0;
};

// Hand-written request; overrides generation when present.
struct ScriptedRequest {
  std::string prompt;
  waves::TierClass tier_class = waves::TierClass::Secondary;
  std::vector<std::string> required_assets;
  std::optional<double> deadline_ms;
  std::string conversation;  // requests sharing a value form one conversation
  int line = 0;
};

struct WorkloadSpec {
  std::size_t total = 0;
  std::size_t requests_per_tick = 1;
  double deadline_ms = 2000.0;
  std::size_t conversation_turns = 1;
  std::string domain = "general";
  TierMix tier_mix;
  std::vector<BandSpec> bands;
  std::vector<ScriptedRequest> requests;
  int line = 0;
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 0;
  registry::TrustMode trust_mode = registry::TrustMode::Min;
  waves::Weights weights;
  bool normalize_weights = false;
  waves::RoutingMode mode = waves::RoutingMode::Scalarized;
  waves::ScoreMode score_mode = waves::ScoreMode::Normalized;
  std::optional<double> budget;
  lighthouse::Timeouts timeouts;
  std::vector<IslandConfig> islands;
  std::map<std::string, CapacityScript> capacity;
  std::vector<OfflineInterval> offline;
  WorkloadSpec workload;
  int weights_line = 0;
  int routing_line = 0;
  int lighthouse_line = 0;
};

// Parses the YAML text. Throws ConfigError (with line) for syntax errors,
// unknown keys and values of the wrong type or vocabulary.
ScenarioConfig parse_config(std::string_view yaml);
ScenarioConfig load_config(const std::filesystem::path& path);

struct Finding {
  std::string message;
  int line = 0;
};

struct ValidationReport {
  std::vector<Finding> violations;
  std::vector<Finding> notes;

  bool ok() const noexcept { return violations.empty(); }
  std::string to_text() const;
};

// Static checks of every registry/tide/waves/harness invariant the config
// controls. The simulator runs exactly these checks before starting.
ValidationReport validate_config(const ScenarioConfig& config);

// Router options after weight normalization (when enabled).
waves::RouterOptions router_options(const ScenarioConfig& config);

}  // namespace islandrun::harness
