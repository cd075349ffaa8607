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

// Deterministic scenario simulator: tick loop, baseline policies, trace
// records and run metrics.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "islandrun/scenario_config.hpp"
#include "islandrun/waves.hpp"
#include "islandrun/workload.hpp"

namespace islandrun::harness {

enum class Policy { IslandRun, CloudOnly, LocalOnly, LatencyGreedy, PrivacyOnly };
enum class Agent { Mist, Tide, Lighthouse };

std::string_view to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view text);
std::string_view to_string(Agent a);
std::optional<Agent> parse_agent(std::string_view text);

// All five policies, IslandRun first.
std::vector<Policy> all_policies();

struct RunOptions {
  Policy policy = Policy::IslandRun;
  std::optional<Agent> disabled;
  std::optional<std::uint64_t> seed;           // overrides the config seed
  std::optional<waves::RoutingMode> mode;      // overrides the config mode
};

// One line of the decision trace. Field order is the serialization order.
struct TraceRecord {
  tide::Tick tick = 0;
  std::string request;
  double s_r = 0.0;
  waves::TierClass tier_class = waves::TierClass::Secondary;
  std::size_t eligible = 0;
  waves::Outcome outcome = waves::Outcome::RejectedFailClosed;
  std::string island;       // empty when rejected
  std::string island_tier;  // empty when rejected
  waves::Reason reason = waves::Reason::None;
  double score = 0.0;
  waves::Terms terms;
  waves::Sanitization sanitization = waves::Sanitization::None;
  std::size_t history_turns = 0;
  double p_prev = 1.0;
  std::size_t placeholders = 0;
  std::string map_id;
  double cost = 0.0;
  bool violation = false;  // dispatched to an island with P_j < s_r
};

// Single-line JSON object, no trailing newline.
std::string format_trace_line(const TraceRecord& r);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);

struct RunMetrics {
  std::string scenario;
  Policy policy = Policy::IslandRun;
  std::optional<Agent> disabled;
  std::size_t total = 0;
  std::size_t routed = 0;
  std::size_t rejections_fail_closed = 0;
  std::size_t failsafe_local = 0;
  std::size_t privacy_violations = 0;
  std::map<std::string, std::size_t> routed_per_tier;     // tier1/tier2/tier3
  std::map<std::string, std::size_t> served_per_island;   // routed + failsafe
  std::map<std::string, std::size_t> reasons;
  double total_cost = 0.0;
  double cloud_cost = 0.0;
  std::size_t local_served = 0;  // dispatches to Tier 1 islands
  std::size_t sanitization_applied = 0;
  std::size_t sanitization_bypassed = 0;
  std::size_t desanitize_mismatches = 0;
  std::vector<double> decision_latency_us;  // per request, wall clock

  // Share of requests served (routed or failsafe) by Tier 1 islands.
  double local_utilization() const;
  double latency_percentile_us(double q) const;
  std::string to_text() const;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<TraceRecord> trace;
};

// Validates the config (ConfigError listing violations), then simulates.
// Under the IslandRun policy a dispatch with P_j < s_r throws
// PrivacyViolationError.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

// Runs every policy on the identical seeded workload.
std::vector<RunResult> compare_policies(const ScenarioConfig& config, const RunOptions& options = {});
std::string format_comparison(const std::vector<RunResult>& results);

}  // namespace islandrun::harness
