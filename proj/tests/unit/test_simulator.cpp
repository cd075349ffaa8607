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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "islandrun/errors.hpp"
#include "islandrun/harness.hpp"

namespace islandrun::harness {
namespace {

ScenarioConfig scenario(const std::string& file) {
  return load_config(std::string(ISLANDRUN_SCENARIO_DIR) + "/" + file);
}

std::string trace_text(const RunResult& r) {
  std::ostringstream out;
  write_trace(out, r.trace);
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Simulator, GoldenTrace) {
  auto c = load_config(ISLANDRUN_TEST_DATA_DIR "/golden_scenario.yaml");
  auto result = run_scenario(c);
  EXPECT_EQ(trace_text(result), slurp(ISLANDRUN_TEST_DATA_DIR "/golden_trace.jsonl"));
  EXPECT_EQ(result.metrics.failsafe_local, 2u);
  EXPECT_EQ(result.metrics.sanitization_applied, 2u);
  EXPECT_DOUBLE_EQ(result.metrics.total_cost, 0.004);
}

TEST(Simulator, TraceFieldOrder) {
  TraceRecord r;
  r.request = "r\"1";
  const auto line = format_trace_line(r);
  EXPECT_EQ(line.rfind("{\"tick\":0,\"request\":\"r\\\"1\",\"s_r\":0,", 0), 0u) << line;
  EXPECT_NE(line.find("\"map_id\":\"\",\"cost\":0,\"violation\":false}"), std::string::npos);
}

TEST(Simulator, Determinism) {
  auto c = scenario("scenario_b_healthcare.yaml");
  EXPECT_EQ(trace_text(run_scenario(c)), trace_text(run_scenario(c)));
  RunOptions other;
  other.seed = c.seed + 1;
  EXPECT_NE(trace_text(run_scenario(c)), trace_text(run_scenario(c, other)));
}

TEST(Simulator, ScenarioFourPolicies) {
  auto c = scenario("scenario_4_healthcare_assistant.yaml");
  auto results = compare_policies(c);
  ASSERT_EQ(results.size(), 5u);
  const auto& islandrun = results[0].metrics;
  const auto& cloud_only = results[1].metrics;
  const auto& local_only = results[2].metrics;
  const auto& greedy = results[3].metrics;
  const auto& privacy_only = results[4].metrics;
  EXPECT_EQ(islandrun.privacy_violations, 0u);
  EXPECT_EQ(islandrun.rejections_fail_closed, islandrun.reasons.count("privacy_unsatisfiable")
                                                  ? islandrun.reasons.at("privacy_unsatisfiable")
                                                  : 0u);
  EXPECT_GT(greedy.privacy_violations, 0u);
  EXPECT_EQ(cloud_only.privacy_violations, 200u);
  EXPECT_LE(islandrun.total_cost, cloud_only.total_cost);
  EXPECT_EQ(privacy_only.cloud_cost, 0.0);
  EXPECT_EQ(local_only.cloud_cost, 0.0);
  EXPECT_GT(local_only.failsafe_local, 0u);
  EXPECT_EQ(islandrun.desanitize_mismatches, 0u);

  const auto table = format_comparison(results);
  EXPECT_NE(table.find("latency-greedy"), std::string::npos);
}

TEST(Simulator, SanitizationGate) {
  auto c = scenario("scenario_a_knowledge_worker.yaml");
  auto r = run_scenario(c);
  std::size_t cloud_with_history = 0;
  for (const auto& t : r.trace) {
    if (t.island_tier == "tier3" && t.history_turns > 0) {
      ++cloud_with_history;
      EXPECT_EQ(t.sanitization, waves::Sanitization::Applied) << t.request;
    }
    if (t.island_tier == "tier1") EXPECT_EQ(t.sanitization, waves::Sanitization::Bypassed);
  }
  EXPECT_GT(cloud_with_history, 0u);
}

TEST(Ablation, NoMistAvoidsCloud) {
  auto c = scenario("scenario_a_knowledge_worker.yaml");
  RunOptions o;
  o.disabled = Agent::Mist;
  auto r = run_scenario(c, o);
  EXPECT_EQ(r.metrics.routed_per_tier.count("tier3"), 0u);
  for (const auto& t : r.trace) EXPECT_EQ(t.s_r, 1.0);
}

TEST(Ablation, NoTideClosesBoundedIslands) {
  auto c = scenario("scenario_a_knowledge_worker.yaml");
  RunOptions o;
  o.disabled = Agent::Tide;
  auto r = run_scenario(c, o);
  EXPECT_EQ(r.metrics.routed_per_tier.count("tier1"), 0u);
  EXPECT_EQ(r.metrics.routed_per_tier.count("tier2"), 0u);
  EXPECT_GT(r.metrics.routed_per_tier.at("tier3"), 0u);
  EXPECT_EQ(r.metrics.privacy_violations, 0u);
}

TEST(Ablation, NoLighthouseMatchesStaticMembership) {
  auto c = scenario("scenario_4_healthcare_assistant.yaml");
  ASSERT_TRUE(c.offline.empty());
  RunOptions o;
  o.disabled = Agent::Lighthouse;
  EXPECT_EQ(trace_text(run_scenario(c)), trace_text(run_scenario(c, o)));
}

TEST(Ablation, NoLighthouseKeepsStaleMembership) {
  auto c = scenario("scenario_a_knowledge_worker.yaml");
  RunOptions o;
  o.disabled = Agent::Lighthouse;
  auto r = run_scenario(c, o);
  // The laptop sleeps from tick 40, but the cached list still contains it.
  EXPECT_NE(trace_text(r), trace_text(run_scenario(c)));
}

TEST(Simulator, RejectsInvalidConfig) {
  auto c = scenario("scenario_4_healthcare_assistant.yaml");
  c.weights = {0.5, 0.5, 0.5};
  EXPECT_THROW(run_scenario(c), ConfigError);
}

TEST(Simulator, ConstraintModeOverride) {
  auto c = scenario("scenario_4_healthcare_assistant.yaml");
  RunOptions o;
  o.mode = waves::RoutingMode::ConstraintBased;
  auto r = run_scenario(c, o);
  EXPECT_EQ(r.metrics.privacy_violations, 0u);
  EXPECT_EQ(r.metrics.cloud_cost, 0.0);  // cloud cost 0.02 exceeds the 0.005 budget
}

TEST(Metrics, Percentiles) {
  RunMetrics m;
  m.decision_latency_us = {5, 1, 4, 2, 3};
  EXPECT_EQ(m.latency_percentile_us(0.5), 3);
  EXPECT_EQ(m.latency_percentile_us(0.99), 5);
  EXPECT_EQ(m.latency_percentile_us(0.0), 1);
}

}  // namespace
}  // namespace islandrun::harness
