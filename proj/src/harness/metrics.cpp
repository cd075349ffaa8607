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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "islandrun/harness.hpp"

namespace islandrun::harness {

double RunMetrics::local_utilization() const {
  if (total == 0) return 0.0;
  return static_cast<double>(local_served) / static_cast<double>(total);
}

// Nearest-rank percentile.
double RunMetrics::latency_percentile_us(double q) const {
  if (decision_latency_us.empty()) return 0.0;
  auto sorted = decision_latency_us;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

std::string RunMetrics::to_text() const {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{}: {}\n", key, value);
  };
  line("scenario", scenario);
  line("policy", to_string(policy));
  line("disabled", disabled ? to_string(*disabled) : std::string_view("none"));
  line("requests", total);
  line("routed", routed);
  line("rejected_fail_closed", rejections_fail_closed);
  line("failsafe_local", failsafe_local);
  line("privacy_violations", privacy_violations);
  for (const auto& tier : {"tier1", "tier2", "tier3"}) {
    auto it = routed_per_tier.find(tier);
    line(fmt::format("routed_{}", tier), it == routed_per_tier.end() ? 0 : it->second);
  }
  line("total_cost", fmt::format("{:.4f}", total_cost));
  line("cloud_cost", fmt::format("{:.4f}", cloud_cost));
  line("local_utilization", fmt::format("{:.4f}", local_utilization()));
  line("sanitization_applied", sanitization_applied);
  line("sanitization_bypassed", sanitization_bypassed);
  line("desanitize_mismatches", desanitize_mismatches);
  line("decision_latency_p50_us", fmt::format("{:.1f}", latency_percentile_us(0.50)));
  line("decision_latency_p99_us", fmt::format("{:.1f}", latency_percentile_us(0.99)));
  for (const auto& [reason, n] : reasons) line(fmt::format("reason.{}", reason), n);
  for (const auto& [island, n] : served_per_island) line(fmt::format("island.{}", island), n);
  return out;
}

std::string format_comparison(const std::vector<RunResult>& results) {
  std::string out = fmt::format("{:<16}{:>12}{:>12}{:>10}{:>12}{:>12}{:>10}{:>10}\n", "policy",
                                "violations", "rejections", "failsafe", "total_cost", "local_util",
                                "p50_us", "p99_us");
  for (const auto& r : results) {
    const auto& m = r.metrics;
    out += fmt::format("{:<16}{:>12}{:>12}{:>10}{:>12.4f}{:>12.4f}{:>10.1f}{:>10.1f}\n",
                       to_string(m.policy), m.privacy_violations, m.rejections_fail_closed,
                       m.failsafe_local, m.total_cost, m.local_utilization(),
                       m.latency_percentile_us(0.50), m.latency_percentile_us(0.99));
  }
  return out;
}

}  // namespace islandrun::harness
