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
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "islandrun/errors.hpp"
#include "islandrun/harness.hpp"
#include "islandrun/lighthouse.hpp"
#include "islandrun/mist.hpp"
#include "islandrun/tide.hpp"

namespace islandrun::harness {
namespace {

using registry::IslandPtr;
using registry::TierLevel;
using waves::CapacityLookup;
using waves::Outcome;
using waves::Reason;
using waves::RoutingDecision;

struct Conversation {
  std::vector<std::string> turns;
  std::optional<double> p_prev;  // most private island that served a turn
};

bool offline_at(const ScenarioConfig& c, std::string_view island, tide::Tick t) {
  return std::any_of(c.offline.begin(), c.offline.end(), [&](const OfflineInterval& o) {
    return o.island == island && t >= o.from && t < o.until;
  });
}

void gate_sanitization(RoutingDecision& d, const waves::InferenceRequest& req,
                       const mist::Sanitizer& sanitizer) {
  if (!d.island) return;
  if (waves::needs_sanitization(req.history, *d.island)) {
    d.sanitization = waves::Sanitization::Applied;
    d.sanitized = sanitizer.sanitize(req.history.turns, d.island->privacy_score);
  } else {
    d.sanitization = waves::Sanitization::Bypassed;
  }
}

// Picks the first island of `pool` under `less`; nullptr when empty.
template <typename Less>
IslandPtr pick(const std::vector<IslandPtr>& pool, Less less) {
  if (pool.empty()) return nullptr;
  return *std::min_element(pool.begin(), pool.end(), less);
}

RoutingDecision route_baseline(Policy policy, const waves::InferenceRequest& req,
                               const std::vector<IslandPtr>& live, const CapacityLookup& capacity,
                               const mist::Sanitizer& sanitizer) {
  RoutingDecision d;
  d.candidates_considered = live.size();
  auto by_id = [](const IslandPtr& a, const IslandPtr& b) { return a->id < b->id; };
  auto admits = [&](const IslandPtr& i) { return capacity(*i).admits; };

  std::vector<IslandPtr> pool;
  switch (policy) {
    case Policy::CloudOnly: {
      for (const auto& i : live) {
        if (i->tier == TierLevel::Tier3Cloud) pool.push_back(i);
      }
      d.eligible = pool.size();
      d.island = pick(pool, [&](const IslandPtr& a, const IslandPtr& b) {
        if (a->cost_per_request != b->cost_per_request) {
          return a->cost_per_request < b->cost_per_request;
        }
        if (a->latency_ms != b->latency_ms) return a->latency_ms < b->latency_ms;
        return by_id(a, b);
      });
      d.outcome = d.island ? Outcome::Routed : Outcome::RejectedFailClosed;
      if (!d.island) d.reason = Reason::NoEligibleIsland;
      break;
    }
    case Policy::LocalOnly: {
      for (const auto& i : live) {
        if (i->is_personal()) pool.push_back(i);
      }
      d.eligible = static_cast<std::size_t>(std::count_if(pool.begin(), pool.end(), admits));
      d.island = pick(pool, [&](const IslandPtr& a, const IslandPtr& b) {
        const auto ca = capacity(*a);
        const auto cb = capacity(*b);
        if (ca.admits != cb.admits) return ca.admits;
        if (ca.available != cb.available) return ca.available > cb.available;
        if (a->latency_ms != b->latency_ms) return a->latency_ms < b->latency_ms;
        return by_id(a, b);
      });
      if (!d.island) {
        d.outcome = Outcome::RejectedFailClosed;
        d.reason = Reason::NoPersonalIsland;
      } else if (admits(d.island)) {
        d.outcome = Outcome::Routed;
      } else {
        d.outcome = Outcome::FailsafeLocal;
        d.reason = Reason::PrimaryQueued;
      }
      break;
    }
    case Policy::LatencyGreedy: {
      for (const auto& i : live) {
        if (admits(i)) pool.push_back(i);
      }
      d.eligible = pool.size();
      d.island = pick(pool, [&](const IslandPtr& a, const IslandPtr& b) {
        if (a->latency_ms != b->latency_ms) return a->latency_ms < b->latency_ms;
        return by_id(a, b);
      });
      d.outcome = d.island ? Outcome::Routed : Outcome::RejectedFailClosed;
      if (!d.island) d.reason = Reason::NoEligibleIsland;
      break;
    }
    case Policy::PrivacyOnly: {
      d.eligible = static_cast<std::size_t>(std::count_if(live.begin(), live.end(), admits));
      d.island = pick(live, [&](const IslandPtr& a, const IslandPtr& b) {
        if (a->privacy_score != b->privacy_score) return a->privacy_score > b->privacy_score;
        const bool aa = admits(a);
        const bool ab = admits(b);
        if (aa != ab) return aa;
        if (a->latency_ms != b->latency_ms) return a->latency_ms < b->latency_ms;
        return by_id(a, b);
      });
      if (!d.island) {
        d.outcome = Outcome::RejectedFailClosed;
        d.reason = Reason::NoEligibleIsland;
      } else if (admits(d.island)) {
        d.outcome = Outcome::Routed;
      } else {
        d.outcome = Outcome::FailsafeLocal;
        d.reason = Reason::PrimaryQueued;
      }
      break;
    }
    case Policy::IslandRun:
      throw std::logic_error("IslandRun is routed by waves::Router");
  }
  gate_sanitization(d, req, sanitizer);
  return d;
}

}  // namespace

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::IslandRun: return "islandrun";
    case Policy::CloudOnly: return "cloud-only";
    case Policy::LocalOnly: return "local-only";
    case Policy::LatencyGreedy: return "latency-greedy";
    case Policy::PrivacyOnly: return "privacy-only";
  }
  return "unknown";
}

std::optional<Policy> parse_policy(std::string_view text) {
  for (auto p : all_policies()) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Agent a) {
  switch (a) {
    case Agent::Mist: return "mist";
    case Agent::Tide: return "tide";
    case Agent::Lighthouse: return "lighthouse";
  }
  return "unknown";
}

std::optional<Agent> parse_agent(std::string_view text) {
  if (text == "mist") return Agent::Mist;
  if (text == "tide") return Agent::Tide;
  if (text == "lighthouse") return Agent::Lighthouse;
  return std::nullopt;
}

std::vector<Policy> all_policies() {
  return {Policy::IslandRun, Policy::CloudOnly, Policy::LocalOnly, Policy::LatencyGreedy,
          Policy::PrivacyOnly};
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const auto report = validate_config(config);
  if (!report.ok()) {
    throw ConfigError(fmt::format("scenario '{}' failed validation:\n{}", config.name,
                                  report.to_text()));
  }
  const std::uint64_t seed = options.seed.value_or(config.seed);

  auto reg = std::make_shared<registry::Registry>(config.trust_mode);
  tide::CapacityMonitor monitor;
  for (const auto& ic : config.islands) {
    const auto island = reg->register_island(ic.declaration);
    std::shared_ptr<const tide::CapacitySource> source;
    if (island->bounded && !ic.capacity_script.empty()) {
      source = std::make_shared<const tide::ScriptedSource>(config.capacity.at(ic.capacity_script).rows);
    } else if (island->bounded) {
      source = std::make_shared<const tide::ScriptedSource>(std::vector<tide::CapacityRow>{});
    } else {
      source = std::make_shared<const tide::UnboundedSource>();
    }
    monitor.add(island->id, std::move(source), ic.buffer_profile, island->bounded);
  }
  const bool no_mist = options.disabled == Agent::Mist;
  const bool no_tide = options.disabled == Agent::Tide;
  const bool no_lighthouse = options.disabled == Agent::Lighthouse;
  if (no_tide) monitor.set_all_failed(true);

  lighthouse::Coordinator mesh(reg, config.timeouts);

  // Session ids come from their own seeded stream.
  auto session_rng = std::make_shared<std::mt19937_64>(seed ^ 0x5e551011d5eedULL);
  auto session_ids = [session_rng] {
    const auto hi = (*session_rng)();
    const auto lo = (*session_rng)();
    return fmt::format("{:016x}{:016x}", hi, lo);
  };
  const auto patterns = mist::PatternSet::builtin();
  const mist::SensitivityAnalyzer analyzer(patterns);
  auto sanitizer = std::make_shared<const mist::Sanitizer>(
      std::make_shared<const mist::EntityDetector>(patterns), session_ids);

  auto router_opts = router_options(config);
  if (options.mode) router_opts.mode = *options.mode;
  if (router_opts.mode == waves::RoutingMode::ConstraintBased && !router_opts.budget) {
    throw ConfigError("constraint routing needs routing.budget in the scenario config",
                      config.routing_line);
  }
  const waves::Router router(router_opts, sanitizer);

  const auto requests = generate_workload(config.workload, seed);

  RunResult result;
  auto& m = result.metrics;
  m.scenario = config.name;
  m.policy = options.policy;
  m.disabled = options.disabled;
  m.total = requests.size();
  result.trace.reserve(requests.size());

  std::map<std::string, Conversation> conversations;
  std::map<std::string, bool> was_online;
  const tide::Tick last_tick = requests.empty() ? -1 : requests.back().tick;
  std::size_t next = 0;

  const CapacityLookup capacity = [&monitor](const registry::Island& island) {
    const auto c = monitor.latest(island.id);
    if (!c) return waves::CapacityView{0.0, false};
    return waves::CapacityView{c->snapshot.available, c->admits()};
  };

  for (tide::Tick t = 0; t <= last_tick; ++t) {
    for (const auto& island : reg->islands()) {
      const bool online = !offline_at(config, island->id, t);
      auto& prev = was_online[island->id];
      if (online && !prev) {
        mesh.announce(island->id, t);
      } else if (online) {
        mesh.heartbeat(island->id, t);
      }
      prev = online;
    }
    if (no_lighthouse && t == 0) mesh.mark_failed(true);
    mesh.prune(t);
    monitor.sample_all(t);

    std::vector<IslandPtr> live;
    for (const auto& id : mesh.get_islands(t).ids) live.push_back(reg->find(id));

    for (; next < requests.size() && requests[next].tick == t; ++next) {
      const auto& g = requests[next];
      auto& conv = conversations[g.conversation];

      const auto started = std::chrono::steady_clock::now();
      waves::InferenceRequest req;
      req.id = g.id;
      req.prompt = g.prompt;
      req.sensitivity = no_mist ? mist::SensitivityAnalyzer::fallback().score
                                : analyzer.analyze(g.prompt).score;
      req.deadline_ms = g.deadline_ms;
      req.history.turns = conv.turns;
      req.history.p_prev = conv.p_prev.value_or(1.0);
      req.tier_class = g.tier_class;
      req.required_assets = g.required_assets;

      RoutingDecision d = options.policy == Policy::IslandRun
                              ? router.route(req, live, capacity)
                              : route_baseline(options.policy, req, live, capacity, *sanitizer);
      m.decision_latency_us.push_back(std::chrono::duration<double, std::micro>(
                                          std::chrono::steady_clock::now() - started)
                                          .count());

      TraceRecord rec;
      rec.tick = t;
      rec.request = g.id;
      rec.s_r = req.sensitivity;
      rec.tier_class = g.tier_class;
      rec.eligible = d.eligible;
      rec.outcome = d.outcome;
      rec.reason = d.reason;
      rec.score = d.score;
      rec.terms = d.terms;
      rec.sanitization = d.sanitization;
      rec.history_turns = req.history.turns.size();
      rec.p_prev = req.history.p_prev;

      switch (d.outcome) {
        case Outcome::Routed: ++m.routed; break;
        case Outcome::RejectedFailClosed: ++m.rejections_fail_closed; break;
        case Outcome::FailsafeLocal: ++m.failsafe_local; break;
      }
      if (d.reason != Reason::None) ++m.reasons[std::string(waves::to_string(d.reason))];

      if (d.island) {
        const auto& island = *d.island;
        rec.island = island.id;
        rec.island_tier = registry::to_string(island.tier);
        rec.cost = island.cost_per_request;
        rec.violation = island.privacy_score < req.sensitivity;
        if (rec.violation) {
          ++m.privacy_violations;
          if (options.policy == Policy::IslandRun) {
            throw PrivacyViolationError(fmt::format(
                "request {} (s_r {}) dispatched to '{}' with privacy {} at tick {}", g.id,
                req.sensitivity, island.id, island.privacy_score, t));
          }
        }
        if (d.outcome == Outcome::Routed) ++m.routed_per_tier[rec.island_tier];
        ++m.served_per_island[island.id];
        m.total_cost += island.cost_per_request;
        if (island.tier == TierLevel::Tier3Cloud) m.cloud_cost += island.cost_per_request;
        if (island.is_personal()) ++m.local_served;

        if (d.sanitization == waves::Sanitization::Applied) {
          ++m.sanitization_applied;
          rec.placeholders = d.sanitized->map.size();
          rec.map_id = d.sanitized->map.session_id();
          // The simulated island echoes the sanitized context back; restoring
          // it must reproduce the original history.
          for (std::size_t i = 0; i < d.sanitized->turns.size(); ++i) {
            const auto restored = mist::desanitize(d.sanitized->turns[i], d.sanitized->map);
            if (restored.text != req.history.turns[i] || !restored.unknown_placeholders.empty()) {
              ++m.desanitize_mismatches;
            }
          }
        } else {
          ++m.sanitization_bypassed;
        }
        conv.p_prev = std::max(conv.p_prev.value_or(0.0), island.privacy_score);
      }
      conv.turns.push_back(g.prompt);
      result.trace.push_back(std::move(rec));
    }
  }
  return result;
}

std::vector<RunResult> compare_policies(const ScenarioConfig& config, const RunOptions& options) {
  std::vector<RunResult> results;
  for (auto p : all_policies()) {
    auto o = options;
    o.policy = p;
    results.push_back(run_scenario(config, o));
  }
  return results;
}

std::string format_trace_line(const TraceRecord& r) {
  auto str = [](std::string_view s) { return nlohmann::json(std::string(s)).dump(); };
  return fmt::format(
      "{{\"tick\":{},\"request\":{},\"s_r\":{},\"tier_class\":\"{}\",\"eligible\":{},"
      "\"outcome\":\"{}\",\"island\":{},\"island_tier\":{},\"reason\":\"{}\",\"score\":{},"
      "\"c_norm\":{},\"l_norm\":{},\"p_term\":{},\"sanitization\":\"{}\",\"history_turns\":{},"
      "\"p_prev\":{},\"placeholders\":{},\"map_id\":{},\"cost\":{},\"violation\":{}}}",
      r.tick, str(r.request), r.s_r, waves::to_string(r.tier_class), r.eligible,
      waves::to_string(r.outcome), str(r.island), str(r.island_tier), waves::to_string(r.reason),
      r.score, r.terms.c_norm, r.terms.l_norm, r.terms.p_term, waves::to_string(r.sanitization),
      r.history_turns, r.p_prev, r.placeholders, str(r.map_id), r.cost, r.violation);
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  for (const auto& r : trace) out << format_trace_line(r) << '\n';
}

}  // namespace islandrun::harness
