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

#include "islandrun/waves.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "islandrun/errors.hpp"

namespace islandrun::waves {
namespace {

constexpr double kWeightSlack = 1e-9;

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

bool hosts_all(const Island& island, const std::vector<std::string>& assets) {
  return std::all_of(assets.begin(), assets.end(),
                     [&](const std::string& a) { return island.hosts(a); });
}

// Strict weak order implementing the argmin tie-break: score, then higher
// privacy, then lower latency, then id.
bool better(double sa, const Island& a, double sb, const Island& b) {
  if (sa != sb) return sa < sb;
  if (a.privacy_score != b.privacy_score) return a.privacy_score > b.privacy_score;
  if (a.latency_ms != b.latency_ms) return a.latency_ms < b.latency_ms;
  return a.id < b.id;
}

Terms raw_terms(const Island& island) {
  return {island.cost_per_request, island.latency_ms, 1.0 - island.privacy_score};
}

}  // namespace

std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::TextGeneration: return "text_generation";
    case Modality::ImageSynthesis: return "image_synthesis";
    case Modality::CodeCompletion: return "code_completion";
  }
  return "unknown";
}

std::optional<Modality> parse_modality(std::string_view text) {
  if (text == "text_generation") return Modality::TextGeneration;
  if (text == "image_synthesis") return Modality::ImageSynthesis;
  if (text == "code_completion") return Modality::CodeCompletion;
  return std::nullopt;
}

std::string_view to_string(TierClass c) {
  switch (c) {
    case TierClass::Primary: return "primary";
    case TierClass::Secondary: return "secondary";
    case TierClass::Burstable: return "burstable";
  }
  return "unknown";
}

std::optional<TierClass> parse_tier_class(std::string_view text) {
  if (text == "primary") return TierClass::Primary;
  if (text == "secondary") return TierClass::Secondary;
  if (text == "burstable") return TierClass::Burstable;
  return std::nullopt;
}

std::string_view to_string(RoutingMode m) {
  return m == RoutingMode::Scalarized ? "scalarized" : "constraint";
}

std::optional<RoutingMode> parse_routing_mode(std::string_view text) {
  if (text == "scalarized") return RoutingMode::Scalarized;
  if (text == "constraint") return RoutingMode::ConstraintBased;
  return std::nullopt;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Routed: return "routed";
    case Outcome::RejectedFailClosed: return "rejected";
    case Outcome::FailsafeLocal: return "failsafe_local";
  }
  return "unknown";
}

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::None: return "none";
    case Reason::PrivacyUnsatisfiable: return "privacy_unsatisfiable";
    case Reason::NoPersonalIsland: return "no_personal_island";
    case Reason::NoEligibleIsland: return "no_eligible_island";
    case Reason::PrimaryQueued: return "primary_queued";
    case Reason::LocalFailsafe: return "local_failsafe";
  }
  return "unknown";
}

std::string_view to_string(Sanitization s) {
  switch (s) {
    case Sanitization::None: return "none";
    case Sanitization::Bypassed: return "bypassed";
    case Sanitization::Applied: return "applied";
  }
  return "unknown";
}

void validate(const InferenceRequest& request) {
  if (!in_unit(request.sensitivity)) {
    throw ValidationError(
        fmt::format("request '{}': sensitivity must lie in [0,1], got {}", request.id,
                    request.sensitivity));
  }
  if (!std::isfinite(request.deadline_ms) || request.deadline_ms <= 0.0) {
    throw ValidationError(fmt::format("request '{}': deadline must be > 0 ms, got {}", request.id,
                                      request.deadline_ms));
  }
  if (!in_unit(request.history.p_prev)) {
    throw ValidationError(fmt::format("request '{}': history privacy must lie in [0,1], got {}",
                                      request.id, request.history.p_prev));
  }
}

bool is_normalized(const Weights& w) {
  return w.cost >= 0.0 && w.latency >= 0.0 && w.privacy >= 0.0 &&
         std::abs(w.cost + w.latency + w.privacy - 1.0) <= kWeightSlack;
}

Weights normalize(const Weights& w) {
  if (!std::isfinite(w.cost) || !std::isfinite(w.latency) || !std::isfinite(w.privacy) ||
      w.cost < 0.0 || w.latency < 0.0 || w.privacy < 0.0) {
    throw ValidationError(fmt::format("weights must be >= 0, got ({}, {}, {})", w.cost, w.latency,
                                      w.privacy));
  }
  const double sum = w.cost + w.latency + w.privacy;
  if (sum <= 0.0) throw ValidationError("weights must not all be zero");
  return {w.cost / sum, w.latency / sum, w.privacy / sum};
}

Terms normalize_terms(const Island& island, std::span<const IslandPtr> candidates,
                      const InferenceRequest& request) {
  double max_cost = 0.0;
  for (const auto& c : candidates) max_cost = std::max(max_cost, c->cost_per_request);
  Terms t;
  t.c_norm = max_cost > 0.0 ? island.cost_per_request / max_cost : 0.0;
  t.l_norm = std::min(island.latency_ms / request.deadline_ms, 1.0);
  t.p_term = 1.0 - island.privacy_score;
  return t;
}

double score(const Terms& t, const Weights& w) {
  return w.cost * t.c_norm + w.latency * t.l_norm + w.privacy * t.p_term;
}

double score(const InferenceRequest& request, const Island& island,
             std::span<const IslandPtr> candidates, const Weights& w) {
  return score(normalize_terms(island, candidates, request), w);
}

std::vector<IslandPtr> filter_eligible(const InferenceRequest& request,
                                       std::span<const IslandPtr> catalog,
                                       const CapacityLookup& capacity) {
  std::vector<IslandPtr> out;
  for (const auto& island : catalog) {
    if (island->privacy_score < request.sensitivity) continue;
    if (!hosts_all(*island, request.required_assets)) continue;
    if (!capacity(*island).admits) continue;
    out.push_back(island);
  }
  return out;
}

bool personal_allowed(TierClass c, double r) {
  switch (c) {
    case TierClass::Primary: return true;
    case TierClass::Secondary: return r > 0.50;
    case TierClass::Burstable: return r > 0.80;
  }
  return false;
}

std::vector<IslandPtr> apply_tier_policy(const InferenceRequest& request,
                                         std::span<const IslandPtr> eligible,
                                         const CapacityLookup& capacity) {
  std::vector<IslandPtr> personal;
  std::vector<IslandPtr> other;
  for (const auto& island : eligible) {
    if (!island->is_personal()) {
      other.push_back(island);
    } else if (personal_allowed(request.tier_class, capacity(*island).available)) {
      personal.push_back(island);
    }
  }
  if (request.tier_class == TierClass::Primary) return personal;

  std::vector<IslandPtr> out;
  for (const auto& island : eligible) {
    const bool keep = island->is_personal()
                          ? std::find(personal.begin(), personal.end(), island) != personal.end()
                          : true;
    if (keep) out.push_back(island);
  }
  return out;
}

std::vector<IslandPtr> apply_tier_policy(const InferenceRequest& request,
                                         std::span<const IslandPtr> eligible, double local_r) {
  return apply_tier_policy(request, eligible,
                           [local_r](const Island&) { return CapacityView{local_r, true}; });
}

void validate(const RouterOptions& options) {
  if (!is_normalized(options.weights)) {
    throw ValidationError(fmt::format("weights ({}, {}, {}) must be >= 0 and sum to 1",
                                      options.weights.cost, options.weights.latency,
                                      options.weights.privacy));
  }
  if (options.mode == RoutingMode::ConstraintBased) {
    if (!options.budget) throw ValidationError("constraint-based routing needs a budget");
    if (!std::isfinite(*options.budget) || *options.budget < 0.0) {
      throw ValidationError(fmt::format("budget must be >= 0, got {}", *options.budget));
    }
  }
}

bool needs_sanitization(const History& history, const Island& target) {
  if (history.turns.empty() || target.privacy_score >= 1.0) return false;
  return target.tier == registry::TierLevel::Tier3Cloud || history.p_prev > target.privacy_score;
}

Router::Router(RouterOptions options, std::shared_ptr<const mist::Sanitizer> sanitizer)
    : options_(std::move(options)), sanitizer_(std::move(sanitizer)) {
  validate(options_);
}

RoutingDecision Router::route(const InferenceRequest& request, std::span<const IslandPtr> catalog,
                              const CapacityLookup& capacity) const {
  const auto started = std::chrono::steady_clock::now();
  validate(request);

  RoutingDecision d;
  d.candidates_considered = catalog.size();

  auto finish = [&](RoutingDecision& out) -> RoutingDecision {
    if (out.island) {
      if (needs_sanitization(request.history, *out.island)) {
        out.sanitization = Sanitization::Applied;
        out.sanitized = sanitizer_->sanitize(request.history.turns, out.island->privacy_score);
      } else {
        out.sanitization = Sanitization::Bypassed;
      }
    }
    out.decision_latency_us = std::chrono::duration<double, std::micro>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
    return std::move(out);
  };

  const bool privacy_satisfiable =
      std::any_of(catalog.begin(), catalog.end(),
                  [&](const IslandPtr& i) { return i->privacy_score >= request.sensitivity; });
  if (!privacy_satisfiable) {
    d.outcome = Outcome::RejectedFailClosed;
    d.reason = Reason::PrivacyUnsatisfiable;
    return finish(d);
  }

  auto candidates = apply_tier_policy(request, filter_eligible(request, catalog, capacity), capacity);
  if (options_.mode == RoutingMode::ConstraintBased) {
    std::erase_if(candidates,
                  [&](const IslandPtr& i) { return i->cost_per_request > *options_.budget; });
  }
  d.eligible = candidates.size();

  auto terms_of = [&](const Island& island, std::span<const IslandPtr> set) {
    return options_.score_mode == ScoreMode::RawSum ? raw_terms(island)
                                                    : normalize_terms(island, set, request);
  };

  if (!candidates.empty()) {
    const Island* best = nullptr;
    double best_score = 0.0;
    Terms best_terms;
    for (const auto& island : candidates) {
      const Terms t = terms_of(*island, candidates);
      const double s = score(t, options_.weights);
      bool take = best == nullptr;
      if (!take && options_.mode == RoutingMode::Scalarized) {
        take = better(s, *island, best_score, *best);
      } else if (!take) {
        // Minimum latency; remaining ties as in the scalarized order.
        take = better(island->latency_ms, *island, best->latency_ms, *best);
      }
      if (take) {
        best = island.get();
        best_score = s;
        best_terms = t;
      }
    }
    for (const auto& island : candidates) {
      if (island.get() == best) d.island = island;
    }
    d.outcome = Outcome::Routed;
    d.score = best_score;
    d.terms = best_terms;
    return finish(d);
  }

  // Nothing survived the filters. A personal island may still take the
  // request locally; otherwise it is rejected.
  IslandPtr fallback;
  double fallback_r = -1.0;
  bool fallback_hosts = false;
  for (const auto& island : catalog) {
    if (!island->is_personal() || island->privacy_score < request.sensitivity) continue;
    const bool hosts = hosts_all(*island, request.required_assets);
    const double r = capacity(*island).available;
    bool take = !fallback;
    if (!take && hosts != fallback_hosts) take = hosts;
    else if (!take && r != fallback_r) take = r > fallback_r;
    else if (!take) take = better(0.0, *island, 0.0, *fallback);
    if (take) {
      fallback = island;
      fallback_r = r;
      fallback_hosts = hosts;
    }
  }

  if (!fallback) {
    d.outcome = Outcome::RejectedFailClosed;
    d.reason = request.tier_class == TierClass::Primary ? Reason::NoPersonalIsland
                                                        : Reason::NoEligibleIsland;
    return finish(d);
  }
  d.outcome = Outcome::FailsafeLocal;
  d.reason = request.tier_class == TierClass::Primary ? Reason::PrimaryQueued
                                                      : Reason::LocalFailsafe;
  d.island = fallback;
  const IslandPtr single[] = {fallback};
  d.terms = terms_of(*fallback, single);
  d.score = score(d.terms, options_.weights);
  return finish(d);
}

}  // namespace islandrun::waves
