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

// Multi-objective router: eligibility filtering, composite scoring, tier
// policy and the sanitization gate.

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "islandrun/mist.hpp"
#include "islandrun/registry.hpp"

namespace islandrun::waves {

using registry::Island;
using registry::IslandPtr;

enum class Modality { TextGeneration, ImageSynthesis, CodeCompletion };
enum class TierClass { Primary, Secondary, Burstable };

std::string_view to_string(Modality m);
std::optional<Modality> parse_modality(std::string_view text);
std::string_view to_string(TierClass c);
std::optional<TierClass> parse_tier_class(std::string_view text);

struct History {
  std::vector<std::string> turns;
  // Privacy score of the island that produced the turns.
  double p_prev = 1.0;
};

struct InferenceRequest {
  std::string id;
  std::string prompt;
  Modality modality = Modality::TextGeneration;  // carried, not used by routing
  double sensitivity = 1.0;
  double deadline_ms = 1000.0;
  History history;
  TierClass tier_class = TierClass::Secondary;
  std::vector<std::string> required_assets;
};

// Throws ValidationError on s_r outside [0,1], d_r <= 0 or P_prev outside [0,1].
void validate(const InferenceRequest& request);

struct Weights {
  double cost = 0.0;
  double latency = 0.0;
  double privacy = 0.0;

  friend bool operator==(const Weights&, const Weights&) = default;
};

// Sum within 1e-9 of 1 and all components >= 0.
bool is_normalized(const Weights& w);
// Divides by the sum. Throws ValidationError for negative components or a
// zero sum.
Weights normalize(const Weights& w);

struct Terms {
  double c_norm = 0.0;
  double l_norm = 0.0;
  double p_term = 0.0;
};

// c_norm = C_j / max candidate cost (0 when every candidate is free),
// l_norm = min(L_j / d_r, 1), p_term = 1 - P_j.
Terms normalize_terms(const Island& island, std::span<const IslandPtr> candidates,
                      const InferenceRequest& request);

double score(const Terms& terms, const Weights& w);
double score(const InferenceRequest& request, const Island& island,
             std::span<const IslandPtr> candidates, const Weights& w);

// Capacity as seen by the router for one island.
struct CapacityView {
  double available = 1.0;  // R_j(t)
  bool admits = true;      // capacity gate
};
using CapacityLookup = std::function<CapacityView(const Island&)>;

// Every island of `catalog` with P_j >= s_r, hosting all required assets and
// passing its capacity gate. Catalog order is preserved.
std::vector<IslandPtr> filter_eligible(const InferenceRequest& request,
                                       std::span<const IslandPtr> catalog,
                                       const CapacityLookup& capacity);

// Whether a personal island with available capacity `r` may serve `c`.
// Primary: always. Secondary: r > 0.50. Burstable: r > 0.80.
bool personal_allowed(TierClass c, double r);

// Primary keeps personal islands only. Secondary and Burstable keep personal
// islands whose own R passes personal_allowed(); when none does, the result is
// the non-personal eligibles.
std::vector<IslandPtr> apply_tier_policy(const InferenceRequest& request,
                                         std::span<const IslandPtr> eligible,
                                         const CapacityLookup& capacity);
// Single local capacity R applied to every personal island.
std::vector<IslandPtr> apply_tier_policy(const InferenceRequest& request,
                                         std::span<const IslandPtr> eligible, double local_r);

enum class RoutingMode { Scalarized, ConstraintBased };
// Normalized: the terms above. RawSum: S = w1*C + w2*L + w3*(1-P) on raw units.
enum class ScoreMode { Normalized, RawSum };

std::string_view to_string(RoutingMode m);
std::optional<RoutingMode> parse_routing_mode(std::string_view text);

enum class Outcome { Routed, RejectedFailClosed, FailsafeLocal };

enum class Reason {
  None,
  PrivacyUnsatisfiable,  // no island in the catalog has P_j >= s_r
  NoPersonalIsland,      // Primary request and no personal island in the catalog
  NoEligibleIsland,      // filters emptied the set and no personal island can take over
  PrimaryQueued,         // Primary request held on a personal island lacking capacity
  LocalFailsafe,         // filters emptied the set; a personal island takes the request
};

enum class Sanitization { None, Bypassed, Applied };

std::string_view to_string(Outcome o);
std::string_view to_string(Reason r);
std::string_view to_string(Sanitization s);

struct RoutingDecision {
  Outcome outcome = Outcome::RejectedFailClosed;
  Reason reason = Reason::None;
  IslandPtr island;  // chosen island for Routed and FailsafeLocal
  double score = 0.0;
  Terms terms;
  Sanitization sanitization = Sanitization::None;
  std::optional<mist::SanitizedHistory> sanitized;  // set when Applied
  std::size_t candidates_considered = 0;  // catalog size
  std::size_t eligible = 0;               // after filtering and tier policy
  double decision_latency_us = 0.0;

  bool routed() const noexcept { return outcome == Outcome::Routed; }
  // Session id of the placeholder map, empty unless Applied.
  std::string map_id() const { return sanitized ? sanitized->map.session_id() : std::string{}; }
};

struct RouterOptions {
  Weights weights;
  RoutingMode mode = RoutingMode::Scalarized;
  ScoreMode score_mode = ScoreMode::Normalized;
  std::optional<double> budget;  // required for ConstraintBased
};

// Throws ValidationError for unnormalized weights or a missing/negative budget
// in ConstraintBased mode.
void validate(const RouterOptions& options);

// Sanitization is needed iff history is nonempty and the target is Tier 3 or
// less private than the island that produced the history.
bool needs_sanitization(const History& history, const Island& target);

class Router {
 public:
  explicit Router(RouterOptions options,
                  std::shared_ptr<const mist::Sanitizer> sanitizer =
                      std::make_shared<const mist::Sanitizer>());

  // Reentrant. `catalog` is the set of islands currently reachable.
  RoutingDecision route(const InferenceRequest& request, std::span<const IslandPtr> catalog,
                        const CapacityLookup& capacity) const;

  const RouterOptions& options() const noexcept { return options_; }

 private:
  RouterOptions options_;
  std::shared_ptr<const mist::Sanitizer> sanitizer_;
};

}  // namespace islandrun::waves
