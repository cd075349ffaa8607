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
#include <array>

#include "islandrun/mist.hpp"
#include "mist_internal.hpp"

namespace islandrun::mist {
namespace {

constexpr std::array<std::string_view, kEntityKindCount> kKindNames = {
    "PERSON", "LOCATION", "ID", "ORG", "MEDICAL_CONDITION", "TEMPORAL_REFERENCE", "FINANCIAL",
};

}  // namespace

std::string_view to_string(EntityKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<EntityKind>(i);
  }
  return std::nullopt;
}

EntityDetector::EntityDetector(std::shared_ptr<const PatternSet> patterns)
    : patterns_(std::move(patterns)) {
  for (const auto& rule : patterns_->rules()) {
    if (rule.use == RuleUse::Entity) rules_.push_back(&rule);
  }
}

std::vector<Entity> EntityDetector::detect(std::string_view text) const {
  std::vector<Entity> candidates;
  for (const auto* rule : rules_) {
    detail::for_each_match(*rule, text, [&](std::size_t begin, std::size_t end) {
      candidates.push_back({*rule->entity, begin, end, {}});
    });
  }

  std::sort(candidates.begin(), candidates.end(), [](const Entity& a, const Entity& b) {
    const auto la = a.end - a.begin;
    const auto lb = b.end - b.begin;
    if (la != lb) return la > lb;
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.kind < b.kind;
  });

  std::vector<Entity> accepted;
  for (auto& c : candidates) {
    const bool overlaps = std::any_of(accepted.begin(), accepted.end(), [&](const Entity& e) {
      return c.begin < e.end && e.begin < c.end;
    });
    if (!overlaps) accepted.push_back(std::move(c));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Entity& a, const Entity& b) { return a.begin < b.begin; });
  for (auto& e : accepted) e.surface = std::string(text.substr(e.begin, e.end - e.begin));
  return accepted;
}

}  // namespace islandrun::mist
