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

#include "islandrun/registry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fmt/format.h>

#include "islandrun/errors.hpp"

namespace islandrun::registry {
namespace {

// Composed scores land on range edges through floating-point products
// (0.8 * 1.0 * 1.0, 0.5 * 0.9 * ...).
constexpr double kRangeSlack = 1e-9;

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

std::string_view to_string(TierLevel tier) {
  switch (tier) {
    case TierLevel::Tier1Personal: return "tier1";
    case TierLevel::Tier2PrivateEdge: return "tier2";
    case TierLevel::Tier3Cloud: return "tier3";
  }
  return "unknown";
}

std::optional<TierLevel> parse_tier(std::string_view text) {
  if (text == "tier1" || text == "personal" || text == "1") return TierLevel::Tier1Personal;
  if (text == "tier2" || text == "private_edge" || text == "2") return TierLevel::Tier2PrivateEdge;
  if (text == "tier3" || text == "cloud" || text == "3") return TierLevel::Tier3Cloud;
  return std::nullopt;
}

std::string_view to_string(AssetKind kind) {
  switch (kind) {
    case AssetKind::VectorIndex: return "vector_index";
    case AssetKind::FineTunedModel: return "fine_tuned_model";
    case AssetKind::FileStore: return "file_store";
  }
  return "unknown";
}

std::optional<AssetKind> parse_asset_kind(std::string_view text) {
  if (text == "vector_index") return AssetKind::VectorIndex;
  if (text == "fine_tuned_model") return AssetKind::FineTunedModel;
  if (text == "file_store") return AssetKind::FileStore;
  return std::nullopt;
}

std::string_view to_string(TrustMode mode) {
  return mode == TrustMode::Min ? "min" : "product";
}

std::optional<TrustMode> parse_trust_mode(std::string_view text) {
  if (text == "min") return TrustMode::Min;
  if (text == "product") return TrustMode::Product;
  return std::nullopt;
}

double compose_trust(const TrustInputs& in, TrustMode mode) {
  if (!in_unit(in.base) || !in_unit(in.certification) || !in_unit(in.jurisdiction)) {
    throw ValidationError(fmt::format("trust components must lie in [0,1], got ({}, {}, {})",
                                      in.base, in.certification, in.jurisdiction));
  }
  if (mode == TrustMode::Min) {
    return std::min({in.base, in.certification, in.jurisdiction});
  }
  return in.base * in.certification * in.jurisdiction;
}

TrustRange trust_range(TierLevel tier) {
  switch (tier) {
    case TierLevel::Tier1Personal: return {1.0, 1.0};
    case TierLevel::Tier2PrivateEdge: return {0.6, 0.8};
    case TierLevel::Tier3Cloud: return {0.3, 0.5};
  }
  return {0.0, 1.0};
}

bool Island::hosts(std::string_view asset_id) const noexcept {
  return std::any_of(assets.begin(), assets.end(),
                     [&](const DataAssetId& a) { return a.id == asset_id; });
}

std::vector<std::string> check_declaration(const IslandDeclaration& decl, TrustMode mode) {
  std::vector<std::string> problems;
  if (decl.id.empty()) problems.emplace_back("island id must not be empty");
  if (!std::isfinite(decl.latency_ms) || decl.latency_ms < 0.0) {
    problems.push_back(fmt::format("latency_ms must be >= 0, got {}", decl.latency_ms));
  }
  if (!std::isfinite(decl.cost_per_request) || decl.cost_per_request < 0.0) {
    problems.push_back(
        fmt::format("cost_per_request must be >= 0, got {}", decl.cost_per_request));
  }
  if (decl.cost_model == CostModel::Variable) {
    problems.emplace_back("variable cost models are not supported; declare a flat per-request cost");
  }
  if (!in_unit(decl.privacy_score)) {
    problems.push_back(fmt::format("privacy_score must lie in [0,1], got {}", decl.privacy_score));
  }

  double trust = 0.0;
  bool trust_ok = true;
  try {
    trust = compose_trust(decl.trust, mode);
  } catch (const ValidationError& e) {
    problems.emplace_back(e.what());
    trust_ok = false;
  }
  if (trust_ok) {
    const auto range = trust_range(decl.tier);
    if (trust < range.lo - kRangeSlack || trust > range.hi + kRangeSlack) {
      problems.push_back(fmt::format("{} requires trust in [{}, {}], composed trust is {}",
                                     to_string(decl.tier), range.lo, range.hi, trust));
    }
  }

  if (decl.tier == TierLevel::Tier1Personal) {
    if (decl.cost_per_request != 0.0) {
      problems.push_back(
          fmt::format("tier1 islands are zero-cost, got cost_per_request {}", decl.cost_per_request));
    }
    if (decl.privacy_score != 1.0) {
      problems.push_back(
          fmt::format("tier1 islands declare privacy_score 1.0, got {}", decl.privacy_score));
    }
  }
  if (decl.tier == TierLevel::Tier3Cloud && decl.privacy_score >= 1.0) {
    problems.emplace_back("tier3 islands cannot declare privacy_score 1.0");
  }

  for (std::size_t i = 0; i < decl.assets.size(); ++i) {
    if (decl.assets[i].id.empty()) problems.emplace_back("asset id must not be empty");
    for (std::size_t j = 0; j < i; ++j) {
      if (decl.assets[j].id == decl.assets[i].id) {
        problems.push_back(fmt::format("asset '{}' listed twice", decl.assets[i].id));
      }
    }
  }
  return problems;
}

Island make_island(const IslandDeclaration& decl, TrustMode mode) {
  auto problems = check_declaration(decl, mode);
  if (!problems.empty()) {
    throw RegistrationError(fmt::format("island '{}': {}", decl.id, problems.front()));
  }
  Island island{
      .id = decl.id,
      .name = decl.name.empty() ? decl.id : decl.name,
      .latency_ms = decl.latency_ms,
      .cost_per_request = decl.cost_per_request,
      .privacy_score = decl.privacy_score,
      .trust_score = compose_trust(decl.trust, mode),
      .tier = decl.tier,
      .assets = decl.assets,
      .capacity_profile = decl.capacity_profile.empty() ? decl.id : decl.capacity_profile,
      .bounded = decl.tier != TierLevel::Tier3Cloud,
  };
  return island;
}

IslandPtr Registry::register_island(const IslandDeclaration& decl) {
  auto island = std::make_shared<const Island>(make_island(decl, mode_));
  std::unique_lock lock(mutex_);
  for (const auto& existing : islands_) {
    if (existing->id == island->id) {
      throw ConflictError(fmt::format("island '{}' is already registered", island->id));
    }
  }
  islands_.push_back(island);
  return island;
}

IslandPtr Registry::find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  for (const auto& island : islands_) {
    if (island->id == id) return island;
  }
  return nullptr;
}

bool Registry::contains(std::string_view id) const { return find(id) != nullptr; }

std::vector<IslandPtr> Registry::islands() const {
  std::shared_lock lock(mutex_);
  return islands_;
}

std::vector<IslandPtr> Registry::islands_hosting(std::string_view asset_id) const {
  std::shared_lock lock(mutex_);
  std::vector<IslandPtr> out;
  for (const auto& island : islands_) {
    if (island->hosts(asset_id)) out.push_back(island);
  }
  return out;
}

std::size_t Registry::size() const {
  std::shared_lock lock(mutex_);
  return islands_.size();
}

}  // namespace islandrun::registry
