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

// Island catalog: registration, trust composition, tiers and hosted data assets.

#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace islandrun::registry {

enum class TierLevel { Tier1Personal, Tier2PrivateEdge, Tier3Cloud };

std::string_view to_string(TierLevel tier);
std::optional<TierLevel> parse_tier(std::string_view text);

enum class AssetKind { VectorIndex, FineTunedModel, FileStore };

std::string_view to_string(AssetKind kind);
std::optional<AssetKind> parse_asset_kind(std::string_view text);

struct DataAssetId {
  std::string id;
  AssetKind kind = AssetKind::VectorIndex;

  friend bool operator==(const DataAssetId&, const DataAssetId&) = default;
};

// Owner-declared trust components, each in [0,1].
struct TrustInputs {
  double base = 1.0;
  double certification = 1.0;
  double jurisdiction = 1.0;
};

// Reference values an owner can declare by name.
namespace trust {
inline constexpr double kBaseLocal = 1.0;
inline constexpr double kBasePrivateEdge = 0.8;
inline constexpr double kBasePublicCloud = 0.5;
inline constexpr double kCertIso27001 = 1.0;
inline constexpr double kCertSoc2 = 0.9;
inline constexpr double kCertSelf = 0.7;
inline constexpr double kJurisdictionSameCountry = 1.0;
inline constexpr double kJurisdictionEuGdpr = 0.9;
inline constexpr double kJurisdictionForeign = 0.6;
}  // namespace trust

enum class TrustMode { Min, Product };

std::string_view to_string(TrustMode mode);
std::optional<TrustMode> parse_trust_mode(std::string_view text);

// Min: min(base, cert, jurisdiction). Product: base * cert * jurisdiction.
// Throws ValidationError if any component lies outside [0,1].
double compose_trust(const TrustInputs& inputs, TrustMode mode);

// Closed trust interval each tier must fall into.
struct TrustRange {
  double lo;
  double hi;
};
TrustRange trust_range(TierLevel tier);

enum class CostModel { Flat, Variable };

// Raw declaration as supplied by the island owner (config file, bindings).
struct IslandDeclaration {
  std::string id;
  std::string name;
  TierLevel tier = TierLevel::Tier1Personal;
  double latency_ms = 0.0;
  double cost_per_request = 0.0;
  CostModel cost_model = CostModel::Flat;
  double privacy_score = 1.0;
  TrustInputs trust;
  std::vector<DataAssetId> assets;
  // Name of the capacity source in the scenario (defaults to the island id).
  std::string capacity_profile;
};

// A validated catalog entry. Immutable after registration.
struct Island {
  std::string id;
  std::string name;
  double latency_ms;
  double cost_per_request;
  double privacy_score;
  double trust_score;
  TierLevel tier;
  std::vector<DataAssetId> assets;
  std::string capacity_profile;
  bool bounded;

  bool is_personal() const noexcept { return tier == TierLevel::Tier1Personal; }
  bool hosts(std::string_view asset_id) const noexcept;
};

using IslandPtr = std::shared_ptr<const Island>;

// Validates a declaration and builds the immutable Island. Throws
// RegistrationError describing the first violated rule. Does not touch any
// catalog.
Island make_island(const IslandDeclaration& decl, TrustMode mode);

// Every rule a declaration violates, empty when admissible.
std::vector<std::string> check_declaration(const IslandDeclaration& decl, TrustMode mode);

// Thread-safe island catalog. Readers share; registration is exclusive.
class Registry {
 public:
  explicit Registry(TrustMode mode = TrustMode::Min) : mode_(mode) {}

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  TrustMode trust_mode() const noexcept { return mode_; }

  // Throws RegistrationError (tier/trust, cost, ranges) or ConflictError
  // (duplicate id). A failed registration leaves the catalog unchanged.
  IslandPtr register_island(const IslandDeclaration& decl);

  IslandPtr find(std::string_view id) const;
  bool contains(std::string_view id) const;

  // Catalog order (registration order).
  std::vector<IslandPtr> islands() const;
  std::vector<IslandPtr> islands_hosting(std::string_view asset_id) const;
  std::vector<IslandPtr> islands_hosting(const DataAssetId& asset) const {
    return islands_hosting(asset.id);
  }

  std::size_t size() const;

 private:
  TrustMode mode_;
  mutable std::shared_mutex mutex_;
  std::vector<IslandPtr> islands_;
};

}  // namespace islandrun::registry
