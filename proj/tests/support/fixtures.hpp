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

// Island declarations shared by the unit and acceptance tests.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "islandrun/registry.hpp"

namespace islandrun::testing {

inline registry::IslandDeclaration personal(std::string id, double latency_ms,
                                            std::vector<registry::DataAssetId> assets = {}) {
  registry::IslandDeclaration d;
  d.id = std::move(id);
  d.tier = registry::TierLevel::Tier1Personal;
  d.latency_ms = latency_ms;
  d.privacy_score = 1.0;
  d.assets = std::move(assets);
  return d;
}

inline registry::IslandDeclaration edge(std::string id, double latency_ms, double cost,
                                        double privacy,
                                        std::vector<registry::DataAssetId> assets = {}) {
  registry::IslandDeclaration d;
  d.id = std::move(id);
  d.tier = registry::TierLevel::Tier2PrivateEdge;
  d.latency_ms = latency_ms;
  d.cost_per_request = cost;
  d.privacy_score = privacy;
  d.trust = {0.8, 1.0, 1.0};
  d.assets = std::move(assets);
  return d;
}

inline registry::IslandDeclaration cloud(std::string id, double latency_ms, double cost,
                                         double privacy) {
  registry::IslandDeclaration d;
  d.id = std::move(id);
  d.tier = registry::TierLevel::Tier3Cloud;
  d.latency_ms = latency_ms;
  d.cost_per_request = cost;
  d.privacy_score = privacy;
  d.trust = {0.5, 0.9, 0.6};
  return d;
}

inline registry::IslandPtr make(const registry::IslandDeclaration& d) {
  return std::make_shared<const registry::Island>(
      registry::make_island(d, registry::TrustMode::Min));
}

}  // namespace islandrun::testing
