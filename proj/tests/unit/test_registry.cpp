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

#include <cmath>

#include <gtest/gtest.h>

#include "islandrun/errors.hpp"
#include "islandrun/registry.hpp"
#include "support/fixtures.hpp"

namespace islandrun::registry {
namespace {

using testing::cloud;
using testing::edge;
using testing::personal;

TEST(ComposeTrust, MinOfComponents) {
  EXPECT_EQ(compose_trust({1.0, 1.0, 1.0}, TrustMode::Min), 1.0);
  EXPECT_EQ(compose_trust({1.0, 0.9, 0.6}, TrustMode::Min), 0.6);
}

TEST(ComposeTrust, ProductOfComponents) {
  EXPECT_NEAR(compose_trust({0.8, 0.9, 0.9}, TrustMode::Product), 0.648, 1e-12);
  EXPECT_EQ(compose_trust({1.0, 1.0, 1.0}, TrustMode::Product), 1.0);
}

TEST(ComposeTrust, RejectsOutOfRangeComponents) {
  EXPECT_THROW(compose_trust({1.1, 1.0, 1.0}, TrustMode::Min), ValidationError);
  EXPECT_THROW(compose_trust({1.0, -0.1, 1.0}, TrustMode::Product), ValidationError);
  EXPECT_THROW(compose_trust({1.0, 1.0, std::nan("")}, TrustMode::Min), ValidationError);
}

TEST(ComposeTrust, ModeNamesRoundTrip) {
  EXPECT_EQ(parse_trust_mode(to_string(TrustMode::Product)), TrustMode::Product);
  EXPECT_EQ(parse_trust_mode("min"), TrustMode::Min);
  EXPECT_FALSE(parse_trust_mode("average"));
}

TEST(Registry, RegistersLaptop) {
  Registry reg;
  auto laptop = reg.register_island(personal("laptop", 120));
  EXPECT_EQ(laptop->trust_score, 1.0);
  EXPECT_TRUE(laptop->bounded);
  EXPECT_TRUE(laptop->is_personal());
  EXPECT_EQ(laptop->name, "laptop");
}

TEST(Registry, RegistersCloudWithProductTrust) {
  Registry reg(TrustMode::Product);
  auto d = cloud("cloud-api", 500, 0.03, 0.4);
  d.trust = {0.5, 0.9, 1.0};
  auto island = reg.register_island(d);
  EXPECT_NEAR(island->trust_score, 0.45, 1e-12);
  EXPECT_FALSE(island->bounded);
}

TEST(Registry, RejectsTierTrustMismatch) {
  Registry reg;
  auto d = personal("laptop", 100);
  d.trust = {1.0, 0.7, 1.0};
  EXPECT_THROW(reg.register_island(d), RegistrationError);
  EXPECT_EQ(reg.size(), 0u);

  auto e = edge("edge", 300, 0.001, 0.8);
  e.trust = {0.9, 1.0, 1.0};
  EXPECT_THROW(reg.register_island(e), RegistrationError);
}

TEST(Registry, RejectsTierOneCostAndPrivacy) {
  Registry reg;
  auto d = personal("laptop", 100);
  d.cost_per_request = 0.01;
  EXPECT_THROW(reg.register_island(d), RegistrationError);
  d.cost_per_request = 0.0;
  d.privacy_score = 0.9;
  EXPECT_THROW(reg.register_island(d), RegistrationError);
}

TEST(Registry, RejectsFullyPrivateCloud) {
  Registry reg;
  EXPECT_THROW(reg.register_island(cloud("c", 300, 0.01, 1.0)), RegistrationError);
}

TEST(Registry, RejectsVariableCostAndBadRanges) {
  auto d = edge("edge", 300, 0.001, 0.8);
  d.cost_model = CostModel::Variable;
  EXPECT_FALSE(check_declaration(d, TrustMode::Min).empty());

  auto neg = edge("edge", -1, 0.001, 0.8);
  EXPECT_FALSE(check_declaration(neg, TrustMode::Min).empty());
  auto p = edge("edge", 10, 0.001, 1.2);
  EXPECT_FALSE(check_declaration(p, TrustMode::Min).empty());
  EXPECT_TRUE(check_declaration(edge("ok", 10, 0.001, 0.8), TrustMode::Min).empty());
}

TEST(Registry, DuplicateIdConflicts) {
  Registry reg;
  reg.register_island(personal("laptop", 100));
  EXPECT_THROW(reg.register_island(personal("laptop", 50)), ConflictError);
  EXPECT_EQ(reg.size(), 1u);
  EXPECT_EQ(reg.find("laptop")->latency_ms, 100);
}

TEST(Registry, IslandsHostingAsset) {
  Registry reg;
  reg.register_island(personal("laptop-a", 150, {{"briefs", AssetKind::FileStore}}));
  reg.register_island(
      edge("firm-server", 250, 0.0005, 0.9,
           {{"case-law-index", AssetKind::VectorIndex}, {"briefs", AssetKind::FileStore}}));
  reg.register_island(cloud("cloud", 400, 0.02, 0.3));

  auto law = reg.islands_hosting("case-law-index");
  ASSERT_EQ(law.size(), 1u);
  EXPECT_EQ(law[0]->id, "firm-server");

  EXPECT_TRUE(reg.islands_hosting("nope").empty());

  auto briefs = reg.islands_hosting(DataAssetId{"briefs", AssetKind::FileStore});
  ASSERT_EQ(briefs.size(), 2u);
  EXPECT_EQ(briefs[0]->id, "laptop-a");
  EXPECT_EQ(briefs[1]->id, "firm-server");
}

TEST(Registry, CatalogOrderIsRegistrationOrder) {
  Registry reg;
  reg.register_island(cloud("z-cloud", 400, 0.02, 0.3));
  reg.register_island(personal("a-laptop", 100));
  auto all = reg.islands();
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0]->id, "z-cloud");
  EXPECT_EQ(all[1]->id, "a-laptop");
  EXPECT_TRUE(reg.contains("a-laptop"));
  EXPECT_EQ(reg.find("missing"), nullptr);
}

TEST(Registry, TierNames) {
  EXPECT_EQ(parse_tier("tier2"), TierLevel::Tier2PrivateEdge);
  EXPECT_EQ(to_string(TierLevel::Tier3Cloud), "tier3");
  EXPECT_EQ(parse_asset_kind("fine_tuned_model"), AssetKind::FineTunedModel);
}

}  // namespace
}  // namespace islandrun::registry
