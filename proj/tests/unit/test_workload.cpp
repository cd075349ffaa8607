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

#include <map>
#include <set>

#include <gtest/gtest.h>

#include "islandrun/mist.hpp"
#include "islandrun/scenario_config.hpp"
#include "islandrun/workload.hpp"

namespace islandrun::harness {
namespace {

WorkloadSpec scenario4_spec() {
  WorkloadSpec s;
  s.total = 1000;
  s.requests_per_tick = 5;
  s.conversation_turns = 3;
  s.domain = "healthcare";
  s.bands = {{Band::High, 0.2}, {Band::Moderate, 0.5}, {Band::Low, 0.3}};
  return s;
}

TEST(Apportion, LargestRemainder) {
  const double f[] = {0.5, 0.25, 0.25};
  EXPECT_EQ(apportion(10, f), (std::vector<std::size_t>{5, 3, 2}));
  const double g[] = {0.2, 0.5, 0.3};
  EXPECT_EQ(apportion(1000, g), (std::vector<std::size_t>{200, 500, 300}));
  EXPECT_EQ(apportion(0, g), (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Random, UniformHelpersStayInRange) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(uniform_below(rng, 7), 7u);
    const double u = uniform_unit(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Workload, ScenarioFourCensus) {
  auto reqs = generate_workload(scenario4_spec(), 1000);
  ASSERT_EQ(reqs.size(), 1000u);
  std::map<Band, int> census;
  for (const auto& r : reqs) ++census[r.band];
  EXPECT_EQ(census[Band::High], 200);
  EXPECT_EQ(census[Band::Moderate], 500);
  EXPECT_EQ(census[Band::Low], 300);
}

TEST(Workload, EmptyStream) {
  auto s = scenario4_spec();
  s.total = 0;
  EXPECT_TRUE(generate_workload(s, 1).empty());
}

TEST(Workload, SeedDeterminism) {
  auto a = generate_workload(scenario4_spec(), 42);
  auto b = generate_workload(scenario4_spec(), 42);
  auto c = generate_workload(scenario4_spec(), 43);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].prompt, b[i].prompt);
    EXPECT_EQ(a[i].tier_class, b[i].tier_class);
    differs |= a[i].prompt != c[i].prompt;
  }
  EXPECT_TRUE(differs);
}

TEST(Workload, IdsTicksAndConversations) {
  auto reqs = generate_workload(scenario4_spec(), 7);
  EXPECT_EQ(reqs[0].id, "r0000");
  EXPECT_EQ(reqs[999].id, "r0999");
  EXPECT_EQ(reqs[4].tick, 0);
  EXPECT_EQ(reqs[5].tick, 1);
  EXPECT_EQ(reqs[999].tick, 199);
  EXPECT_EQ(reqs[2].conversation, reqs[0].conversation);
  EXPECT_NE(reqs[3].conversation, reqs[0].conversation);
  EXPECT_EQ(reqs[4].turn, 1u);
}

TEST(Workload, TierMixAndAssets) {
  auto s = scenario4_spec();
  s.bands[0].tier_mix = TierMix{1.0, 0.0, 0.0};
  s.bands[1].required_assets = {"lit"};
  s.bands[1].asset_fraction = 1.0;
  for (const auto& r : generate_workload(s, 9)) {
    if (r.band == Band::High) EXPECT_EQ(r.tier_class, waves::TierClass::Primary);
    if (r.band == Band::Moderate) EXPECT_EQ(r.required_assets, std::vector<std::string>{"lit"});
    if (r.band == Band::Low) EXPECT_TRUE(r.required_assets.empty());
  }
}

TEST(Workload, ScriptedRequestsKeepOrder) {
  WorkloadSpec s;
  s.requests = {{"first", waves::TierClass::Primary, {}, 500.0, "a"},
                {"second", waves::TierClass::Secondary, {}, std::nullopt, "a"},
                {"third", waves::TierClass::Burstable, {}, std::nullopt, "b"}};
  auto reqs = generate_workload(s, 1);
  ASSERT_EQ(reqs.size(), 3u);
  EXPECT_TRUE(reqs[0].scripted);
  EXPECT_EQ(reqs[0].deadline_ms, 500.0);
  EXPECT_EQ(reqs[1].deadline_ms, s.deadline_ms);
  EXPECT_EQ(reqs[1].turn, 1u);
  EXPECT_EQ(reqs[2].turn, 0u);
}

// Every template of every domain must land on its band's score once filled.
TEST(Templates, LandOnBandScores) {
  mist::SensitivityAnalyzer analyzer;
  std::mt19937_64 rng(2024);
  for (const auto& domain : known_domains()) {
    for (auto band : {Band::Low, Band::Moderate, Band::High}) {
      const auto templates = prompt_templates(domain, band);
      ASSERT_FALSE(templates.empty()) << domain;
      for (const auto templ : templates) {
        for (int fill = 0; fill < 25; ++fill) {
          const auto prompt = fill_template(templ, rng);
          const double s = analyzer.analyze(prompt).score;
          if (band == Band::High) {
            EXPECT_GE(s, 0.9) << domain << ": " << prompt;
          } else {
            EXPECT_EQ(s, band_floor(band)) << domain << ": " << prompt;
          }
        }
      }
    }
  }
}

TEST(Templates, SlotsAreFilled) {
  std::mt19937_64 rng(1);
  const auto out = fill_template("{name} in {city} on {date}", rng);
  EXPECT_EQ(out.find('{'), std::string::npos);
  EXPECT_TRUE(is_known_domain("legal"));
  EXPECT_FALSE(is_known_domain("astrology"));
}

}  // namespace
}  // namespace islandrun::harness
