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

#include <gtest/gtest.h>

#include "islandrun/errors.hpp"
#include "islandrun/lighthouse.hpp"
#include "support/fixtures.hpp"

namespace islandrun::lighthouse {
namespace {

std::shared_ptr<registry::Registry> four_islands() {
  auto reg = std::make_shared<registry::Registry>();
  reg->register_island(testing::personal("laptop", 100));
  reg->register_island(testing::personal("mobile", 300));
  reg->register_island(testing::personal("nas", 180));
  reg->register_island(testing::cloud("cloud", 500, 0.02, 0.4));
  return reg;
}

TEST(Timeouts, Validation) {
  EXPECT_NO_THROW(validate(Timeouts{}));
  EXPECT_THROW(validate(Timeouts{0, 5}), ValidationError);
  EXPECT_THROW(validate(Timeouts{5, 5}), ValidationError);
  EXPECT_THROW(Coordinator(four_islands(), Timeouts{4, 2}), ValidationError);
}

TEST(Coordinator, EmptyMesh) {
  Coordinator mesh(four_islands());
  auto list = mesh.get_islands(0);
  EXPECT_TRUE(list.ids.empty());
  EXPECT_FALSE(list.stale);
  EXPECT_EQ(mesh.generation(), 0u);
}

TEST(Coordinator, AnnounceBumpsGeneration) {
  Coordinator mesh(four_islands());
  EXPECT_EQ(mesh.announce("laptop", 0), 1u);
  EXPECT_EQ(mesh.status("laptop")->state, MemberState::Alive);
  EXPECT_EQ(mesh.announce("laptop", 2), 1u);
  EXPECT_EQ(mesh.status("laptop")->last_heartbeat, 2);
  EXPECT_EQ(mesh.view()->members.size(), 1u);
}

TEST(Coordinator, UnknownIdsAreRejected) {
  Coordinator mesh(four_islands());
  EXPECT_THROW(mesh.announce("toaster", 0), UnknownIslandError);
  EXPECT_EQ(mesh.generation(), 0u);
  EXPECT_TRUE(mesh.view()->members.empty());
  EXPECT_THROW(mesh.heartbeat("laptop", 0), UnknownIslandError);
}

TEST(Coordinator, StateMachineWalk) {
  Coordinator mesh(four_islands(), Timeouts{3, 10});
  mesh.announce("laptop", 0);
  const auto g0 = mesh.generation();

  mesh.prune(3);
  EXPECT_EQ(mesh.status("laptop")->state, MemberState::Alive);
  mesh.prune(4);
  EXPECT_EQ(mesh.status("laptop")->state, MemberState::Suspect);
  EXPECT_EQ(mesh.generation(), g0 + 1);

  mesh.prune(10);
  EXPECT_EQ(mesh.status("laptop")->state, MemberState::Suspect);
  mesh.prune(11);
  EXPECT_EQ(mesh.status("laptop")->state, MemberState::Dead);
  EXPECT_EQ(mesh.generation(), g0 + 2);
  EXPECT_TRUE(mesh.get_islands(11).ids.empty());
  ASSERT_TRUE(mesh.status("laptop"));

  auto s = mesh.heartbeat("laptop", 12);
  EXPECT_EQ(s.state, MemberState::Alive);
  EXPECT_EQ(mesh.generation(), g0 + 3);
}

TEST(Coordinator, SuspectRecoversOnHeartbeat) {
  Coordinator mesh(four_islands());
  mesh.announce("nas", 0);
  mesh.prune(5);
  ASSERT_EQ(mesh.status("nas")->state, MemberState::Suspect);
  EXPECT_EQ(mesh.heartbeat("nas", 5).state, MemberState::Alive);
}

TEST(Coordinator, WakeAfterSleep) {
  Coordinator mesh(four_islands());
  mesh.announce("laptop", 0);
  mesh.prune(50);
  ASSERT_EQ(mesh.status("laptop")->state, MemberState::Dead);
  const auto before = mesh.generation();
  EXPECT_EQ(mesh.announce("laptop", 100), before + 1);
  EXPECT_EQ(mesh.status("laptop")->announced_at, 100);
}

TEST(Coordinator, StaleTicksIgnored) {
  Coordinator mesh(four_islands());
  mesh.announce("laptop", 10);
  auto s = mesh.heartbeat("laptop", 4);
  EXPECT_EQ(s.last_heartbeat, 10);
}

TEST(Coordinator, ThreeAliveOneDead) {
  Coordinator mesh(four_islands());
  for (auto id : {"laptop", "mobile", "nas", "cloud"}) mesh.announce(id, 0);
  for (Tick t = 1; t <= 20; ++t) {
    for (auto id : {"laptop", "nas", "cloud"}) mesh.heartbeat(id, t);
    mesh.prune(t);
  }
  auto list = mesh.get_islands(20);
  EXPECT_EQ(list.ids, (std::vector<std::string>{"laptop", "nas", "cloud"}));
  EXPECT_EQ(mesh.status("mobile")->state, MemberState::Dead);
}

TEST(Coordinator, SilentMemberLeavesListBeforePrune) {
  Coordinator mesh(four_islands());
  mesh.announce("laptop", 0);
  EXPECT_EQ(mesh.get_islands(3).ids.size(), 1u);
  EXPECT_TRUE(mesh.get_islands(4).ids.empty());
}

TEST(Coordinator, FailedCoordinatorServesCache) {
  Coordinator mesh(four_islands());
  mesh.announce("laptop", 0);
  mesh.announce("cloud", 0);
  mesh.mark_failed(true);
  auto list = mesh.get_islands(500);
  EXPECT_TRUE(list.stale);
  EXPECT_EQ(list.ids, (std::vector<std::string>{"laptop", "cloud"}));
  mesh.mark_failed(false);
  EXPECT_TRUE(mesh.get_islands(500).ids.empty());
}

TEST(Coordinator, CacheFrozenWhileFailed) {
  Coordinator mesh(four_islands());
  mesh.announce("laptop", 0);
  mesh.announce("cloud", 0);
  mesh.mark_failed(true);
  mesh.heartbeat("cloud", 20);
  mesh.prune(20);
  EXPECT_EQ(mesh.get_islands(20).ids, (std::vector<std::string>{"laptop", "cloud"}));
  mesh.mark_failed(false);
  EXPECT_EQ(mesh.get_islands(20).ids, std::vector<std::string>{"cloud"});
}

TEST(Coordinator, CacheKeepsLastNonEmptyMembership) {
  Coordinator mesh(four_islands());
  mesh.announce("laptop", 0);
  mesh.prune(100);
  EXPECT_EQ(mesh.view()->cached_snapshot, std::vector<std::string>{"laptop"});
}

}  // namespace
}  // namespace islandrun::lighthouse
