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

#include <random>

#include <gtest/gtest.h>

#include "islandrun/errors.hpp"
#include "islandrun/tide.hpp"
#include "support/oracles.hpp"

namespace islandrun::tide {
namespace {

TEST(ComputeAvailable, HandExamples) {
  EXPECT_DOUBLE_EQ(compute_available(60, 40, 8, 16), 0.4);
  EXPECT_EQ(compute_available(0, 0, 0, 32), 1.0);
  EXPECT_EQ(compute_available(100, 0, 0, 32), 0.0);
}

TEST(ComputeAvailable, RejectsInvalidInputs) {
  EXPECT_THROW(compute_available(10, 10, 1, 0), ValidationError);
  EXPECT_THROW(compute_available(-1, 10, 1, 8), ValidationError);
  EXPECT_THROW(compute_available(10, 101, 1, 8), ValidationError);
  EXPECT_THROW(compute_available(10, 10, 9, 8), ValidationError);
  EXPECT_THROW(compute_available(10, 10, -2, 8), ValidationError);
}

TEST(ComputeAvailable, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  std::uniform_real_distribution<double> total(0.5, 256.0);
  for (int i = 0; i < 2000; ++i) {
    const double cpu = pct(rng);
    const double gpu = pct(rng);
    const double mt = total(rng);
    const double mu = std::uniform_real_distribution<double>(0.0, mt)(rng);
    ASSERT_EQ(compute_available(cpu, gpu, mu, mt), oracle::available(cpu, gpu, mu, mt));
  }
}

TEST(Hysteresis, SpecTransitions) {
  auto local = HysteresisState::for_profile(BufferProfile::Conservative);
  EXPECT_EQ(step_hysteresis(local, 0.65).mode, Mode::Offloaded);
  auto off = HysteresisState::for_profile(BufferProfile::Conservative, Mode::Offloaded);
  EXPECT_EQ(step_hysteresis(off, 0.75).mode, Mode::Offloaded);
  EXPECT_EQ(step_hysteresis(off, 0.85).mode, Mode::Local);
}

TEST(Hysteresis, ThresholdsAreStrict) {
  auto local = HysteresisState::for_profile(BufferProfile::Conservative);
  EXPECT_EQ(step_hysteresis(local, 0.70).mode, Mode::Local);
  auto off = HysteresisState::for_profile(BufferProfile::Conservative, Mode::Offloaded);
  EXPECT_EQ(step_hysteresis(off, 0.80).mode, Mode::Offloaded);
}

TEST(Hysteresis, ProfileThresholds) {
  auto m = HysteresisState::for_profile(BufferProfile::Moderate);
  EXPECT_EQ(m.fallback_threshold, 0.80);
  EXPECT_EQ(m.recovery_threshold, 0.90);
  auto a = HysteresisState::for_profile(BufferProfile::Aggressive, Mode::Offloaded);
  EXPECT_EQ(step_hysteresis(a, 0.99).mode, Mode::Offloaded);
  EXPECT_EQ(step_hysteresis(a, 1.0).mode, Mode::Local);
  EXPECT_EQ(buffer_fraction(BufferProfile::Moderate), 0.20);
  EXPECT_EQ(offload_below(BufferProfile::Aggressive), 0.90);
}

TEST(Hysteresis, MakeValidatesOrder) {
  EXPECT_THROW(HysteresisState::make(0.8, 0.7), ValidationError);
  EXPECT_THROW(HysteresisState::make(0.5, 1.1), ValidationError);
  EXPECT_NO_THROW(HysteresisState::make(0.0, 1.0));
}

TEST(Hysteresis, MatchesOracleOnRandomWalks) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.55, 0.95);
  for (auto profile : {BufferProfile::Conservative, BufferProfile::Moderate}) {
    auto state = HysteresisState::for_profile(profile);
    oracle::Hysteresis o{state.fallback_threshold, state.recovery_threshold};
    for (int i = 0; i < 5000; ++i) {
      const double v = r(rng);
      state = step_hysteresis(state, v);
      o.step(v);
      ASSERT_EQ(state.mode == Mode::Local, o.local) << "step " << i;
    }
  }
}

TEST(ScriptedSource, PiecewiseConstant) {
  ScriptedSource src({{5, 30, 10, 4, 16}, {10, 90, 0, 1, 16}});
  EXPECT_EQ(src.sample(0).available, 1.0);
  EXPECT_DOUBLE_EQ(src.sample(5).available, 0.7);
  EXPECT_DOUBLE_EQ(src.sample(9).available, 0.7);
  EXPECT_NEAR(src.sample(10).available, 0.1, 1e-12);
  EXPECT_NEAR(src.sample(1000).available, 0.1, 1e-12);
  EXPECT_EQ(src.sample(7).timestamp, 7);
}

TEST(ScriptedSource, RejectsBadRows) {
  EXPECT_THROW(ScriptedSource({{5, 10, 10, 1, 8}, {5, 10, 10, 1, 8}}), ValidationError);
  EXPECT_THROW(ScriptedSource({{0, 10, 10, 9, 8}}), ValidationError);
}

class ThrowingSource final : public CapacitySource {
 public:
  CapacitySnapshot sample(Tick) const override { throw std::runtime_error("probe died"); }
};

TEST(GetCapacity, FailedSourcesReportZero) {
  UnboundedSource idle;
  EXPECT_EQ(get_capacity(idle, 3).available, 1.0);
  auto failed = get_capacity(idle, 3, true);
  EXPECT_EQ(failed.available, 0.0);
  EXPECT_TRUE(failed.failed);
  ThrowingSource broken;
  EXPECT_EQ(get_capacity(broken, 3).available, 0.0);
}

TEST(CapacityMonitor, GateFollowsHysteresis) {
  CapacityMonitor mon;
  mon.add("laptop",
          std::make_shared<const ScriptedSource>(std::vector<CapacityRow>{
              {0, 10, 0, 1, 16}, {2, 40, 0, 1, 16}, {4, 25, 0, 1, 16}, {6, 10, 0, 1, 16}}),
          BufferProfile::Conservative, true);
  mon.add("cloud", std::make_shared<const UnboundedSource>(), BufferProfile::Conservative, false);
  EXPECT_EQ(mon.latest("laptop"), nullptr);

  const bool expected[] = {true, true, false, false, false, false, true};
  for (Tick t = 0; t < 7; ++t) {
    mon.sample_all(t);
    EXPECT_EQ(mon.latest("laptop")->admits(), expected[t]) << "tick " << t;
    EXPECT_TRUE(mon.latest("cloud")->admits());
  }
  EXPECT_THROW(mon.add("laptop", std::make_shared<const UnboundedSource>(),
                       BufferProfile::Moderate, true),
               ConflictError);
  EXPECT_THROW(mon.set_failed("ghost", true), UnknownIslandError);
}

TEST(CapacityMonitor, FailedSourceClosesGateButNotUnbounded) {
  CapacityMonitor mon;
  mon.add("laptop", std::make_shared<const ScriptedSource>(std::vector<CapacityRow>{}),
          BufferProfile::Conservative, true);
  mon.add("cloud", std::make_shared<const UnboundedSource>(), BufferProfile::Conservative, false);
  mon.set_all_failed(true);
  mon.sample_all(0);
  EXPECT_FALSE(mon.latest("laptop")->admits());
  EXPECT_EQ(mon.latest("laptop")->snapshot.available, 0.0);
  EXPECT_TRUE(mon.latest("cloud")->admits());
}

TEST(LiveProbe, ReturnsValidSnapshot) {
  LiveProbeSource probe;
  probe.sample(0);
  auto s = probe.sample(1);
  EXPECT_GE(s.available, 0.0);
  EXPECT_LE(s.available, 1.0);
}

}  // namespace
}  // namespace islandrun::tide
