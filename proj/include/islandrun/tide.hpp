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

// Capacity monitoring: available capacity R(t), buffer profiles and the
// hysteresis state that decides whether an island keeps work local.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace islandrun::tide {

using Tick = std::int64_t;

// R = 1 - max(cpu_pct/100, gpu_pct/100, mem_used/mem_total), clamped to [0,1].
// Throws ValidationError for negative inputs, percentages above 100,
// mem_total <= 0 or mem_used > mem_total.
double compute_available(double cpu_pct, double gpu_pct, double mem_used, double mem_total);

struct CapacitySnapshot {
  Tick timestamp = 0;
  double cpu_pct = 0.0;
  double gpu_pct = 0.0;
  double mem_used = 0.0;
  double mem_total = 1.0;
  double available = 1.0;
  bool failed = false;  // produced by the conservative fallback
};

CapacitySnapshot make_snapshot(Tick t, double cpu_pct, double gpu_pct, double mem_used,
                               double mem_total);
CapacitySnapshot idle_snapshot(Tick t);
CapacitySnapshot failed_snapshot(Tick t);

enum class BufferProfile { Conservative, Moderate, Aggressive };

std::string_view to_string(BufferProfile p);
std::optional<BufferProfile> parse_buffer_profile(std::string_view text);
double buffer_fraction(BufferProfile p);  // 0.30, 0.20, 0.10
double offload_below(BufferProfile p);    // 0.70, 0.80, 0.90

enum class Mode { Local, Offloaded };

std::string_view to_string(Mode m);

struct HysteresisState {
  Mode mode = Mode::Local;
  double fallback_threshold = 0.70;
  double recovery_threshold = 0.80;

  // fallback = offload_below(p), recovery = fallback + 0.10.
  static HysteresisState for_profile(BufferProfile p, Mode initial = Mode::Local);
  // Throws ValidationError unless 0 <= fallback < recovery <= 1.
  static HysteresisState make(double fallback, double recovery, Mode initial = Mode::Local);

  friend bool operator==(const HysteresisState&, const HysteresisState&) = default;
};

// Local -> Offloaded iff R < fallback; Offloaded -> Local iff R > recovery.
// A recovery threshold of 1.0 cannot be exceeded, so R = 1.0 recovers there.
HysteresisState step_hysteresis(const HysteresisState& state, double r);

// ---------------------------------------------------------------------------
// Capacity sources

class CapacitySource {
 public:
  virtual ~CapacitySource() = default;
  virtual CapacitySnapshot sample(Tick t) const = 0;
};

struct CapacityRow {
  Tick tick = 0;
  double cpu_pct = 0.0;
  double gpu_pct = 0.0;
  double mem_used = 0.0;
  double mem_total = 1.0;
};

// Piecewise-constant replay of scripted rows: the last row at or before t
// applies; before the first row the island is idle.
class ScriptedSource final : public CapacitySource {
 public:
  // Rows must have strictly increasing ticks and valid values
  // (ValidationError otherwise).
  explicit ScriptedSource(std::vector<CapacityRow> rows);
  CapacitySnapshot sample(Tick t) const override;
  const std::vector<CapacityRow>& rows() const noexcept { return rows_; }

 private:
  std::vector<CapacityRow> rows_;
};

// Tier 3 islands: always fully available.
class UnboundedSource final : public CapacitySource {
 public:
  CapacitySnapshot sample(Tick t) const override { return idle_snapshot(t); }
};

// Reads CPU and memory from /proc on Linux; GPU is reported as 0. Returns an
// idle snapshot where /proc is unavailable.
class LiveProbeSource final : public CapacitySource {
 public:
  CapacitySnapshot sample(Tick t) const override;

 private:
  mutable std::mutex mutex_;
  mutable std::uint64_t last_busy_ = 0;
  mutable std::uint64_t last_total_ = 0;
};

// Latest snapshot of `source`, or the conservative available = 0 snapshot
// when the source is marked failed. Never throws.
CapacitySnapshot get_capacity(const CapacitySource& source, Tick t, bool failed = false);

// ---------------------------------------------------------------------------
// Monitor

struct IslandCapacity {
  CapacitySnapshot snapshot;
  HysteresisState hysteresis;
  BufferProfile profile = BufferProfile::Conservative;
  bool bounded = true;

  // Capacity gate: unbounded islands always admit; bounded islands admit while
  // their hysteresis state is Local.
  bool admits() const noexcept { return !bounded || hysteresis.mode == Mode::Local; }
};

// One sampler per island. sample_all() steps every island's hysteresis once
// per tick and publishes immutable snapshots; latest() never waits on a
// sampling pass.
class CapacityMonitor {
 public:
  void add(std::string island_id, std::shared_ptr<const CapacitySource> source,
           BufferProfile profile, bool bounded);

  void set_failed(std::string_view island_id, bool failed);
  void set_all_failed(bool failed);

  void sample_all(Tick t);

  // nullptr for unknown islands or before the first sample.
  std::shared_ptr<const IslandCapacity> latest(std::string_view island_id) const;

 private:
  struct Sampler {
    std::shared_ptr<const CapacitySource> source;
    HysteresisState state;
    BufferProfile profile;
    bool bounded;
    bool failed = false;
  };

  std::map<std::string, Sampler, std::less<>> samplers_;
  mutable std::mutex published_mutex_;
  std::map<std::string, std::shared_ptr<const IslandCapacity>, std::less<>> published_;
};

}  // namespace islandrun::tide
