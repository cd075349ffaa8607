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

#include "islandrun/tide.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "islandrun/errors.hpp"

namespace islandrun::tide {
namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

double compute_available(double cpu_pct, double gpu_pct, double mem_used, double mem_total) {
  if (!finite_nonneg(cpu_pct) || !finite_nonneg(gpu_pct) || !finite_nonneg(mem_used)) {
    throw ValidationError(fmt::format("capacity inputs must be >= 0 (cpu {}, gpu {}, mem_used {})",
                                      cpu_pct, gpu_pct, mem_used));
  }
  if (!std::isfinite(mem_total) || mem_total <= 0.0) {
    throw ValidationError(fmt::format("mem_total must be > 0, got {}", mem_total));
  }
  if (cpu_pct > 100.0 || gpu_pct > 100.0) {
    throw ValidationError(fmt::format("utilization above 100% (cpu {}, gpu {})", cpu_pct, gpu_pct));
  }
  if (mem_used > mem_total) {
    throw ValidationError(fmt::format("mem_used {} exceeds mem_total {}", mem_used, mem_total));
  }
  const double used = std::max({cpu_pct / 100.0, gpu_pct / 100.0, mem_used / mem_total});
  return std::clamp(1.0 - used, 0.0, 1.0);
}

CapacitySnapshot make_snapshot(Tick t, double cpu_pct, double gpu_pct, double mem_used,
                               double mem_total) {
  return {t, cpu_pct, gpu_pct, mem_used, mem_total,
          compute_available(cpu_pct, gpu_pct, mem_used, mem_total), false};
}

CapacitySnapshot idle_snapshot(Tick t) { return {t, 0.0, 0.0, 0.0, 1.0, 1.0, false}; }

CapacitySnapshot failed_snapshot(Tick t) { return {t, 0.0, 0.0, 0.0, 1.0, 0.0, true}; }

std::string_view to_string(BufferProfile p) {
  switch (p) {
    case BufferProfile::Conservative: return "conservative";
    case BufferProfile::Moderate: return "moderate";
    case BufferProfile::Aggressive: return "aggressive";
  }
  return "unknown";
}

std::optional<BufferProfile> parse_buffer_profile(std::string_view text) {
  if (text == "conservative") return BufferProfile::Conservative;
  if (text == "moderate") return BufferProfile::Moderate;
  if (text == "aggressive") return BufferProfile::Aggressive;
  return std::nullopt;
}

double buffer_fraction(BufferProfile p) {
  switch (p) {
    case BufferProfile::Conservative: return 0.30;
    case BufferProfile::Moderate: return 0.20;
    case BufferProfile::Aggressive: return 0.10;
  }
  return 0.30;
}

double offload_below(BufferProfile p) {
  switch (p) {
    case BufferProfile::Conservative: return 0.70;
    case BufferProfile::Moderate: return 0.80;
    case BufferProfile::Aggressive: return 0.90;
  }
  return 0.70;
}

std::string_view to_string(Mode m) { return m == Mode::Local ? "local" : "offloaded"; }

HysteresisState HysteresisState::for_profile(BufferProfile p, Mode initial) {
  switch (p) {
    case BufferProfile::Conservative: return make(0.70, 0.80, initial);
    case BufferProfile::Moderate: return make(0.80, 0.90, initial);
    case BufferProfile::Aggressive: return make(0.90, 1.00, initial);
  }
  return make(0.70, 0.80, initial);
}

HysteresisState HysteresisState::make(double fallback, double recovery, Mode initial) {
  if (!(fallback >= 0.0 && fallback < recovery && recovery <= 1.0)) {
    throw ValidationError(fmt::format(
        "hysteresis needs 0 <= fallback < recovery <= 1, got fallback {} recovery {}", fallback,
        recovery));
  }
  return {initial, fallback, recovery};
}

HysteresisState step_hysteresis(const HysteresisState& state, double r) {
  HysteresisState next = state;
  if (state.mode == Mode::Local) {
    if (r < state.fallback_threshold) next.mode = Mode::Offloaded;
  } else {
    const bool recovered =
        r > state.recovery_threshold || (state.recovery_threshold >= 1.0 && r >= 1.0);
    if (recovered) next.mode = Mode::Local;
  }
  return next;
}

ScriptedSource::ScriptedSource(std::vector<CapacityRow> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    if (i > 0 && row.tick <= rows_[i - 1].tick) {
      throw ValidationError(fmt::format("capacity rows must have increasing ticks ({} after {})",
                                        row.tick, rows_[i - 1].tick));
    }
    compute_available(row.cpu_pct, row.gpu_pct, row.mem_used, row.mem_total);
  }
}

CapacitySnapshot ScriptedSource::sample(Tick t) const {
  auto it = std::upper_bound(rows_.begin(), rows_.end(), t,
                             [](Tick tick, const CapacityRow& row) { return tick < row.tick; });
  if (it == rows_.begin()) return idle_snapshot(t);
  const auto& row = *std::prev(it);
  return make_snapshot(t, row.cpu_pct, row.gpu_pct, row.mem_used, row.mem_total);
}

CapacitySnapshot get_capacity(const CapacitySource& source, Tick t, bool failed) {
  if (failed) return failed_snapshot(t);
  try {
    return source.sample(t);
  } catch (const std::exception&) {
    return failed_snapshot(t);
  }
}

void CapacityMonitor::add(std::string island_id, std::shared_ptr<const CapacitySource> source,
                          BufferProfile profile, bool bounded) {
  if (samplers_.contains(island_id)) {
    throw ConflictError(fmt::format("capacity source for '{}' already added", island_id));
  }
  samplers_.emplace(std::move(island_id),
                    Sampler{std::move(source), HysteresisState::for_profile(profile), profile,
                            bounded});
}

void CapacityMonitor::set_failed(std::string_view island_id, bool failed) {
  auto it = samplers_.find(island_id);
  if (it == samplers_.end()) {
    throw UnknownIslandError(fmt::format("no capacity source for '{}'", island_id));
  }
  it->second.failed = failed;
}

void CapacityMonitor::set_all_failed(bool failed) {
  for (auto& [id, s] : samplers_) s.failed = failed;
}

void CapacityMonitor::sample_all(Tick t) {
  std::map<std::string, std::shared_ptr<const IslandCapacity>, std::less<>> fresh;
  for (auto& [id, s] : samplers_) {
    auto snap = s.bounded ? get_capacity(*s.source, t, s.failed) : idle_snapshot(t);
    s.state = step_hysteresis(s.state, snap.available);
    fresh.emplace(id, std::make_shared<const IslandCapacity>(
                          IslandCapacity{snap, s.state, s.profile, s.bounded}));
  }
  std::lock_guard lock(published_mutex_);
  published_.swap(fresh);
}

std::shared_ptr<const IslandCapacity> CapacityMonitor::latest(std::string_view island_id) const {
  std::lock_guard lock(published_mutex_);
  auto it = published_.find(island_id);
  return it == published_.end() ? nullptr : it->second;
}

}  // namespace islandrun::tide
