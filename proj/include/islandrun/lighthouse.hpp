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

// Mesh membership: announcements, heartbeats, liveness pruning and the cached
// island list used when the coordinator is unavailable.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "islandrun/registry.hpp"

namespace islandrun::lighthouse {

using Tick = std::int64_t;

enum class MemberState { Alive, Suspect, Dead };

std::string_view to_string(MemberState s);

struct IslandStatus {
  Tick last_heartbeat = 0;
  MemberState state = MemberState::Alive;
  Tick announced_at = 0;

  friend bool operator==(const IslandStatus&, const IslandStatus&) = default;
};

struct Timeouts {
  Tick suspect_after = 3;
  Tick dead_after = 10;
};

// Throws ValidationError unless 0 < suspect_after < dead_after.
void validate(const Timeouts& t);

struct IslandList {
  std::vector<std::string> ids;  // registry order
  bool stale = false;            // served from the cached snapshot
  std::uint64_t generation = 0;
};

// Immutable, generation-stamped view of the membership table.
struct MeshView {
  std::uint64_t generation = 0;
  std::map<std::string, IslandStatus, std::less<>> members;
  std::vector<std::string> cached_snapshot;
};

// Single coordinator. Mutations serialize on an internal mutex; readers get
// immutable views. Ticks older than a member's last heartbeat are ignored.
class Coordinator {
 public:
  explicit Coordinator(std::shared_ptr<const registry::Registry> registry, Timeouts timeouts = {});

  // Adds or revives `id` as Alive. Throws UnknownIslandError for ids the
  // registry does not know. Returns the generation after the call.
  std::uint64_t announce(std::string_view id, Tick tick);

  // Refreshes the heartbeat; Suspect and Dead members become Alive again.
  // Throws UnknownIslandError for ids that never announced.
  IslandStatus heartbeat(std::string_view id, Tick tick);

  // Alive -> Suspect once now - last_heartbeat > suspect_after,
  // Suspect -> Dead once now - last_heartbeat > dead_after. Returns the
  // generation after the call.
  std::uint64_t prune(Tick now);

  // Alive members whose heartbeat is within suspect_after of `now`, or the
  // cached snapshot (stale) while the coordinator is marked failed.
  IslandList get_islands(Tick now) const;

  // The cached snapshot is frozen while failed and refreshed on recovery.
  void mark_failed(bool failed);
  bool failed() const;

  std::uint64_t generation() const;
  std::optional<IslandStatus> status(std::string_view id) const;
  std::shared_ptr<const MeshView> view() const;
  const Timeouts& timeouts() const noexcept { return timeouts_; }

 private:
  void transition(IslandStatus& s, MemberState to);
  void publish();
  std::vector<std::string> alive_ids() const;

  std::shared_ptr<const registry::Registry> registry_;
  Timeouts timeouts_;
  mutable std::mutex mutex_;
  bool failed_ = false;
  std::uint64_t generation_ = 0;
  std::map<std::string, IslandStatus, std::less<>> members_;
  std::vector<std::string> cached_;
  std::shared_ptr<const MeshView> view_;
};

}  // namespace islandrun::lighthouse
