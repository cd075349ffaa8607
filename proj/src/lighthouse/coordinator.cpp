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

#include "islandrun/lighthouse.hpp"

#include <fmt/format.h>

#include "islandrun/errors.hpp"

namespace islandrun::lighthouse {

std::string_view to_string(MemberState s) {
  switch (s) {
    case MemberState::Alive: return "alive";
    case MemberState::Suspect: return "suspect";
    case MemberState::Dead: return "dead";
  }
  return "unknown";
}

void validate(const Timeouts& t) {
  if (!(t.suspect_after > 0 && t.suspect_after < t.dead_after)) {
    throw ValidationError(fmt::format("lighthouse needs 0 < suspect_after < dead_after, got {} / {}",
                                      t.suspect_after, t.dead_after));
  }
}

Coordinator::Coordinator(std::shared_ptr<const registry::Registry> registry, Timeouts timeouts)
    : registry_(std::move(registry)), timeouts_(timeouts) {
  validate(timeouts_);
  view_ = std::make_shared<const MeshView>();
}

void Coordinator::transition(IslandStatus& s, MemberState to) {
  if (s.state == to) return;
  s.state = to;
  ++generation_;
}

std::vector<std::string> Coordinator::alive_ids() const {
  std::vector<std::string> ids;
  for (const auto& island : registry_->islands()) {
    auto it = members_.find(island->id);
    if (it != members_.end() && it->second.state == MemberState::Alive) ids.push_back(island->id);
  }
  return ids;
}

void Coordinator::publish() {
  if (view_->generation == generation_) return;
  auto alive = alive_ids();
  if (!alive.empty() && !failed_) cached_ = std::move(alive);
  view_ = std::make_shared<const MeshView>(MeshView{generation_, members_, cached_});
}

std::uint64_t Coordinator::announce(std::string_view id, Tick tick) {
  if (!registry_->contains(id)) {
    throw UnknownIslandError(fmt::format("cannot announce unregistered island '{}'", id));
  }
  std::lock_guard lock(mutex_);
  auto it = members_.find(id);
  if (it == members_.end()) {
    members_.emplace(std::string(id), IslandStatus{tick, MemberState::Alive, tick});
    ++generation_;
  } else if (tick >= it->second.last_heartbeat) {
    auto& s = it->second;
    s.last_heartbeat = tick;
    if (s.state != MemberState::Alive) s.announced_at = tick;
    transition(s, MemberState::Alive);
  }
  publish();
  return generation_;
}

IslandStatus Coordinator::heartbeat(std::string_view id, Tick tick) {
  std::lock_guard lock(mutex_);
  auto it = members_.find(id);
  if (it == members_.end()) {
    throw UnknownIslandError(fmt::format("heartbeat from non-member '{}'", id));
  }
  auto& s = it->second;
  if (tick < s.last_heartbeat) return s;
  s.last_heartbeat = tick;
  transition(s, MemberState::Alive);
  publish();
  return s;
}

std::uint64_t Coordinator::prune(Tick now) {
  std::lock_guard lock(mutex_);
  for (auto& [id, s] : members_) {
    const Tick silent = now - s.last_heartbeat;
    if (s.state == MemberState::Alive && silent > timeouts_.suspect_after) {
      transition(s, MemberState::Suspect);
    }
    if (s.state == MemberState::Suspect && silent > timeouts_.dead_after) {
      transition(s, MemberState::Dead);
    }
  }
  publish();
  return generation_;
}

IslandList Coordinator::get_islands(Tick now) const {
  std::lock_guard lock(mutex_);
  if (failed_) return {cached_, true, generation_};
  IslandList out;
  out.generation = generation_;
  for (const auto& island : registry_->islands()) {
    auto it = members_.find(island->id);
    if (it == members_.end()) continue;
    const auto& s = it->second;
    if (s.state == MemberState::Alive && now - s.last_heartbeat <= timeouts_.suspect_after) {
      out.ids.push_back(island->id);
    }
  }
  return out;
}

void Coordinator::mark_failed(bool failed) {
  std::lock_guard lock(mutex_);
  failed_ = failed;
  if (!failed_) {
    auto alive = alive_ids();
    if (!alive.empty()) cached_ = std::move(alive);
  }
}

bool Coordinator::failed() const {
  std::lock_guard lock(mutex_);
  return failed_;
}

std::uint64_t Coordinator::generation() const {
  std::lock_guard lock(mutex_);
  return generation_;
}

std::optional<IslandStatus> Coordinator::status(std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto it = members_.find(id);
  if (it == members_.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<const MeshView> Coordinator::view() const {
  std::lock_guard lock(mutex_);
  return view_;
}

}  // namespace islandrun::lighthouse
