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

#include <algorithm>
#include <cctype>
#include <random>

#include <fmt/format.h>

#include "islandrun/errors.hpp"
#include "islandrun/mist.hpp"

namespace islandrun::mist {
namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Length of a "[KIND_n]" token starting at text[pos], or 0.
// KIND := UPPER+ ("_" UPPER+)*, n := DIGIT+
std::size_t token_length_at(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || text[pos] != '[') return 0;
  std::size_t i = pos + 1;
  bool saw_kind = false;
  while (true) {
    const auto start = i;
    while (i < text.size() && is_upper(text[i])) ++i;
    if (i == start) return 0;
    saw_kind = true;
    if (i >= text.size() || text[i] != '_') return 0;
    ++i;
    if (i < text.size() && is_digit(text[i])) break;
  }
  if (!saw_kind) return 0;
  const auto digits = i;
  while (i < text.size() && is_digit(text[i])) ++i;
  if (i == digits || i >= text.size() || text[i] != ']') return 0;
  return i + 1 - pos;
}

// Piece of a turn under construction: either literal text or a placeholder.
struct Segment {
  std::string text;
  bool placeholder = false;
};

// Replaces any remaining occurrence of a mapped original inside literal
// segments. Detection is boundary-aware; this sweep is not, so it also covers
// originals embedded in longer words.
std::vector<Segment> sweep_residuals(std::vector<Segment> segments,
                                     const std::vector<const PlaceholderEntry*>& by_length) {
  std::vector<Segment> out;
  for (auto& seg : segments) {
    if (seg.placeholder) {
      out.push_back(std::move(seg));
      continue;
    }
    std::string literal;
    const std::string& s = seg.text;
    std::size_t pos = 0;
    while (pos < s.size()) {
      const PlaceholderEntry* hit = nullptr;
      for (const auto* e : by_length) {
        if (s.compare(pos, e->original.size(), e->original) == 0) {
          hit = e;
          break;
        }
      }
      if (hit == nullptr) {
        literal.push_back(s[pos++]);
        continue;
      }
      if (!literal.empty()) out.push_back({std::move(literal), false});
      literal.clear();
      out.push_back({hit->placeholder, true});
      pos += hit->original.size();
    }
    if (!literal.empty()) out.push_back({std::move(literal), false});
  }
  return out;
}

}  // namespace

std::string make_placeholder(EntityKind kind, int ordinal) {
  return fmt::format("[{}_{}]", to_string(kind), ordinal);
}

std::vector<PlaceholderToken> find_placeholder_tokens(std::string_view text) {
  std::vector<PlaceholderToken> tokens;
  std::size_t pos = text.find('[');
  while (pos != std::string_view::npos) {
    const auto len = token_length_at(text, pos);
    if (len > 0) {
      tokens.push_back({pos, pos + len, std::string(text.substr(pos, len))});
      pos = text.find('[', pos + len);
    } else {
      pos = text.find('[', pos + 1);
    }
  }
  return tokens;
}

PlaceholderMap::PlaceholderMap(std::string session_id) : session_id_(std::move(session_id)) {}

const std::string& PlaceholderMap::assign(EntityKind kind, const std::string& surface) {
  if (auto it = by_original_.find(surface); it != by_original_.end()) {
    return entries_[it->second].placeholder;
  }
  auto& ordinal = next_ordinal_[static_cast<std::size_t>(kind)];
  std::string token;
  do {
    token = make_placeholder(kind, ++ordinal);
  } while (reserved_.contains(token));

  entries_.push_back({token, surface, kind});
  by_placeholder_.emplace(token, entries_.size() - 1);
  by_original_.emplace(surface, entries_.size() - 1);
  return entries_.back().placeholder;
}

void PlaceholderMap::reserve(std::string token) { reserved_.insert(std::move(token)); }

std::optional<std::string_view> PlaceholderMap::original_of(std::string_view placeholder) const {
  if (auto it = by_placeholder_.find(std::string(placeholder)); it != by_placeholder_.end()) {
    return entries_[it->second].original;
  }
  return std::nullopt;
}

std::optional<std::string_view> PlaceholderMap::placeholder_of(std::string_view original) const {
  if (auto it = by_original_.find(std::string(original)); it != by_original_.end()) {
    return entries_[it->second].placeholder;
  }
  return std::nullopt;
}

std::string random_session_id() {
  std::random_device rd;
  std::uniform_int_distribution<unsigned> byte(0, 255);
  std::string id;
  id.reserve(32);
  for (int i = 0; i < 16; ++i) id += fmt::format("{:02x}", byte(rd));
  return id;
}

Sanitizer::Sanitizer(std::shared_ptr<const EntityDetector> detector, SessionIdSource session_ids)
    : detector_(std::move(detector)), session_ids_(std::move(session_ids)) {}

SanitizedHistory Sanitizer::sanitize(std::span<const std::string> history,
                                     double target_privacy) const {
  return sanitize(history, target_privacy, session_ids_());
}

SanitizedHistory Sanitizer::sanitize(std::span<const std::string> history, double target_privacy,
                                     std::string session_id) const {
  if (!(target_privacy >= 0.0 && target_privacy < 1.0)) {
    throw ValidationError(fmt::format(
        "sanitize targets islands with privacy < 1.0, got {}; trusted targets bypass", target_privacy));
  }

  PlaceholderMap map(std::move(session_id));
  for (const auto& turn : history) {
    for (auto& tok : find_placeholder_tokens(turn)) map.reserve(std::move(tok.token));
  }

  // Ordinals follow first appearance across the whole history.
  std::vector<std::vector<Entity>> detected;
  detected.reserve(history.size());
  for (const auto& turn : history) {
    detected.push_back(detector_->detect(turn));
    for (const auto& e : detected.back()) map.assign(e.kind, e.surface);
  }

  std::vector<const PlaceholderEntry*> by_length;
  for (const auto& e : map.entries()) by_length.push_back(&e);
  std::stable_sort(by_length.begin(), by_length.end(), [](const auto* a, const auto* b) {
    return a->original.size() > b->original.size();
  });

  SanitizedHistory out{{}, std::move(map)};
  out.turns.reserve(history.size());
  for (std::size_t t = 0; t < history.size(); ++t) {
    const std::string& turn = history[t];
    std::vector<Segment> segments;
    std::size_t cursor = 0;
    for (const auto& e : detected[t]) {
      if (e.begin > cursor) segments.push_back({turn.substr(cursor, e.begin - cursor), false});
      segments.push_back({std::string(*out.map.placeholder_of(e.surface)), true});
      cursor = e.end;
    }
    if (cursor < turn.size()) segments.push_back({turn.substr(cursor), false});

    std::string sanitized;
    for (const auto& seg : sweep_residuals(std::move(segments), by_length)) sanitized += seg.text;
    out.turns.push_back(std::move(sanitized));
  }
  return out;
}

DesanitizeResult desanitize(std::string_view response, const PlaceholderMap& map) {
  DesanitizeResult result;
  result.text.reserve(response.size());
  std::size_t cursor = 0;
  for (const auto& tok : find_placeholder_tokens(response)) {
    result.text.append(response.substr(cursor, tok.begin - cursor));
    if (auto original = map.original_of(tok.token)) {
      result.text.append(*original);
    } else {
      result.text.append(tok.token);
      result.unknown_placeholders.push_back(tok.token);
    }
    cursor = tok.end;
  }
  result.text.append(response.substr(cursor));
  return result;
}

}  // namespace islandrun::mist
