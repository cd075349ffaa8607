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

// Sensitivity scoring and reversible typed-placeholder sanitization.
//
// Detection is rule based: every pattern comes from a versioned pattern file
// (see docs/patterns.md). The analyzer, the classifier and the detector are
// immutable after construction and may be shared between threads. A
// PlaceholderMap belongs to exactly one request/session.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace islandrun::mist {

enum class EntityKind {
  PERSON,
  LOCATION,
  ID,
  ORG,
  MEDICAL_CONDITION,
  TEMPORAL_REFERENCE,
  FINANCIAL,
};
inline constexpr std::size_t kEntityKindCount = 7;

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> parse_entity_kind(std::string_view text);

enum class SensitivityClass { Public, Internal, Confidential, Restricted };

std::string_view to_string(SensitivityClass c);
double class_value(SensitivityClass c);  // 0.2, 0.5, 0.8, 1.0

// ---------------------------------------------------------------------------
// Pattern set

enum class RuleUse { Stage1, Stage2, Entity };

struct PatternRule {
  std::string category;  // e.g. "pii.email", "class.internal", "entity.PERSON"
  double floor = 0.0;
  std::string expression;
  RuleUse use = RuleUse::Stage1;
  bool case_insensitive = false;
  bool luhn = false;                   // digits of the match must pass Luhn
  std::optional<EntityKind> entity;    // set for RuleUse::Entity
  SensitivityClass level = SensitivityClass::Public;  // set for RuleUse::Stage2
  std::regex regex;
  int line = 0;
};

class PatternSet {
 public:
  // Parses the text format. Throws ConfigError with the offending line.
  static PatternSet parse(std::string_view text, std::string origin = "<memory>");
  static PatternSet load(const std::filesystem::path& path);
  // The pattern file shipped in data/, compiled into the library.
  static std::shared_ptr<const PatternSet> builtin();

  int version() const noexcept { return version_; }
  const std::string& origin() const noexcept { return origin_; }
  std::size_t size() const noexcept { return rules_.size(); }
  const std::vector<PatternRule>& rules() const noexcept { return rules_; }

 private:
  int version_ = 0;
  std::string origin_;
  std::vector<PatternRule> rules_;
};

// ---------------------------------------------------------------------------
// Sensitivity analysis

struct Trigger {
  std::string category;
  std::size_t begin = 0;
  std::size_t end = 0;
  double floor = 0.0;
};

struct SensitivityReport {
  double score = 0.2;
  std::vector<Trigger> triggers;
  SensitivityClass stage2_class = SensitivityClass::Public;
};

// Stage 2 contextual classification. Implementations must be deterministic.
class ContextClassifier {
 public:
  virtual ~ContextClassifier() = default;
  virtual SensitivityClass classify(std::string_view prompt) const = 0;
};

// Keyword lexicons per class; the highest matching class wins, Public if none.
class LexiconClassifier final : public ContextClassifier {
 public:
  explicit LexiconClassifier(std::shared_ptr<const PatternSet> patterns);
  SensitivityClass classify(std::string_view prompt) const override;

 private:
  std::shared_ptr<const PatternSet> patterns_;
  std::vector<const PatternRule*> lexicons_;
};

class SensitivityAnalyzer {
 public:
  explicit SensitivityAnalyzer(std::shared_ptr<const PatternSet> patterns = PatternSet::builtin());
  SensitivityAnalyzer(std::shared_ptr<const PatternSet> patterns,
                      std::shared_ptr<const ContextClassifier> classifier);

  // score = max(stage-1 floors that fired, stage-2 class value).
  SensitivityReport analyze(std::string_view prompt) const;

  // Conservative report used when the analyzer is unavailable.
  static SensitivityReport fallback();

 private:
  std::shared_ptr<const PatternSet> patterns_;
  std::shared_ptr<const ContextClassifier> classifier_;
  std::vector<const PatternRule*> stage1_;
};

// ---------------------------------------------------------------------------
// Entity detection

struct Entity {
  EntityKind kind;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string surface;

  friend bool operator==(const Entity&, const Entity&) = default;
};

class EntityDetector {
 public:
  explicit EntityDetector(std::shared_ptr<const PatternSet> patterns = PatternSet::builtin());

  // Non-overlapping, sorted by start offset. Overlaps resolve to the longest
  // match, then the earliest start, then EntityKind order.
  std::vector<Entity> detect(std::string_view text) const;

 private:
  std::shared_ptr<const PatternSet> patterns_;
  std::vector<const PatternRule*> rules_;
};

// ---------------------------------------------------------------------------
// Placeholders

// "[KIND_n]" for a kind and a 1-based ordinal.
std::string make_placeholder(EntityKind kind, int ordinal);

// Every "[KIND_n]" token in `text`, in order of appearance.
struct PlaceholderToken {
  std::size_t begin;
  std::size_t end;
  std::string token;
};
std::vector<PlaceholderToken> find_placeholder_tokens(std::string_view text);

struct PlaceholderEntry {
  std::string placeholder;
  std::string original;
  EntityKind kind;
};

// Per-session bijection placeholder <-> original surface string.
class PlaceholderMap {
 public:
  explicit PlaceholderMap(std::string session_id);

  const std::string& session_id() const noexcept { return session_id_; }

  // Placeholder already bound to `surface`, or a fresh one for `kind`.
  const std::string& assign(EntityKind kind, const std::string& surface);

  // Tokens that must never be handed out (they already occur verbatim in the
  // text being sanitized).
  void reserve(std::string token);

  std::optional<std::string_view> original_of(std::string_view placeholder) const;
  std::optional<std::string_view> placeholder_of(std::string_view original) const;

  const std::vector<PlaceholderEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::string session_id_;
  std::vector<PlaceholderEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_placeholder_;
  std::unordered_map<std::string, std::size_t> by_original_;
  std::unordered_set<std::string> reserved_;
  std::array<int, kEntityKindCount> next_ordinal_{};
};

struct SanitizedHistory {
  std::vector<std::string> turns;
  PlaceholderMap map;
};

struct DesanitizeResult {
  std::string text;
  // Placeholder-shaped tokens with no binding in the map, left verbatim.
  std::vector<std::string> unknown_placeholders;
};

using SessionIdSource = std::function<std::string()>;

// 128-bit hex token from std::random_device.
std::string random_session_id();

class Sanitizer {
 public:
  explicit Sanitizer(std::shared_ptr<const EntityDetector> detector =
                         std::make_shared<const EntityDetector>(),
                     SessionIdSource session_ids = random_session_id);

  // Forward pass for a target island with privacy score `target_privacy`
  // (< 1.0; fully trusted targets bypass sanitization). Throws ValidationError
  // otherwise.
  SanitizedHistory sanitize(std::span<const std::string> history, double target_privacy) const;
  SanitizedHistory sanitize(std::span<const std::string> history, double target_privacy,
                            std::string session_id) const;

  const EntityDetector& detector() const noexcept { return *detector_; }

 private:
  std::shared_ptr<const EntityDetector> detector_;
  SessionIdSource session_ids_;
};

// Backward pass. Only exact placeholder tokens are rewritten.
DesanitizeResult desanitize(std::string_view response, const PlaceholderMap& map);

}  // namespace islandrun::mist
