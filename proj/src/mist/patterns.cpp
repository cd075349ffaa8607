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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "islandrun/errors.hpp"
#include "islandrun/mist.hpp"

namespace islandrun::mist {

// Generated from data/mist_patterns.txt at build time.
extern const char* const kBuiltinPatternText;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits off the next whitespace-delimited token.
std::string_view next_token(std::string_view& rest) {
  rest = trim(rest);
  const auto end = rest.find_first_of(" \t");
  auto token = rest.substr(0, end);
  rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
  return token;
}

std::optional<double> parse_double(std::string_view s) {
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<SensitivityClass> parse_class(std::string_view name) {
  if (name == "public") return SensitivityClass::Public;
  if (name == "internal") return SensitivityClass::Internal;
  if (name == "confidential") return SensitivityClass::Confidential;
  if (name == "restricted") return SensitivityClass::Restricted;
  return std::nullopt;
}

PatternRule parse_rule(std::string_view line, int line_no) {
  std::string_view rest = line;
  const auto category_token = next_token(rest);
  const auto floor_token = next_token(rest);
  const auto expression = trim(rest);
  if (category_token.empty() || floor_token.empty() || expression.empty()) {
    throw ConfigError("pattern rule needs <category> <floor> <expression>", line_no);
  }

  PatternRule rule;
  rule.line = line_no;
  std::string_view category = category_token;
  constexpr std::string_view kLuhn = "!luhn";
  if (category.size() > kLuhn.size() && category.ends_with(kLuhn)) {
    rule.luhn = true;
    category.remove_suffix(kLuhn.size());
  }
  rule.category = std::string(category);

  const auto floor = parse_double(floor_token);
  if (!floor || *floor < 0.0 || *floor > 1.0) {
    throw ConfigError(fmt::format("floor '{}' is not a score in [0,1]", floor_token), line_no);
  }
  rule.floor = *floor;

  const auto dot = category.find('.');
  const auto group = category.substr(0, dot);
  const auto name = dot == std::string_view::npos ? std::string_view{} : category.substr(dot + 1);
  if (name.empty()) {
    throw ConfigError(fmt::format("category '{}' must be <group>.<name>", category), line_no);
  }

  if (group == "class") {
    const auto level = parse_class(name);
    if (!level || *level == SensitivityClass::Public) {
      throw ConfigError(fmt::format("unknown stage-2 class '{}'", name), line_no);
    }
    if (rule.floor != class_value(*level)) {
      throw ConfigError(fmt::format("class.{} must carry floor {}", name, class_value(*level)),
                        line_no);
    }
    rule.use = RuleUse::Stage2;
    rule.level = *level;
  } else if (group == "entity") {
    const auto kind = parse_entity_kind(name.substr(0, name.find('.')));
    if (!kind) {
      throw ConfigError(fmt::format("unknown entity kind in '{}'", category), line_no);
    }
    if (rule.floor != 0.0) {
      throw ConfigError("entity rules carry floor 0", line_no);
    }
    rule.use = RuleUse::Entity;
    rule.entity = kind;
  } else {
    if (rule.floor <= 0.0) {
      throw ConfigError("stage-1 rules need a positive floor", line_no);
    }
    rule.use = RuleUse::Stage1;
  }

  std::string_view expr = expression;
  constexpr std::string_view kIcase = "(?i)";
  if (expr.starts_with(kIcase)) {
    rule.case_insensitive = true;
    expr.remove_prefix(kIcase.size());
  }
  rule.expression = std::string(expr);
  auto flags = std::regex::ECMAScript | std::regex::optimize;
  if (rule.case_insensitive) flags |= std::regex::icase;
  try {
    rule.regex = std::regex(rule.expression, flags);
  } catch (const std::regex_error& e) {
    throw ConfigError(fmt::format("invalid expression for {}: {}", rule.category, e.what()),
                      line_no);
  }
  return rule;
}

}  // namespace

PatternSet PatternSet::parse(std::string_view text, std::string origin) {
  PatternSet set;
  set.origin_ = std::move(origin);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.starts_with("version")) {
      std::string_view rest = line;
      next_token(rest);
      const auto number = trim(rest);
      int version = 0;
      const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), version);
      if (ec != std::errc{} || ptr != number.data() + number.size() || version <= 0) {
        throw ConfigError(fmt::format("bad version directive '{}'", line), line_no);
      }
      if (set.version_ != 0) throw ConfigError("duplicate version directive", line_no);
      set.version_ = version;
      continue;
    }
    if (set.version_ == 0) {
      throw ConfigError("pattern file must start with a version directive", line_no);
    }
    set.rules_.push_back(parse_rule(line, line_no));
  }
  if (set.version_ == 0) throw ConfigError("pattern file has no version directive");
  return set;
}

PatternSet PatternSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read pattern file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::shared_ptr<const PatternSet> PatternSet::builtin() {
  static const auto set =
      std::make_shared<const PatternSet>(parse(kBuiltinPatternText, "builtin:mist_patterns.txt"));
  return set;
}

}  // namespace islandrun::mist
