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

#pragma once

#include <algorithm>
#include <cctype>
#include <regex>
#include <string_view>

#include "islandrun/mist.hpp"

namespace islandrun::mist::detail {

inline bool passes_luhn(std::string_view s) {
  int digits = 0;
  int sum = 0;
  bool doubled = false;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (!std::isdigit(static_cast<unsigned char>(*it))) continue;
    int d = *it - '0';
    if (doubled) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    doubled = !doubled;
    ++digits;
  }
  return digits >= 13 && digits <= 19 && sum % 10 == 0;
}

// Luhn rules: from every word-aligned digit, the longest span that matches
// the whole rule and passes Luhn. Spans may overlap; callers resolve them.
template <typename Fn>
void for_each_luhn_match(const PatternRule& rule, std::string_view text, Fn&& fn) {
  constexpr std::size_t kMaxSpan = 40;
  const auto digit = [&](std::size_t i) {
    return std::isdigit(static_cast<unsigned char>(text[i])) != 0;
  };
  const auto alnum = [&](std::size_t i) {
    return std::isalnum(static_cast<unsigned char>(text[i])) != 0;
  };
  std::size_t b = 0;
  while (b < text.size()) {
    if (!digit(b) || (b > 0 && alnum(b - 1))) {
      ++b;
      continue;
    }
    std::size_t found = 0;
    for (std::size_t e = std::min(text.size(), b + kMaxSpan); e > b; --e) {
      if (!digit(e - 1) || (e < text.size() && alnum(e))) continue;
      const auto sub = text.substr(b, e - b);
      if (passes_luhn(sub) && std::regex_match(sub.begin(), sub.end(), rule.regex)) {
        found = e;
        break;
      }
    }
    if (found > 0) fn(b, found);
    ++b;
  }
}

// Calls fn(begin, end) for every match of `rule` in `text`. When the rule has
// a first capture group that participated, its span is reported instead of the
// whole match. Luhn rules report the whole span.
template <typename Fn>
void for_each_match(const PatternRule& rule, std::string_view text, Fn&& fn) {
  if (rule.luhn) {
    for_each_luhn_match(rule, text, fn);
    return;
  }
  using Iter = std::regex_iterator<std::string_view::const_iterator>;
  for (Iter it(text.begin(), text.end(), rule.regex), end; it != end; ++it) {
    const auto& m = *it;
    std::size_t begin = static_cast<std::size_t>(m.position(0));
    std::size_t len = static_cast<std::size_t>(m.length(0));
    if (m.size() > 1 && m[1].matched) {
      begin = static_cast<std::size_t>(m.position(1));
      len = static_cast<std::size_t>(m.length(1));
    }
    if (len == 0) continue;
    fn(begin, begin + len);
  }
}

}  // namespace islandrun::mist::detail
