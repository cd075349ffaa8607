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

#include "islandrun/mist.hpp"
#include "mist_internal.hpp"

namespace islandrun::mist {

std::string_view to_string(SensitivityClass c) {
  switch (c) {
    case SensitivityClass::Public: return "public";
    case SensitivityClass::Internal: return "internal";
    case SensitivityClass::Confidential: return "confidential";
    case SensitivityClass::Restricted: return "restricted";
  }
  return "unknown";
}

double class_value(SensitivityClass c) {
  switch (c) {
    case SensitivityClass::Public: return 0.2;
    case SensitivityClass::Internal: return 0.5;
    case SensitivityClass::Confidential: return 0.8;
    case SensitivityClass::Restricted: return 1.0;
  }
  return 1.0;
}

LexiconClassifier::LexiconClassifier(std::shared_ptr<const PatternSet> patterns)
    : patterns_(std::move(patterns)) {
  for (const auto& rule : patterns_->rules()) {
    if (rule.use == RuleUse::Stage2) lexicons_.push_back(&rule);
  }
}

SensitivityClass LexiconClassifier::classify(std::string_view prompt) const {
  auto result = SensitivityClass::Public;
  for (const auto* rule : lexicons_) {
    if (rule->level <= result) continue;
    if (std::regex_search(prompt.begin(), prompt.end(), rule->regex)) result = rule->level;
  }
  return result;
}

SensitivityAnalyzer::SensitivityAnalyzer(std::shared_ptr<const PatternSet> patterns)
    : SensitivityAnalyzer(patterns, std::make_shared<const LexiconClassifier>(patterns)) {}

SensitivityAnalyzer::SensitivityAnalyzer(std::shared_ptr<const PatternSet> patterns,
                                         std::shared_ptr<const ContextClassifier> classifier)
    : patterns_(std::move(patterns)), classifier_(std::move(classifier)) {
  for (const auto& rule : patterns_->rules()) {
    if (rule.use == RuleUse::Stage1) stage1_.push_back(&rule);
  }
}

SensitivityReport SensitivityAnalyzer::analyze(std::string_view prompt) const {
  SensitivityReport report;
  double stage1 = 0.0;
  for (const auto* rule : stage1_) {
    detail::for_each_match(*rule, prompt, [&](std::size_t begin, std::size_t end) {
      report.triggers.push_back({rule->category, begin, end, rule->floor});
      stage1 = std::max(stage1, rule->floor);
    });
  }
  std::stable_sort(report.triggers.begin(), report.triggers.end(),
                   [](const Trigger& a, const Trigger& b) { return a.begin < b.begin; });
  report.stage2_class = classifier_->classify(prompt);
  report.score = std::max(stage1, class_value(report.stage2_class));
  return report;
}

SensitivityReport SensitivityAnalyzer::fallback() {
  SensitivityReport report;
  report.score = 1.0;
  report.stage2_class = SensitivityClass::Restricted;
  return report;
}

}  // namespace islandrun::mist
