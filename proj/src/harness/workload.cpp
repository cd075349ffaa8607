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
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "islandrun/errors.hpp"
#include "islandrun/workload.hpp"

namespace islandrun::harness {
namespace {

using Templates = std::vector<std::string_view>;

struct DomainTemplates {
  Templates low;
  Templates moderate;
  Templates high;
};

const std::map<std::string_view, DomainTemplates>& domains() {
  static const std::map<std::string_view, DomainTemplates> kDomains = {
      {"general",
       {{
            "What is {topic}?",
            "Explain {topic} in simple terms.",
            "Plan a weekend itinerary for {city}.",
            "Give me three fun facts about {topic}.",
            "Write a short birthday message for {name}.",
        },
        {
            "Summarize the internal meeting notes about {topic}.",
            "Draft a roadmap update for the {city} office.",
            "Turn the meeting notes from {name} into action items.",
            "Prepare the quarterly plan summary for the {org} account.",
        },
        {
            "Card {card} was charged twice; email {email} the refund details.",
            "My account number {account} at {org} Bank shows a wrong balance since {date}.",
            "Dispute the charge on card {card} for {name} in {city}.",
        }}},
      {"healthcare",
       {{
            "What are common {condition} complications?",
            "How does regular exercise affect {condition}?",
            "Explain what a normal resting heart rate is.",
            "What questions should I ask a nutritionist in {city}?",
        },
        {
            "Summarize recent literature on {condition} management.",
            "Compare clinical guidelines for {condition} screening.",
            "List clinical trials on {condition} that started this year.",
            "Write a research summary on {condition} outcomes in {city}.",
        },
        {
            "Patient {name}, DOB {date}, was diagnosed with {condition} and takes {medication}.",
            "Update the treatment plan for {name} (SSN {ssn}) after {medication} was changed.",
            "Patient {name} in {city} is on {medication}; HbA1c elevated since {date}.",
            "Draft a discharge summary for {name}, MRN {mrn}, diagnosed with {condition}.",
        }}},
      {"legal",
       {{
            "What does a notary public do?",
            "Explain the difference between a will and a living trust.",
            "How long does a small claims case usually take in {city}?",
            "What is the statute of limitations concept in plain words?",
        },
        {
            "Find case law on {legal_topic}.",
            "Summarize the precedents on {legal_topic} in {city}.",
            "Draft an internal note on {legal_topic} for the team.",
            "List the precedents the {org} brief relies on.",
        },
        {
            "Review the privileged attorney-client memo for {name} about the {org} dispute.",
            "Prepare the privileged settlement memo for {name}, SSN {ssn}.",
            "Summarize the attorney-client call with {name} on {date} about {legal_topic}.",
        }}},
      {"software",
       {{
            "How do I reverse a linked list in Python?",
            "Explain {topic} with a small example.",
            "What is the difference between a process and a thread?",
            "Suggest names for a weather app that shows {city} forecasts.",
        },
        {
            "Review the internal codebase module that handles {topic}.",
            "Prepare design review notes for the {org} integration.",
            "Draft a roadmap for migrating the codebase to {topic}.",
        },
        {
            "Debug the proprietary pricing engine; the failing test uses card {card}.",
            "Our proprietary ranking model logs {email} and {phone}; patch it.",
            "Audit the proprietary billing job that stores account number {account}.",
        }}},
  };
  return kDomains;
}

const std::map<std::string_view, std::vector<std::string_view>>& vocabularies() {
  static const std::map<std::string_view, std::vector<std::string_view>> kVocab = {
      {"name", {"John Doe", "Maria Garcia", "Priya Patel", "Ahmed Hassan", "Sarah Chen",
                "Carlos Rivera", "Emily Clark", "Kenji Sato"}},
      {"city", {"Chicago", "Boston", "Seattle", "Denver", "Austin", "Portland"}},
      {"org", {"Acme", "Globex", "Northwind", "Contoso", "Initech"}},
      {"condition", {"diabetes", "hypertension", "asthma", "migraine", "arrhythmia"}},
      {"medication", {"metformin", "lisinopril", "atorvastatin", "insulin", "albuterol"}},
      {"date", {"03/14/2024", "2024-06-02", "January 12, 2025", "11/30/2023"}},
      {"ssn", {"123-45-6789", "078-05-1120", "219-09-9999"}},
      {"mrn", {"00482913", "5521907", "88120347"}},
      {"email", {"john.doe@example.com", "m.garcia@clinic.example.org", "ops@globex.example"}},
      {"phone", {"312-555-0142", "617-555-0199", "206-555-0123"}},
      {"card", {"4111 1111 1111 1111", "5500 0000 0000 0004", "4012 8888 8888 1881"}},
      {"account", {"48291735", "1029384756", "55501234"}},
      {"topic", {"photosynthesis", "the water cycle", "binary search", "compound interest",
                 "plate tectonics", "garbage collection", "sourdough baking"}},
      {"legal_topic", {"tenant eviction", "non-compete clauses", "trademark dilution",
                       "wrongful termination"}},
  };
  return kVocab;
}

}  // namespace

double band_floor(Band b) {
  switch (b) {
    case Band::Low: return 0.2;
    case Band::Moderate: return 0.5;
    case Band::High: return 0.9;
  }
  return 1.0;
}

bool is_known_domain(std::string_view domain) { return domains().contains(domain); }

std::vector<std::string> known_domains() {
  std::vector<std::string> out;
  for (const auto& [name, t] : domains()) out.emplace_back(name);
  return out;
}

std::span<const std::string_view> prompt_templates(std::string_view domain, Band band) {
  auto it = domains().find(domain);
  if (it == domains().end()) {
    throw ValidationError(fmt::format("unknown workload domain '{}'", domain));
  }
  switch (band) {
    case Band::Low: return it->second.low;
    case Band::Moderate: return it->second.moderate;
    case Band::High: return it->second.high;
  }
  return {};
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string fill_template(std::string_view templ, std::mt19937_64& rng) {
  std::string out;
  std::size_t pos = 0;
  while (pos < templ.size()) {
    const auto open = templ.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(templ.substr(pos));
      break;
    }
    const auto close = templ.find('}', open);
    if (close == std::string_view::npos) {
      throw std::logic_error(fmt::format("unterminated slot in template '{}'", templ));
    }
    out.append(templ.substr(pos, open - pos));
    const auto slot = templ.substr(open + 1, close - open - 1);
    auto it = vocabularies().find(slot);
    if (it == vocabularies().end()) {
      throw std::logic_error(fmt::format("unknown slot '{}' in template '{}'", slot, templ));
    }
    out.append(it->second[uniform_below(rng, it->second.size())]);
    pos = close + 1;
  }
  return out;
}

std::vector<std::size_t> apportion(std::size_t total, std::span<const double> fractions) {
  std::vector<std::size_t> counts(fractions.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total && !remainders.empty(); ++k) {
    ++counts[remainders[k % remainders.size()].second];
    ++assigned;
  }
  return counts;
}

std::vector<GeneratedRequest> generate_workload(const WorkloadSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t total = spec.requests.empty() ? spec.total : spec.requests.size();
  const std::size_t width = std::max<std::size_t>(4, fmt::format("{}", total).size());
  const std::size_t per_tick = std::max<std::size_t>(1, spec.requests_per_tick);
  const std::size_t turns = std::max<std::size_t>(1, spec.conversation_turns);

  std::vector<GeneratedRequest> out;
  out.reserve(total);
  auto base = [&](std::size_t i) {
    GeneratedRequest r;
    r.index = i;
    r.id = fmt::format("r{:0{}}", i, width);
    r.tick = static_cast<tide::Tick>(i / per_tick);
    r.deadline_ms = spec.deadline_ms;
    return r;
  };

  if (!spec.requests.empty()) {
    std::map<std::string, std::size_t> turn_of;
    for (std::size_t i = 0; i < spec.requests.size(); ++i) {
      const auto& s = spec.requests[i];
      auto r = base(i);
      r.scripted = true;
      r.prompt = s.prompt;
      r.tier_class = s.tier_class;
      r.required_assets = s.required_assets;
      if (s.deadline_ms) r.deadline_ms = *s.deadline_ms;
      r.conversation = s.conversation;
      r.turn = turn_of[s.conversation]++;
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<double> fractions;
  for (const auto& b : spec.bands) fractions.push_back(b.fraction);
  const auto counts = apportion(total, fractions);
  std::vector<std::size_t> labels;
  labels.reserve(total);
  for (std::size_t b = 0; b < counts.size(); ++b) labels.insert(labels.end(), counts[b], b);
  for (std::size_t i = labels.size(); i > 1; --i) {
    std::swap(labels[i - 1], labels[uniform_below(rng, i)]);
  }

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& band = spec.bands[labels[i]];
    auto r = base(i);
    r.band = band.band;

    const auto& mix = band.tier_mix ? *band.tier_mix : spec.tier_mix;
    const double u = uniform_unit(rng);
    if (u < mix.primary) {
      r.tier_class = waves::TierClass::Primary;
    } else if (u < mix.primary + mix.secondary) {
      r.tier_class = waves::TierClass::Secondary;
    } else {
      r.tier_class = waves::TierClass::Burstable;
    }
    if (uniform_unit(rng) < band.asset_fraction) r.required_assets = band.required_assets;

    const auto templates = prompt_templates(spec.domain, band.band);
    r.prompt = fill_template(templates[uniform_below(rng, templates.size())], rng);
    r.conversation = fmt::format("c{:0{}}", i / turns, width);
    r.turn = i % turns;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace islandrun::harness
