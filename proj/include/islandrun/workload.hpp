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

// Seeded workload generation with band-matched prompt templates.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "islandrun/scenario_config.hpp"
#include "islandrun/waves.hpp"

namespace islandrun::harness {

// Score MIST assigns to prompts of each band: 0.2, 0.5 and at least 0.9.
double band_floor(Band b);

bool is_known_domain(std::string_view domain);
std::vector<std::string> known_domains();

// Prompt templates for a domain and band. "{slot}" markers are filled from
// fixed vocabularies (name, city, org, condition, medication, date, ssn,
// email, phone, card, topic).
std::span<const std::string_view> prompt_templates(std::string_view domain, Band band);

// Replaces every "{slot}" in `templ` with a vocabulary entry drawn from `rng`.
std::string fill_template(std::string_view templ, std::mt19937_64& rng);

// Uniform integer in [0, n) by rejection; identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);
// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng);

// Largest-remainder apportionment of `total` over `fractions`; ties go to the
// earlier entry. The counts sum to `total`.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> fractions);

struct GeneratedRequest {
  std::size_t index = 0;
  std::string id;  // "r0001"-style, zero padded to the stream width
  tide::Tick tick = 0;
  std::string prompt;
  Band band = Band::Low;  // intended band; not meaningful when scripted
  bool scripted = false;
  waves::TierClass tier_class = waves::TierClass::Secondary;
  std::vector<std::string> required_assets;
  double deadline_ms = 0.0;
  std::string conversation;
  std::size_t turn = 0;  // position within the conversation
};

// Deterministic request stream: scripted requests when the spec lists them,
// otherwise the band census shuffled with `seed`.
std::vector<GeneratedRequest> generate_workload(const WorkloadSpec& spec, std::uint64_t seed);

}  // namespace islandrun::harness
