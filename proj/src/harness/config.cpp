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

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "islandrun/errors.hpp"
#include "islandrun/scenario_config.hpp"
#include "islandrun/workload.hpp"

namespace islandrun::harness {
namespace {

constexpr double kSumSlack = 1e-9;

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

void require_map(const YAML::Node& n, std::string_view where) {
  if (!n.IsMap()) throw ConfigError(fmt::format("{} must be a mapping", where), line_of(n));
}

void require_seq(const YAML::Node& n, std::string_view where) {
  if (!n.IsSequence()) throw ConfigError(fmt::format("{} must be a list", where), line_of(n));
}

void check_keys(const YAML::Node& n, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) {
      throw ConfigError(fmt::format("unknown key '{}' in {}", key, where), line_of(kv.first));
    }
  }
}

template <typename T>
T as(const YAML::Node& n, std::string_view what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("{} has the wrong type", what), line_of(n));
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out, std::string_view where) {
  if (auto n = parent[key]) out = as<T>(n, fmt::format("{}.{}", where, key));
}

template <typename T>
T required(const YAML::Node& parent, const char* key, std::string_view where) {
  auto n = parent[key];
  if (!n) throw ConfigError(fmt::format("{} needs '{}'", where, key), line_of(parent));
  return as<T>(n, fmt::format("{}.{}", where, key));
}

template <typename Parse>
auto parse_enum(const YAML::Node& n, std::string_view what, Parse parse) {
  const auto text = as<std::string>(n, what);
  auto value = parse(text);
  if (!value) throw ConfigError(fmt::format("{}: unknown value '{}'", what, text), line_of(n));
  return *value;
}

double trust_component(const YAML::Node& n, std::string_view what) {
  static const std::map<std::string, double, std::less<>> kNamed = {
      {"local", registry::trust::kBaseLocal},
      {"private_edge", registry::trust::kBasePrivateEdge},
      {"public_cloud", registry::trust::kBasePublicCloud},
      {"iso27001", registry::trust::kCertIso27001},
      {"soc2", registry::trust::kCertSoc2},
      {"self", registry::trust::kCertSelf},
      {"same_country", registry::trust::kJurisdictionSameCountry},
      {"eu_gdpr", registry::trust::kJurisdictionEuGdpr},
      {"foreign", registry::trust::kJurisdictionForeign},
  };
  const auto text = as<std::string>(n, what);
  if (auto it = kNamed.find(text); it != kNamed.end()) return it->second;
  return as<double>(n, what);
}

TierMix parse_tier_mix(const YAML::Node& n, std::string_view where) {
  require_map(n, where);
  check_keys(n, {"primary", "secondary", "burstable"}, where);
  TierMix mix{0.0, 0.0, 0.0};
  read(n, "primary", mix.primary, where);
  read(n, "secondary", mix.secondary, where);
  read(n, "burstable", mix.burstable, where);
  return mix;
}

std::vector<std::string> parse_strings(const YAML::Node& n, std::string_view where) {
  require_seq(n, where);
  std::vector<std::string> out;
  for (const auto& item : n) out.push_back(as<std::string>(item, where));
  return out;
}

IslandConfig parse_island(const YAML::Node& n) {
  require_map(n, "islands entry");
  check_keys(n,
             {"id", "name", "tier", "latency_ms", "cost_per_request", "cost_model", "privacy",
              "trust", "buffer_profile", "capacity", "assets"},
             "island");
  IslandConfig island;
  island.line = line_of(n);
  auto& d = island.declaration;
  d.id = required<std::string>(n, "id", "island");
  const auto where = fmt::format("island '{}'", d.id);
  read(n, "name", d.name, where);
  d.tier = parse_enum(required<YAML::Node>(n, "tier", where), where + ".tier", registry::parse_tier);
  d.latency_ms = required<double>(n, "latency_ms", where);
  read(n, "cost_per_request", d.cost_per_request, where);
  if (auto cm = n["cost_model"]) {
    d.cost_model = parse_enum(cm, where + ".cost_model", [](std::string_view t) {
      std::optional<registry::CostModel> m;
      if (t == "flat") m = registry::CostModel::Flat;
      if (t == "variable") m = registry::CostModel::Variable;
      return m;
    });
  }
  d.privacy_score = required<double>(n, "privacy", where);
  if (auto t = n["trust"]) {
    require_map(t, where + ".trust");
    check_keys(t, {"base", "certification", "jurisdiction"}, where + ".trust");
    if (t["base"]) d.trust.base = trust_component(t["base"], where + ".trust.base");
    if (t["certification"]) {
      d.trust.certification = trust_component(t["certification"], where + ".trust.certification");
    }
    if (t["jurisdiction"]) {
      d.trust.jurisdiction = trust_component(t["jurisdiction"], where + ".trust.jurisdiction");
    }
  }
  if (auto bp = n["buffer_profile"]) {
    island.buffer_profile = parse_enum(bp, where + ".buffer_profile", tide::parse_buffer_profile);
  }
  read(n, "capacity", island.capacity_script, where);
  d.capacity_profile = island.capacity_script;
  if (auto assets = n["assets"]) {
    require_seq(assets, where + ".assets");
    for (const auto& a : assets) {
      if (a.IsScalar()) {
        d.assets.push_back({as<std::string>(a, where + ".assets"), registry::AssetKind::VectorIndex});
        continue;
      }
      require_map(a, where + ".assets entry");
      check_keys(a, {"id", "kind"}, where + ".assets entry");
      registry::DataAssetId asset;
      asset.id = required<std::string>(a, "id", where + ".assets entry");
      if (auto k = a["kind"]) asset.kind = parse_enum(k, where + ".assets.kind", registry::parse_asset_kind);
      d.assets.push_back(std::move(asset));
    }
  }
  return island;
}

tide::CapacityRow parse_row(const YAML::Node& n, std::string_view where) {
  tide::CapacityRow row;
  if (n.IsSequence()) {
    if (n.size() != 5) {
      throw ConfigError(fmt::format("{} rows are [tick, cpu_pct, gpu_pct, mem_used, mem_total]",
                                    where),
                        line_of(n));
    }
    row.tick = as<tide::Tick>(n[0], where);
    row.cpu_pct = as<double>(n[1], where);
    row.gpu_pct = as<double>(n[2], where);
    row.mem_used = as<double>(n[3], where);
    row.mem_total = as<double>(n[4], where);
    return row;
  }
  require_map(n, where);
  check_keys(n, {"tick", "cpu_pct", "gpu_pct", "mem_used", "mem_total"}, where);
  row.tick = required<tide::Tick>(n, "tick", where);
  read(n, "cpu_pct", row.cpu_pct, where);
  read(n, "gpu_pct", row.gpu_pct, where);
  read(n, "mem_used", row.mem_used, where);
  read(n, "mem_total", row.mem_total, where);
  return row;
}

BandSpec parse_band_spec(Band band, const YAML::Node& n) {
  const auto where = fmt::format("workload.bands.{}", to_string(band));
  BandSpec spec;
  spec.band = band;
  spec.line = line_of(n);
  if (n.IsScalar()) {
    spec.fraction = as<double>(n, where);
    return spec;
  }
  require_map(n, where);
  check_keys(n, {"fraction", "tier_mix", "required_assets", "asset_fraction"}, where);
  spec.fraction = required<double>(n, "fraction", where);
  if (auto m = n["tier_mix"]) spec.tier_mix = parse_tier_mix(m, where + ".tier_mix");
  if (auto a = n["required_assets"]) {
    spec.required_assets = parse_strings(a, where + ".required_assets");
    spec.asset_fraction = 1.0;
  }
  read(n, "asset_fraction", spec.asset_fraction, where);
  return spec;
}

ScriptedRequest parse_request(const YAML::Node& n, std::size_t index) {
  const auto where = fmt::format("workload.requests[{}]", index);
  ScriptedRequest r;
  r.line = line_of(n);
  if (n.IsScalar()) {
    r.prompt = as<std::string>(n, where);
  } else {
    require_map(n, where);
    check_keys(n, {"prompt", "tier", "assets", "deadline_ms", "conversation"}, where);
    r.prompt = required<std::string>(n, "prompt", where);
    if (auto t = n["tier"]) r.tier_class = parse_enum(t, where + ".tier", waves::parse_tier_class);
    if (auto a = n["assets"]) r.required_assets = parse_strings(a, where + ".assets");
    if (auto d = n["deadline_ms"]) r.deadline_ms = as<double>(d, where + ".deadline_ms");
    read(n, "conversation", r.conversation, where);
  }
  if (r.conversation.empty()) r.conversation = fmt::format("#{}", index);
  return r;
}

WorkloadSpec parse_workload(const YAML::Node& n) {
  require_map(n, "workload");
  check_keys(n,
             {"total", "requests_per_tick", "deadline_ms", "conversation_turns", "domain",
              "tier_mix", "bands", "requests"},
             "workload");
  WorkloadSpec w;
  w.line = line_of(n);
  read(n, "requests_per_tick", w.requests_per_tick, "workload");
  read(n, "deadline_ms", w.deadline_ms, "workload");
  read(n, "conversation_turns", w.conversation_turns, "workload");
  read(n, "domain", w.domain, "workload");
  if (auto m = n["tier_mix"]) w.tier_mix = parse_tier_mix(m, "workload.tier_mix");
  if (auto bands = n["bands"]) {
    require_map(bands, "workload.bands");
    for (const auto& kv : bands) {
      const auto name = as<std::string>(kv.first, "workload.bands key");
      auto band = parse_band(name);
      if (!band) {
        throw ConfigError(fmt::format("unknown band '{}' (low, moderate, high)", name),
                          line_of(kv.first));
      }
      w.bands.push_back(parse_band_spec(*band, kv.second));
    }
  }
  if (auto reqs = n["requests"]) {
    require_seq(reqs, "workload.requests");
    for (std::size_t i = 0; i < reqs.size(); ++i) w.requests.push_back(parse_request(reqs[i], i));
    w.total = w.requests.size();
  }
  if (auto t = n["total"]) {
    const auto total = as<long long>(t, "workload.total");
    if (total < 0) throw ConfigError("workload.total must be >= 0", line_of(t));
    if (!w.requests.empty() && static_cast<std::size_t>(total) != w.requests.size()) {
      throw ConfigError(fmt::format("workload.total {} disagrees with {} scripted requests", total,
                                    w.requests.size()),
                        line_of(t));
    }
    w.total = static_cast<std::size_t>(total);
  }
  return w;
}

void check_unit(ValidationReport& r, double v, std::string_view what, int line) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    r.violations.push_back({fmt::format("{} must lie in [0,1], got {}", what, v), line});
  }
}

void check_mix(ValidationReport& r, const TierMix& m, std::string_view where, int line) {
  check_unit(r, m.primary, fmt::format("{}.primary", where), line);
  check_unit(r, m.secondary, fmt::format("{}.secondary", where), line);
  check_unit(r, m.burstable, fmt::format("{}.burstable", where), line);
  const double sum = m.primary + m.secondary + m.burstable;
  if (std::abs(sum - 1.0) > kSumSlack) {
    r.violations.push_back({fmt::format("{} fractions sum to {}, expected 1", where, sum), line});
  }
}

}  // namespace

std::string_view to_string(Band b) {
  switch (b) {
    case Band::Low: return "low";
    case Band::Moderate: return "moderate";
    case Band::High: return "high";
  }
  return "unknown";
}

std::optional<Band> parse_band(std::string_view text) {
  if (text == "low") return Band::Low;
  if (text == "moderate") return Band::Moderate;
  if (text == "high") return Band::High;
  return std::nullopt;
}

ScenarioConfig parse_config(std::string_view yaml) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("YAML syntax error: {}", e.msg), e.mark.line + 1);
  }
  require_map(root, "scenario");
  check_keys(root,
             {"name", "seed", "trust_mode", "routing", "lighthouse", "islands", "capacity",
              "membership", "workload"},
             "scenario");

  ScenarioConfig c;
  read(root, "name", c.name, "scenario");
  read(root, "seed", c.seed, "scenario");
  if (auto tm = root["trust_mode"]) c.trust_mode = parse_enum(tm, "trust_mode", registry::parse_trust_mode);

  const auto routing = required<YAML::Node>(root, "routing", "scenario");
  require_map(routing, "routing");
  check_keys(routing, {"mode", "score", "budget", "weights", "normalize_weights"}, "routing");
  c.routing_line = line_of(routing);
  if (auto m = routing["mode"]) c.mode = parse_enum(m, "routing.mode", waves::parse_routing_mode);
  if (auto s = routing["score"]) {
    c.score_mode = parse_enum(s, "routing.score", [](std::string_view t) {
      std::optional<waves::ScoreMode> m;
      if (t == "normalized") m = waves::ScoreMode::Normalized;
      if (t == "raw_sum") m = waves::ScoreMode::RawSum;
      return m;
    });
  }
  if (auto b = routing["budget"]) c.budget = as<double>(b, "routing.budget");
  read(routing, "normalize_weights", c.normalize_weights, "routing");
  const auto weights = required<YAML::Node>(routing, "weights", "routing");
  require_map(weights, "routing.weights");
  check_keys(weights, {"cost", "latency", "privacy"}, "routing.weights");
  c.weights_line = line_of(weights);
  c.weights.cost = required<double>(weights, "cost", "routing.weights");
  c.weights.latency = required<double>(weights, "latency", "routing.weights");
  c.weights.privacy = required<double>(weights, "privacy", "routing.weights");

  if (auto lh = root["lighthouse"]) {
    require_map(lh, "lighthouse");
    check_keys(lh, {"suspect_after", "dead_after"}, "lighthouse");
    c.lighthouse_line = line_of(lh);
    read(lh, "suspect_after", c.timeouts.suspect_after, "lighthouse");
    read(lh, "dead_after", c.timeouts.dead_after, "lighthouse");
  }

  const auto islands = required<YAML::Node>(root, "islands", "scenario");
  require_seq(islands, "islands");
  for (const auto& n : islands) c.islands.push_back(parse_island(n));

  if (auto cap = root["capacity"]) {
    require_map(cap, "capacity");
    for (const auto& kv : cap) {
      const auto name = as<std::string>(kv.first, "capacity key");
      const auto where = fmt::format("capacity.{}", name);
      require_seq(kv.second, where);
      CapacityScript script;
      script.line = line_of(kv.first);
      for (const auto& row : kv.second) script.rows.push_back(parse_row(row, where));
      c.capacity.emplace(name, std::move(script));
    }
  }

  if (auto mem = root["membership"]) {
    require_seq(mem, "membership");
    for (const auto& n : mem) {
      require_map(n, "membership entry");
      check_keys(n, {"island", "offline_from", "offline_until"}, "membership entry");
      OfflineInterval o;
      o.line = line_of(n);
      o.island = required<std::string>(n, "island", "membership entry");
      o.from = required<tide::Tick>(n, "offline_from", "membership entry");
      o.until = required<tide::Tick>(n, "offline_until", "membership entry");
      c.offline.push_back(std::move(o));
    }
  }

  c.workload = parse_workload(required<YAML::Node>(root, "workload", "scenario"));
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string ValidationReport::to_text() const {
  std::string out;
  auto emit = [&](std::string_view kind, const Finding& f) {
    if (f.line > 0) {
      out += fmt::format("{} (line {}): {}\n", kind, f.line, f.message);
    } else {
      out += fmt::format("{}: {}\n", kind, f.message);
    }
  };
  for (const auto& v : violations) emit("violation", v);
  for (const auto& n : notes) emit("note", n);
  out += ok() ? "valid\n" : fmt::format("invalid: {} violation(s)\n", violations.size());
  return out;
}

ValidationReport validate_config(const ScenarioConfig& c) {
  ValidationReport r;

  // islands
  std::set<std::string> ids;
  std::set<std::string> assets;
  for (const auto& island : c.islands) {
    const auto& d = island.declaration;
    for (const auto& p : registry::check_declaration(d, c.trust_mode)) {
      r.violations.push_back({fmt::format("island '{}': {}", d.id, p), island.line});
    }
    if (!ids.insert(d.id).second) {
      r.violations.push_back({fmt::format("island id '{}' declared twice", d.id), island.line});
    }
    for (const auto& a : d.assets) assets.insert(a.id);
    if (!island.capacity_script.empty()) {
      if (!c.capacity.contains(island.capacity_script)) {
        r.violations.push_back({fmt::format("island '{}' references unknown capacity script '{}'",
                                            d.id, island.capacity_script),
                                island.line});
      } else if (d.tier == registry::TierLevel::Tier3Cloud) {
        r.notes.push_back({fmt::format("island '{}' is unbounded; its capacity script is ignored",
                                       d.id),
                           island.line});
      }
    }
  }
  if (c.islands.empty()) r.violations.push_back({"scenario declares no islands", 0});

  for (const auto& [name, script] : c.capacity) {
    try {
      tide::ScriptedSource source(script.rows);
    } catch (const ValidationError& e) {
      r.violations.push_back({fmt::format("capacity script '{}': {}", name, e.what()), script.line});
    }
  }

  // routing
  const auto& w = c.weights;
  const bool finite = std::isfinite(w.cost) && std::isfinite(w.latency) && std::isfinite(w.privacy);
  if (!finite || w.cost < 0.0 || w.latency < 0.0 || w.privacy < 0.0) {
    r.violations.push_back({fmt::format("weights must be >= 0, got ({}, {}, {})", w.cost, w.latency,
                                        w.privacy),
                            c.weights_line});
  } else if (w.cost + w.latency + w.privacy <= 0.0) {
    r.violations.push_back({"weights must not all be zero", c.weights_line});
  } else if (!waves::is_normalized(w)) {
    const double sum = w.cost + w.latency + w.privacy;
    if (c.normalize_weights) {
      const auto n = waves::normalize(w);
      r.notes.push_back({fmt::format("weights sum to {}; normalized to ({}, {}, {})", sum, n.cost,
                                     n.latency, n.privacy),
                         c.weights_line});
    } else {
      r.violations.push_back(
          {fmt::format("weights sum to {}, expected 1 (set normalize_weights: true to rescale)", sum),
           c.weights_line});
    }
  }
  if (c.mode == waves::RoutingMode::ConstraintBased && !c.budget) {
    r.violations.push_back({"constraint routing needs routing.budget", c.routing_line});
  }
  if (c.budget && (!std::isfinite(*c.budget) || *c.budget < 0.0)) {
    r.violations.push_back({fmt::format("budget must be >= 0, got {}", *c.budget), c.routing_line});
  }

  // lighthouse
  try {
    lighthouse::validate(c.timeouts);
  } catch (const ValidationError& e) {
    r.violations.push_back({e.what(), c.lighthouse_line});
  }
  for (const auto& o : c.offline) {
    if (!ids.contains(o.island)) {
      r.violations.push_back({fmt::format("membership references unknown island '{}'", o.island),
                              o.line});
    }
    if (o.from < 0 || o.until <= o.from) {
      r.violations.push_back(
          {fmt::format("offline interval [{}, {}) is empty or negative", o.from, o.until), o.line});
    }
  }

  // workload
  const auto& wl = c.workload;
  if (wl.requests_per_tick == 0) {
    r.violations.push_back({"workload.requests_per_tick must be >= 1", wl.line});
  }
  if (!std::isfinite(wl.deadline_ms) || wl.deadline_ms <= 0.0) {
    r.violations.push_back({fmt::format("workload.deadline_ms must be > 0, got {}", wl.deadline_ms),
                            wl.line});
  }
  if (wl.conversation_turns == 0) {
    r.violations.push_back({"workload.conversation_turns must be >= 1", wl.line});
  }
  if (!is_known_domain(wl.domain)) {
    r.violations.push_back({fmt::format("unknown workload domain '{}'", wl.domain), wl.line});
  }
  check_mix(r, wl.tier_mix, "workload.tier_mix", wl.line);

  if (wl.requests.empty()) {
    if (wl.total > 0 && wl.bands.empty()) {
      r.violations.push_back({"workload needs bands (or scripted requests)", wl.line});
    }
    std::set<Band> seen;
    double sum = 0.0;
    for (const auto& b : wl.bands) {
      const auto where = fmt::format("workload.bands.{}", to_string(b.band));
      if (!seen.insert(b.band).second) {
        r.violations.push_back({fmt::format("{} declared twice", where), b.line});
      }
      check_unit(r, b.fraction, where + ".fraction", b.line);
      check_unit(r, b.asset_fraction, where + ".asset_fraction", b.line);
      if (b.tier_mix) check_mix(r, *b.tier_mix, where + ".tier_mix", b.line);
      for (const auto& a : b.required_assets) {
        if (!assets.contains(a)) {
          r.notes.push_back({fmt::format("{} requires asset '{}' that no island hosts", where, a),
                             b.line});
        }
      }
      sum += b.fraction;
    }
    if (!wl.bands.empty() && std::abs(sum - 1.0) > kSumSlack) {
      r.violations.push_back(
          {fmt::format("workload band fractions sum to {}, expected 1", sum), wl.line});
    }
  }
  for (const auto& req : wl.requests) {
    if (req.deadline_ms && (!std::isfinite(*req.deadline_ms) || *req.deadline_ms <= 0.0)) {
      r.violations.push_back({"scripted request deadline must be > 0", req.line});
    }
  }
  return r;
}

waves::RouterOptions router_options(const ScenarioConfig& c) {
  waves::RouterOptions o;
  o.weights = c.normalize_weights ? waves::normalize(c.weights) : c.weights;
  o.mode = c.mode;
  o.score_mode = c.score_mode;
  o.budget = c.budget;
  return o;
}

}  // namespace islandrun::harness
