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

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "islandrun/errors.hpp"
#include "islandrun/harness.hpp"
#include "islandrun/mist.hpp"
#include "islandrun/registry.hpp"
#include "islandrun/scenario_config.hpp"
#include "islandrun/tide.hpp"
#include "islandrun/waves.hpp"

namespace py = pybind11;
using namespace islandrun;

namespace {

using CapacityMap = std::map<std::string, std::pair<double, bool>>;

template <typename E>
E parse_or_throw(std::optional<E> parsed, const std::string& what, const std::string& text) {
  if (!parsed) throw ValidationError("unknown " + what + " '" + text + "'");
  return *parsed;
}

std::string trace_jsonl(const harness::RunResult& r) {
  std::ostringstream out;
  harness::write_trace(out, r.trace);
  return out.str();
}

harness::RunOptions run_options(const std::string& policy, const std::optional<std::string>& disable,
                                std::optional<std::uint64_t> seed,
                                const std::optional<std::string>& mode) {
  harness::RunOptions o;
  o.policy = parse_or_throw(harness::parse_policy(policy), "policy", policy);
  if (disable) o.disabled = parse_or_throw(harness::parse_agent(*disable), "agent", *disable);
  o.seed = seed;
  if (mode) o.mode = parse_or_throw(waves::parse_routing_mode(*mode), "routing mode", *mode);
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Privacy-constrained routing across personal, edge and cloud islands";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  auto reg_err = py::register_exception<RegistrationError>(m, "RegistrationError", PyExc_ValueError);
  py::register_exception<ConflictError>(m, "ConflictError", reg_err.ptr());
  py::register_exception<UnknownIslandError>(m, "UnknownIslandError", PyExc_KeyError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PrivacyViolationError>(m, "PrivacyViolationError", PyExc_RuntimeError);

  // registry ----------------------------------------------------------------
  py::enum_<registry::TierLevel>(m, "TierLevel")
      .value("TIER1_PERSONAL", registry::TierLevel::Tier1Personal)
      .value("TIER2_PRIVATE_EDGE", registry::TierLevel::Tier2PrivateEdge)
      .value("TIER3_CLOUD", registry::TierLevel::Tier3Cloud);
  py::enum_<registry::TrustMode>(m, "TrustMode")
      .value("MIN", registry::TrustMode::Min)
      .value("PRODUCT", registry::TrustMode::Product);
  py::enum_<registry::AssetKind>(m, "AssetKind")
      .value("VECTOR_INDEX", registry::AssetKind::VectorIndex)
      .value("FINE_TUNED_MODEL", registry::AssetKind::FineTunedModel)
      .value("FILE_STORE", registry::AssetKind::FileStore);

  py::class_<registry::DataAssetId>(m, "DataAsset")
      .def(py::init([](std::string id, registry::AssetKind kind) {
             return registry::DataAssetId{std::move(id), kind};
           }),
           py::arg("id"), py::arg("kind") = registry::AssetKind::VectorIndex)
      .def_readwrite("id", &registry::DataAssetId::id)
      .def_readwrite("kind", &registry::DataAssetId::kind);

  py::class_<registry::TrustInputs>(m, "TrustInputs")
      .def(py::init([](double b, double c, double j) { return registry::TrustInputs{b, c, j}; }),
           py::arg("base") = 1.0, py::arg("certification") = 1.0, py::arg("jurisdiction") = 1.0)
      .def_readwrite("base", &registry::TrustInputs::base)
      .def_readwrite("certification", &registry::TrustInputs::certification)
      .def_readwrite("jurisdiction", &registry::TrustInputs::jurisdiction);

  m.def("compose_trust", &registry::compose_trust, py::arg("inputs"),
        py::arg("mode") = registry::TrustMode::Min);

  py::class_<registry::IslandDeclaration>(m, "IslandDeclaration")
      .def(py::init([](std::string id, registry::TierLevel tier, double latency_ms, double cost,
                       double privacy, registry::TrustInputs trust,
                       std::vector<registry::DataAssetId> assets, std::string name) {
             registry::IslandDeclaration d;
             d.id = std::move(id);
             d.name = std::move(name);
             d.tier = tier;
             d.latency_ms = latency_ms;
             d.cost_per_request = cost;
             d.privacy_score = privacy;
             d.trust = trust;
             d.assets = std::move(assets);
             return d;
           }),
           py::arg("id"), py::arg("tier"), py::arg("latency_ms"), py::arg("cost_per_request") = 0.0,
           py::arg("privacy") = 1.0, py::arg("trust") = registry::TrustInputs{},
           py::arg("assets") = std::vector<registry::DataAssetId>{}, py::arg("name") = "")
      .def_readwrite("id", &registry::IslandDeclaration::id)
      .def_readwrite("tier", &registry::IslandDeclaration::tier)
      .def_readwrite("latency_ms", &registry::IslandDeclaration::latency_ms)
      .def_readwrite("cost_per_request", &registry::IslandDeclaration::cost_per_request)
      .def_readwrite("privacy", &registry::IslandDeclaration::privacy_score)
      .def_readwrite("trust", &registry::IslandDeclaration::trust)
      .def_readwrite("assets", &registry::IslandDeclaration::assets);

  py::classh<registry::Island>(m, "Island")
      .def_readonly("id", &registry::Island::id)
      .def_readonly("name", &registry::Island::name)
      .def_readonly("tier", &registry::Island::tier)
      .def_readonly("latency_ms", &registry::Island::latency_ms)
      .def_readonly("cost_per_request", &registry::Island::cost_per_request)
      .def_readonly("privacy", &registry::Island::privacy_score)
      .def_readonly("trust", &registry::Island::trust_score)
      .def_readonly("assets", &registry::Island::assets)
      .def_readonly("bounded", &registry::Island::bounded)
      .def("hosts", &registry::Island::hosts)
      .def("__repr__", [](const registry::Island& i) {
        return "<Island " + i.id + " " + std::string(registry::to_string(i.tier)) + ">";
      });

  py::class_<registry::Registry, std::shared_ptr<registry::Registry>>(m, "Registry")
      .def(py::init<registry::TrustMode>(), py::arg("trust_mode") = registry::TrustMode::Min)
      .def("register", &registry::Registry::register_island, py::arg("declaration"))
      .def("find", &registry::Registry::find)
      .def("islands", &registry::Registry::islands)
      .def("islands_hosting",
           py::overload_cast<std::string_view>(&registry::Registry::islands_hosting, py::const_))
      .def("__len__", &registry::Registry::size)
      .def("__contains__", &registry::Registry::contains);

  // tide --------------------------------------------------------------------
  m.def("compute_available", &tide::compute_available, py::arg("cpu_pct"), py::arg("gpu_pct"),
        py::arg("mem_used"), py::arg("mem_total"));

  // mist --------------------------------------------------------------------
  py::class_<mist::Trigger>(m, "Trigger")
      .def_readonly("category", &mist::Trigger::category)
      .def_readonly("begin", &mist::Trigger::begin)
      .def_readonly("end", &mist::Trigger::end)
      .def_readonly("floor", &mist::Trigger::floor);

  py::class_<mist::SensitivityReport>(m, "SensitivityReport")
      .def_readonly("score", &mist::SensitivityReport::score)
      .def_readonly("triggers", &mist::SensitivityReport::triggers)
      .def_property_readonly("stage2_class", [](const mist::SensitivityReport& r) {
        return std::string(mist::to_string(r.stage2_class));
      });

  m.def(
      "analyze",
      [](const std::string& prompt) {
        static const mist::SensitivityAnalyzer analyzer;
        return analyzer.analyze(prompt);
      },
      py::arg("prompt"));

  py::class_<mist::Entity>(m, "Entity")
      .def_property_readonly("kind",
                             [](const mist::Entity& e) { return std::string(mist::to_string(e.kind)); })
      .def_readonly("begin", &mist::Entity::begin)
      .def_readonly("end", &mist::Entity::end)
      .def_readonly("surface", &mist::Entity::surface);

  m.def(
      "detect_entities",
      [](const std::string& text) {
        static const mist::EntityDetector detector;
        return detector.detect(text);
      },
      py::arg("text"));

  py::class_<mist::PlaceholderMap>(m, "PlaceholderMap")
      .def_property_readonly("session_id", &mist::PlaceholderMap::session_id)
      .def("original_of",
           [](const mist::PlaceholderMap& map, const std::string& p) -> std::optional<std::string> {
             if (auto o = map.original_of(p)) return std::string(*o);
             return std::nullopt;
           })
      .def("placeholder_of",
           [](const mist::PlaceholderMap& map, const std::string& o) -> std::optional<std::string> {
             if (auto p = map.placeholder_of(o)) return std::string(*p);
             return std::nullopt;
           })
      .def("to_dict",
           [](const mist::PlaceholderMap& map) {
             std::map<std::string, std::string> out;
             for (const auto& e : map.entries()) out[e.placeholder] = e.original;
             return out;
           })
      .def("__len__", &mist::PlaceholderMap::size);

  py::class_<mist::SanitizedHistory>(m, "SanitizedHistory")
      .def_readonly("turns", &mist::SanitizedHistory::turns)
      .def_readonly("map", &mist::SanitizedHistory::map);

  m.def(
      "sanitize",
      [](const std::vector<std::string>& history, double target_privacy,
         std::optional<std::string> session_id) {
        static const mist::Sanitizer sanitizer;
        return session_id ? sanitizer.sanitize(history, target_privacy, *session_id)
                          : sanitizer.sanitize(history, target_privacy);
      },
      py::arg("history"), py::arg("target_privacy"), py::arg("session_id") = std::nullopt);

  py::class_<mist::DesanitizeResult>(m, "DesanitizeResult")
      .def_readonly("text", &mist::DesanitizeResult::text)
      .def_readonly("unknown_placeholders", &mist::DesanitizeResult::unknown_placeholders);

  m.def("desanitize", &mist::desanitize, py::arg("response"), py::arg("map"));

  // waves -------------------------------------------------------------------
  py::enum_<waves::TierClass>(m, "TierClass")
      .value("PRIMARY", waves::TierClass::Primary)
      .value("SECONDARY", waves::TierClass::Secondary)
      .value("BURSTABLE", waves::TierClass::Burstable);

  py::class_<waves::Weights>(m, "Weights")
      .def(py::init([](double c, double l, double p) { return waves::Weights{c, l, p}; }),
           py::arg("cost"), py::arg("latency"), py::arg("privacy"))
      .def_readwrite("cost", &waves::Weights::cost)
      .def_readwrite("latency", &waves::Weights::latency)
      .def_readwrite("privacy", &waves::Weights::privacy);

  py::class_<waves::InferenceRequest>(m, "InferenceRequest")
      .def(py::init([](std::string prompt, std::optional<double> sensitivity, double deadline_ms,
                       waves::TierClass tier_class, std::vector<std::string> history,
                       double p_prev, std::vector<std::string> required_assets, std::string id) {
             static const mist::SensitivityAnalyzer analyzer;
             waves::InferenceRequest r;
             r.id = std::move(id);
             r.sensitivity = sensitivity ? *sensitivity : analyzer.analyze(prompt).score;
             r.prompt = std::move(prompt);
             r.deadline_ms = deadline_ms;
             r.tier_class = tier_class;
             r.history = {std::move(history), p_prev};
             r.required_assets = std::move(required_assets);
             waves::validate(r);
             return r;
           }),
           py::arg("prompt"), py::arg("sensitivity") = std::nullopt, py::arg("deadline_ms") = 1000.0,
           py::arg("tier_class") = waves::TierClass::Secondary,
           py::arg("history") = std::vector<std::string>{}, py::arg("p_prev") = 1.0,
           py::arg("required_assets") = std::vector<std::string>{}, py::arg("id") = "")
      .def_readonly("sensitivity", &waves::InferenceRequest::sensitivity)
      .def_readonly("prompt", &waves::InferenceRequest::prompt);

  py::class_<waves::RoutingDecision>(m, "RoutingDecision")
      .def_property_readonly("outcome",
                             [](const waves::RoutingDecision& d) { return std::string(waves::to_string(d.outcome)); })
      .def_property_readonly("reason",
                             [](const waves::RoutingDecision& d) { return std::string(waves::to_string(d.reason)); })
      .def_property_readonly("sanitization",
                             [](const waves::RoutingDecision& d) {
                               return std::string(waves::to_string(d.sanitization));
                             })
      .def_readonly("island", &waves::RoutingDecision::island)
      .def_readonly("score", &waves::RoutingDecision::score)
      .def_readonly("eligible", &waves::RoutingDecision::eligible)
      .def_readonly("sanitized", &waves::RoutingDecision::sanitized)
      .def_property_readonly("routed", &waves::RoutingDecision::routed);

  py::class_<waves::Router>(m, "Router")
      .def(py::init([](waves::Weights w, const std::string& mode, std::optional<double> budget) {
             waves::RouterOptions o{w};
             o.mode = parse_or_throw(waves::parse_routing_mode(mode), "routing mode", mode);
             o.budget = budget;
             waves::validate(o);
             return waves::Router(o);
           }),
           py::arg("weights"), py::arg("mode") = "scalarized", py::arg("budget") = std::nullopt)
      .def(
          "route",
          [](const waves::Router& router, const waves::InferenceRequest& request,
             const std::vector<registry::IslandPtr>& catalog, const CapacityMap& capacity) {
            const waves::CapacityLookup lookup = [&capacity](const registry::Island& i) {
              auto it = capacity.find(i.id);
              if (it == capacity.end()) return waves::CapacityView{};
              return waves::CapacityView{it->second.first, it->second.second};
            };
            return router.route(request, catalog, lookup);
          },
          py::arg("request"), py::arg("catalog"), py::arg("capacity") = CapacityMap{},
          "Route one request. `capacity` maps island id to (available, admits); "
          "missing islands are idle.");

  // harness -----------------------------------------------------------------
  py::class_<harness::ScenarioConfig>(m, "ScenarioConfig")
      .def_readonly("name", &harness::ScenarioConfig::name)
      .def_readonly("seed", &harness::ScenarioConfig::seed);

  m.def("load_config", [](const std::string& path) { return harness::load_config(path); },
        py::arg("path"));
  m.def("parse_config", [](const std::string& yaml) { return harness::parse_config(yaml); },
        py::arg("yaml"));
  m.def(
      "validate_config",
      [](const harness::ScenarioConfig& c) {
        const auto report = harness::validate_config(c);
        return py::make_tuple(report.ok(), report.to_text());
      },
      py::arg("config"), "Returns (ok, report text).");

  py::class_<harness::RunMetrics>(m, "RunMetrics")
      .def_readonly("scenario", &harness::RunMetrics::scenario)
      .def_readonly("total", &harness::RunMetrics::total)
      .def_readonly("routed", &harness::RunMetrics::routed)
      .def_readonly("rejections_fail_closed", &harness::RunMetrics::rejections_fail_closed)
      .def_readonly("failsafe_local", &harness::RunMetrics::failsafe_local)
      .def_readonly("privacy_violations", &harness::RunMetrics::privacy_violations)
      .def_readonly("routed_per_tier", &harness::RunMetrics::routed_per_tier)
      .def_readonly("served_per_island", &harness::RunMetrics::served_per_island)
      .def_readonly("total_cost", &harness::RunMetrics::total_cost)
      .def_readonly("cloud_cost", &harness::RunMetrics::cloud_cost)
      .def_readonly("sanitization_applied", &harness::RunMetrics::sanitization_applied)
      .def_property_readonly("policy",
                             [](const harness::RunMetrics& m) { return std::string(harness::to_string(m.policy)); })
      .def("latency_percentile_us", &harness::RunMetrics::latency_percentile_us)
      .def("local_utilization", &harness::RunMetrics::local_utilization)
      .def("__str__", &harness::RunMetrics::to_text);

  py::class_<harness::RunResult>(m, "RunResult")
      .def_readonly("metrics", &harness::RunResult::metrics)
      .def_property_readonly("trace_jsonl", &trace_jsonl);

  m.def(
      "run_scenario",
      [](const harness::ScenarioConfig& c, const std::string& policy,
         const std::optional<std::string>& disable, std::optional<std::uint64_t> seed,
         const std::optional<std::string>& mode) {
        const auto o = run_options(policy, disable, seed, mode);
        py::gil_scoped_release release;
        return harness::run_scenario(c, o);
      },
      py::arg("config"), py::arg("policy") = "islandrun", py::arg("disable") = std::nullopt,
      py::arg("seed") = std::nullopt, py::arg("mode") = std::nullopt);

  m.def(
      "compare_policies",
      [](const harness::ScenarioConfig& c, std::optional<std::uint64_t> seed) {
        harness::RunOptions o;
        o.seed = seed;
        py::gil_scoped_release release;
        return harness::compare_policies(c, o);
      },
      py::arg("config"), py::arg("seed") = std::nullopt);
}
