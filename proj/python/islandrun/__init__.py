# Copyright 2026 The IslandRun Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Privacy-constrained inference routing across personal, edge and cloud islands."""

from ._core import (
    AssetKind,
    ConfigError,
    ConflictError,
    DataAsset,
    DesanitizeResult,
    Entity,
    InferenceRequest,
    Island,
    IslandDeclaration,
    PlaceholderMap,
    PrivacyViolationError,
    RegistrationError,
    Registry,
    Router,
    RoutingDecision,
    RunMetrics,
    RunResult,
    SanitizedHistory,
    ScenarioConfig,
    SensitivityReport,
    TierClass,
    TierLevel,
    Trigger,
    TrustInputs,
    TrustMode,
    UnknownIslandError,
    ValidationError,
    Weights,
    analyze,
    compare_policies,
    compose_trust,
    compute_available,
    desanitize,
    detect_entities,
    load_config,
    parse_config,
    run_scenario,
    sanitize,
    validate_config,
)

__version__ = "0.1.0"
