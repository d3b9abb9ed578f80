"""Scenario definition, JSON (de)serialization, and input validation.

A scenario bundles the physical network (the agents), the virtual network
(the items), one shared utility function, per-agent policy blocks, and
optional exploration overrides.  The JSON schema is deliberately flat::

    {
      "physical": [{"id": 1, "capacity": 50, "neighbors": [2]}, ...],
      "virtual":  [{"id": 1, "demand": 1, "neighbors": []}, ...],
      "utility":  {"kind": "submodular-residual", "slope": 0,
                   "base": {"1": {"1": 10, "3": 30}}},
      "policies": {"1": {"target_items": 2, "release_outbid": false,
                         "rebid_on_lost": false}},
      "bound": 3,            // optional
      "slack": 10,           // optional
      "adversarial": false   // optional; required true to allow rebid_on_lost
    }

Agents without a policy block default to pure relays (``target_items`` 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .netmodel import (
    PhysicalNetwork,
    PhysicalNode,
    VirtualNetwork,
    VirtualNode,
    validate_physical,
    validate_virtual,
)
from .policies import UTILITY_KINDS, AgentPolicy, UtilitySpec


class ScenarioError(Exception):
    """Base class for scenario loading failures."""


class ScenarioParseError(ScenarioError):
    """The file is not well-formed JSON."""


class ScenarioSchemaError(ScenarioError):
    """The JSON document is missing fields or has fields of the wrong type."""


class ScenarioValidationError(ScenarioError):
    """The document parsed but violates a structural or policy fact."""


_RELAY_POLICY_FIELDS = {"target_items": 0, "release_outbid": False, "rebid_on_lost": False}


@dataclass(frozen=True)
class Scenario:
    """A complete, validated problem instance."""

    physical: PhysicalNetwork
    virtual: VirtualNetwork
    policies: dict[int, AgentPolicy]
    utility: UtilitySpec
    bound_override: int | None = None
    slack_override: int | None = None
    adversarial: bool = False

    def agents(self) -> list[int]:
        return self.physical.ids()

    def items(self) -> list[int]:
        return self.virtual.ids()

    def capacity(self, agent: int) -> int:
        return self.physical.by_id()[agent].capacity

    def neighbors(self, agent: int) -> frozenset[int]:
        return self.physical.by_id()[agent].neighbors

    def policy(self, agent: int) -> AgentPolicy:
        return self.policies[agent]


def _want(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ScenarioSchemaError(f"{where}: missing required field {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool):
        raise ScenarioSchemaError(f"{where}.{key}: expected {kind.__name__}, got bool")
    if not isinstance(value, kind):
        raise ScenarioSchemaError(
            f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _int_key(raw: str, where: str) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ScenarioSchemaError(f"{where}: key {raw!r} is not an integer id") from None


def _parse_base(raw: dict, where: str) -> dict[int, dict[int, int]]:
    base: dict[int, dict[int, int]] = {}
    for agent_key, row in raw.items():
        agent = _int_key(agent_key, where)
        if not isinstance(row, dict):
            raise ScenarioSchemaError(f"{where}.{agent_key}: expected object")
        parsed_row: dict[int, int] = {}
        for item_key, value in row.items():
            item = _int_key(item_key, f"{where}.{agent_key}")
            if not isinstance(value, int) or isinstance(value, bool):
                raise ScenarioSchemaError(f"{where}.{agent_key}.{item_key}: expected int")
            parsed_row[item] = value
        base[agent] = parsed_row
    return base


def scenario_from_document(doc: dict, source: str = "<scenario>") -> Scenario:
    """Build and validate a Scenario from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise ScenarioSchemaError(f"{source}: top level must be an object")

    raw_physical = _want(doc, "physical", list, source)
    raw_virtual = _want(doc, "virtual", list, source)
    raw_utility = _want(doc, "utility", dict, source)
    raw_policies = doc.get("policies", {})
    if not isinstance(raw_policies, dict):
        raise ScenarioSchemaError(f"{source}.policies: expected object")

    pnodes = []
    for i, entry in enumerate(raw_physical):
        where = f"{source}.physical[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioSchemaError(f"{where}: expected object")
        pnodes.append(
            PhysicalNode(
                id=_want(entry, "id", int, where),
                capacity=_want(entry, "capacity", int, where),
                neighbors=frozenset(_want(entry, "neighbors", list, where)),
            )
        )
    physical = PhysicalNetwork(tuple(pnodes))

    vnodes = []
    for i, entry in enumerate(raw_virtual):
        where = f"{source}.virtual[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioSchemaError(f"{where}: expected object")
        vnodes.append(
            VirtualNode(
                id=_want(entry, "id", int, where),
                demand=_want(entry, "demand", int, where),
                neighbors=frozenset(_want(entry, "neighbors", list, where)),
            )
        )
    virtual = VirtualNetwork(tuple(vnodes))

    kind = _want(raw_utility, "kind", str, f"{source}.utility")
    if kind not in UTILITY_KINDS:
        raise ScenarioSchemaError(
            f"{source}.utility.kind: {kind!r} is not one of {list(UTILITY_KINDS)}"
        )
    slope = _want(raw_utility, "slope", int, f"{source}.utility")
    base = _parse_base(
        _want(raw_utility, "base", dict, f"{source}.utility"), f"{source}.utility.base"
    )
    utility = UtilitySpec(kind=kind, slope=slope, base=base)

    adversarial = doc.get("adversarial", False)
    if not isinstance(adversarial, bool):
        raise ScenarioSchemaError(f"{source}.adversarial: expected bool")

    policies: dict[int, AgentPolicy] = {}
    for agent_key, block in raw_policies.items():
        agent = _int_key(agent_key, f"{source}.policies")
        where = f"{source}.policies.{agent_key}"
        if not isinstance(block, dict):
            raise ScenarioSchemaError(f"{where}: expected object")
        merged = dict(_RELAY_POLICY_FIELDS, **block)
        unknown = set(block) - set(_RELAY_POLICY_FIELDS)
        if unknown:
            raise ScenarioSchemaError(f"{where}: unknown fields {sorted(unknown)}")
        policies[agent] = AgentPolicy(
            target_items=merged["target_items"],
            utility=utility,
            release_outbid=bool(merged["release_outbid"]),
            rebid_on_lost=bool(merged["rebid_on_lost"]),
        )

    bound = doc.get("bound")
    slack = doc.get("slack")
    for name, value in (("bound", bound), ("slack", slack)):
        if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
            raise ScenarioSchemaError(f"{source}.{name}: expected int")

    scenario = Scenario(
        physical=physical,
        virtual=virtual,
        policies=policies,
        utility=utility,
        bound_override=bound,
        slack_override=slack,
        adversarial=adversarial,
    )
    _validate(scenario, source)
    return _with_relay_defaults(scenario)


def _with_relay_defaults(scenario: Scenario) -> Scenario:
    policies = dict(scenario.policies)
    for agent in scenario.agents():
        if agent not in policies:
            policies[agent] = AgentPolicy(target_items=0, utility=scenario.utility)
    return Scenario(
        physical=scenario.physical,
        virtual=scenario.virtual,
        policies=policies,
        utility=scenario.utility,
        bound_override=scenario.bound_override,
        slack_override=scenario.slack_override,
        adversarial=scenario.adversarial,
    )


def _validate(scenario: Scenario, source: str) -> None:
    problems = []
    for violation in validate_physical(scenario.physical):
        problems.append(f"physical: {violation}")
    for violation in validate_virtual(scenario.virtual):
        problems.append(f"virtual: {violation}")
    if problems:
        raise ScenarioValidationError(f"{source}: " + "; ".join(problems))

    agents = set(scenario.agents())
    items = set(scenario.items())
    for agent in scenario.policies:
        if agent not in agents:
            raise ScenarioValidationError(
                f"{source}.policies: agent {agent} is not a physical node"
            )
    for agent, row in scenario.utility.base.items():
        if agent not in agents:
            raise ScenarioValidationError(
                f"{source}.utility.base: agent {agent} is not a physical node"
            )
        for item in row:
            if item not in items:
                raise ScenarioValidationError(
                    f"{source}.utility.base: item {item} is not a virtual node"
                )
    for agent, policy in scenario.policies.items():
        if policy.rebid_on_lost and not scenario.adversarial:
            raise ScenarioValidationError(
                f"{source}.policies.{agent}: rebid_on_lost requires \"adversarial\": true"
            )


def load_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario JSON file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return scenario_from_document(doc, source=str(path))


def scenario_to_document(scenario: Scenario) -> dict:
    """Inverse of :func:`scenario_from_document` (canonical field order)."""
    doc: dict = {
        "physical": [
            {"id": n.id, "capacity": n.capacity, "neighbors": sorted(n.neighbors)}
            for n in sorted(scenario.physical.nodes, key=lambda n: n.id)
        ],
        "virtual": [
            {"id": n.id, "demand": n.demand, "neighbors": sorted(n.neighbors)}
            for n in sorted(scenario.virtual.nodes, key=lambda n: n.id)
        ],
        "utility": {
            "kind": scenario.utility.kind,
            "slope": scenario.utility.slope,
            "base": {
                str(agent): {str(item): value for item, value in sorted(row.items())}
                for agent, row in sorted(scenario.utility.base.items())
            },
        },
        "policies": {
            str(agent): {
                "target_items": policy.target_items,
                "release_outbid": policy.release_outbid,
                "rebid_on_lost": policy.rebid_on_lost,
            }
            for agent, policy in sorted(scenario.policies.items())
        },
    }
    if scenario.bound_override is not None:
        doc["bound"] = scenario.bound_override
    if scenario.slack_override is not None:
        doc["slack"] = scenario.slack_override
    if scenario.adversarial:
        doc["adversarial"] = True
    return doc
