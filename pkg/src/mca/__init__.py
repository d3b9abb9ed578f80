"""Max-consensus auction protocol with verifiable convergence checking.

Agents (physical nodes) bid on items (virtual nodes) and agree on per-item
maximum bids by exchanging views with neighbors.  The explorer enumerates
every message interleaving at a bounded scope and certifies convergence to a
conflict-free allocation or produces a replayable counterexample trace.
"""

from .core import (
    AgentView,
    BidMessage,
    ItemEntry,
    NetState,
    NULL_ENTRY,
    Resolution,
    conflict_free,
    consensus_reached,
    generate_bids,
    handle_outbid,
    initial_state,
    resolve_entry,
    step,
)
from .explorer import (
    Trace,
    TraceEvent,
    Verdict,
    default_bound,
    default_slack,
    enumerate_interleavings,
    replay_trace,
    simulate,
    state_digest,
)
from .netmodel import (
    Mapping,
    PhysicalNetwork,
    PhysicalNode,
    VirtualNetwork,
    VirtualNode,
    Violation,
    diameter,
    path_exists,
    validate_mapping,
    validate_physical,
    validate_virtual,
)
from .oracle import Allocation, approximation_ratio, optimal_allocation
from .policies import (
    AgentPolicy,
    NONSUBMODULAR_ADDITIVE,
    SUBMODULAR_RESIDUAL,
    UtilitySpec,
    bundle_value,
    check_submodular,
    marginal_utility,
)
from .scenario import Scenario, ScenarioError, load_scenario

__version__ = "0.1.0"

__all__ = [
    "AgentPolicy",
    "AgentView",
    "Allocation",
    "BidMessage",
    "ItemEntry",
    "Mapping",
    "NetState",
    "NONSUBMODULAR_ADDITIVE",
    "NULL_ENTRY",
    "PhysicalNetwork",
    "PhysicalNode",
    "Resolution",
    "Scenario",
    "ScenarioError",
    "SUBMODULAR_RESIDUAL",
    "Trace",
    "TraceEvent",
    "UtilitySpec",
    "Verdict",
    "VirtualNetwork",
    "VirtualNode",
    "Violation",
    "approximation_ratio",
    "bundle_value",
    "check_submodular",
    "conflict_free",
    "consensus_reached",
    "default_bound",
    "default_slack",
    "diameter",
    "enumerate_interleavings",
    "generate_bids",
    "handle_outbid",
    "initial_state",
    "load_scenario",
    "marginal_utility",
    "optimal_allocation",
    "path_exists",
    "replay_trace",
    "resolve_entry",
    "simulate",
    "state_digest",
    "step",
    "validate_mapping",
    "validate_physical",
    "validate_virtual",
]
