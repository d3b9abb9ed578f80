"""Independent brute-force allocation optimizer for small instances.

Ground truth for the auction: enumerate every conflict-free assignment of
items to agents (items may stay unassigned) and every insertion order of
each agent's bundle, subject to the same bundle-size and bid-sum limits the
protocol enforces, and keep the allocation with the highest total utility.
Deliberately unrelated to the protocol machinery so it can serve as its
oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import core
from .core import NetState
from .policies import SUBMODULAR_RESIDUAL, bundle_value
from .scenario import Scenario

DEFAULT_MAX_PAIRS = 12


class InstanceTooLargeError(ValueError):
    """The instance exceeds the exhaustive-search guard."""


@dataclass(frozen=True)
class Allocation:
    """Disjoint per-agent bundles with their summed utility."""

    bundles: dict[int, tuple[int, ...]]
    value: int


def _best_bundle_order(
    scenario: Scenario, agent: int, items: tuple[int, ...]
) -> tuple[int, tuple[int, ...]] | None:
    """Highest-value feasible insertion order, or None if none fits capacity."""
    spec = scenario.utility
    capacity = scenario.capacity(agent)
    if spec.kind == SUBMODULAR_RESIDUAL and spec.slope > 0:
        orders = itertools.permutations(items)
    else:
        orders = [items]  # value and bid sum are order-independent here
    best: tuple[int, tuple[int, ...]] | None = None
    for order in orders:
        value = bundle_value(spec, agent, list(order))
        if value > capacity:
            continue  # accrued bids exceed the agent's bid-sum budget
        if best is None or value > best[0]:
            best = (value, tuple(order))
    return best


def optimal_allocation(scenario: Scenario, max_pairs: int = DEFAULT_MAX_PAIRS) -> Allocation:
    """Exhaustive optimum over conflict-free, policy-feasible allocations.

    Ties are broken by the lexicographically smallest assignment vector
    (items in id order, lower agent ids first, unassigned last).  Guarded:
    refuses instances with more than ``max_pairs`` agent-item pairs.
    """
    agents = scenario.agents()
    items = scenario.items()
    if len(agents) * len(items) > max_pairs:
        raise InstanceTooLargeError(
            f"{len(agents)} agents x {len(items)} items exceeds the "
            f"exhaustive-search guard of {max_pairs} pairs"
        )

    # Candidate owners per item, ordered so that the first maximal assignment
    # found is the lexicographically smallest (None encodes "unassigned").
    owners: list[int | None] = list(agents) + [None]
    best_value = -1
    best_bundles: dict[int, tuple[int, ...]] | None = None

    for assignment in itertools.product(owners, repeat=len(items)):
        grouped: dict[int, list[int]] = {agent: [] for agent in agents}
        for item, owner in zip(items, assignment):
            if owner is not None:
                grouped[owner].append(item)
        total = 0
        bundles: dict[int, tuple[int, ...]] = {}
        feasible = True
        for agent in agents:
            chosen = tuple(grouped[agent])
            if len(chosen) > scenario.policy(agent).target_items:
                feasible = False
                break
            if not chosen:
                bundles[agent] = ()
                continue
            best = _best_bundle_order(scenario, agent, chosen)
            if best is None:
                feasible = False
                break
            total += best[0]
            bundles[agent] = best[1]
        if feasible and total > best_value:
            best_value = total
            best_bundles = bundles

    assert best_bundles is not None  # the empty assignment is always feasible
    return Allocation(bundles=best_bundles, value=best_value)


def allocation_from_state(state: NetState, scenario: Scenario) -> Allocation:
    """The agreed allocation of a consensus, conflict-free state."""
    if not (core.consensus_reached(state) and core.conflict_free(state)):
        raise ValueError("state has not converged to a conflict-free allocation")
    bundles = {agent: view.bundle for agent, view in sorted(state.views.items())}
    value = sum(
        bundle_value(scenario.utility, agent, list(bundle))
        for agent, bundle in bundles.items()
    )
    return Allocation(bundles=bundles, value=value)


def approximation_ratio(
    mca_state: NetState, scenario: Scenario, max_pairs: int = DEFAULT_MAX_PAIRS
) -> Fraction:
    """Agreed-allocation utility over the exhaustive optimum, in [0, 1].

    Returns 1 when the optimum is zero.  Requires a consensus,
    conflict-free state and an instance within the oracle guard.
    """
    achieved = allocation_from_state(mca_state, scenario).value
    optimum = optimal_allocation(scenario, max_pairs=max_pairs).value
    if optimum == 0:
        return Fraction(1)
    return Fraction(achieved, optimum)
