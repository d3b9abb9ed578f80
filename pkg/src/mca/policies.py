"""Bidding policy knobs and utility functions.

Two utility families are provided.  ``submodular-residual`` models a node
pricing items against its shrinking residual capacity: the marginal value of
an item never grows as the bundle grows.  ``nonsubmodular-additive`` is the
opposite regime, where each additional item is valued higher than the last.
Both depend on the bundle only through its size, which keeps the state space
small and the dichotomy between the two regimes sharp.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

SUBMODULAR_RESIDUAL = "submodular-residual"
NONSUBMODULAR_ADDITIVE = "nonsubmodular-additive"
UTILITY_KINDS = (SUBMODULAR_RESIDUAL, NONSUBMODULAR_ADDITIVE)


@dataclass(frozen=True)
class UtilitySpec:
    """A utility function: kind, per-(agent, item) base values, and a slope.

    ``base`` maps agent id -> item id -> non-negative int; absent entries
    count as zero.
    """

    kind: str
    slope: int = 0
    base: dict[int, dict[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in UTILITY_KINDS:
            raise ValueError(f"unknown utility kind {self.kind!r}")
        if self.slope < 0:
            raise ValueError("slope must be non-negative")

    def base_value(self, agent: int, item: int) -> int:
        return self.base.get(agent, {}).get(item, 0)


@dataclass(frozen=True)
class AgentPolicy:
    """Per-agent protocol knobs.

    ``target_items`` caps the bundle size, ``utility`` prices candidate
    items, ``release_outbid`` re-prices bundle items that followed an outbid
    one, and ``rebid_on_lost`` disables the no-rebidding rule (misbehavior;
    scenarios must opt in explicitly).
    """

    target_items: int
    utility: UtilitySpec
    release_outbid: bool = False
    rebid_on_lost: bool = False

    def __post_init__(self):
        if self.target_items < 0:
            raise ValueError("target_items must be non-negative")


def marginal_utility(
    spec: UtilitySpec, agent: int, item: int, bundle: Sequence[int]
) -> int:
    """Value of adding ``item`` to ``bundle`` for ``agent``. Never negative.

    Depends on the bundle only through its size.  Raises ``ValueError`` if
    the item is already in the bundle.
    """
    if item in bundle:
        raise ValueError(f"item {item} already in bundle")
    base = spec.base_value(agent, item)
    if spec.kind == SUBMODULAR_RESIDUAL:
        return max(0, base - spec.slope * len(bundle))
    return base + spec.slope * len(bundle)


def bundle_value(spec: UtilitySpec, agent: int, bundle: Sequence[int]) -> int:
    """Total value of an ordered bundle: marginals accrued in insertion order."""
    if len(set(bundle)) != len(bundle):
        raise ValueError(f"bundle contains duplicate items: {bundle}")
    total = 0
    for k, item in enumerate(bundle):
        total += marginal_utility(spec, agent, item, bundle[:k])
    return total


@dataclass(frozen=True)
class SubmodularityWitness:
    """A concrete violation of the diminishing-marginals inequality."""

    agent: int
    item: int
    smaller: tuple[int, ...]
    larger: tuple[int, ...]
    smaller_value: int
    larger_value: int


def check_submodular(
    spec: UtilitySpec,
    agents: Iterable[int],
    items: Iterable[int],
    max_bundle: int,
) -> tuple[bool, SubmodularityWitness | None]:
    """Brute-force test that marginals never grow with the bundle.

    Exhaustively checks, for every agent and item ``j``, every bundle pair
    ``smaller`` strictly contained in ``larger`` with ``j`` outside and
    ``len(larger) <= max_bundle``.  Returns the first violating witness.
    """
    item_list = sorted(set(items))
    for agent in sorted(set(agents)):
        for j in item_list:
            others = [i for i in item_list if i != j]
            for size in range(1, min(max_bundle, len(others)) + 1):
                for larger in itertools.combinations(others, size):
                    value_larger = marginal_utility(spec, agent, j, larger)
                    for sub_size in range(size):
                        for smaller in itertools.combinations(larger, sub_size):
                            value_smaller = marginal_utility(spec, agent, j, smaller)
                            if value_smaller < value_larger:
                                return False, SubmodularityWitness(
                                    agent, j, smaller, larger, value_smaller, value_larger
                                )
    return True, None
