"""Physical and virtual network model, structural validators, and graph helpers.

The auction treats physical nodes as bidding agents and virtual nodes as the
items on auction.  Everything here is an immutable value; validators return
violations as data instead of raising, so callers can report all problems in
one pass.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field


class UnknownNodeError(ValueError):
    """Raised when an operation receives a node id that is not in the network."""


@dataclass(frozen=True)
class Violation:
    """One violated structural fact, identified by a stable fact name."""

    fact: str
    subject: tuple[int, ...] = ()
    detail: str = ""

    def __str__(self) -> str:
        where = ",".join(str(n) for n in self.subject)
        return f"{self.fact}({where}): {self.detail}" if self.detail else f"{self.fact}({where})"


@dataclass(frozen=True)
class PhysicalNode:
    """A hosting node: non-negative id, CPU capacity, undirected neighbor set."""

    id: int
    capacity: int
    neighbors: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "neighbors", frozenset(self.neighbors))


@dataclass(frozen=True)
class VirtualNode:
    """An auctioned node: positive id, CPU demand, undirected neighbor set."""

    id: int
    demand: int = 0
    neighbors: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "neighbors", frozenset(self.neighbors))


@dataclass(frozen=True)
class PhysicalNetwork:
    nodes: tuple[PhysicalNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def by_id(self) -> dict[int, PhysicalNode]:
        return {n.id: n for n in self.nodes}

    def ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes)


@dataclass(frozen=True)
class VirtualNetwork:
    nodes: tuple[VirtualNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def by_id(self) -> dict[int, VirtualNode]:
        return {n.id: n for n in self.nodes}

    def ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes)


@dataclass(frozen=True)
class Mapping:
    """Assignment of virtual node ids onto physical node ids."""

    assignments: dict[int, int]


def validate_physical(net: PhysicalNetwork) -> list[Violation]:
    """Check the static facts of a physical network.

    Returns an empty list iff ids are unique and non-negative, capacities are
    non-negative, there are no self-loops, every referenced neighbor exists,
    and the neighbor relation is symmetric.
    """
    violations: list[Violation] = []
    seen: set[int] = set()
    index = {n.id: n for n in net.nodes}
    for node in net.nodes:
        if node.id < 0:
            violations.append(Violation("negative-id", (node.id,)))
        if node.id in seen:
            violations.append(Violation("duplicate-id", (node.id,)))
        seen.add(node.id)
        if node.capacity < 0:
            violations.append(
                Violation("negative-capacity", (node.id,), f"capacity={node.capacity}")
            )
        if node.id in node.neighbors:
            violations.append(Violation("self-loop", (node.id,)))
        for other in sorted(node.neighbors):
            if other == node.id:
                continue
            if other not in index:
                violations.append(Violation("unknown-neighbor", (node.id, other)))
            elif node.id not in index[other].neighbors:
                violations.append(
                    Violation(
                        "asymmetry",
                        (node.id, other),
                        f"{node.id} lists {other} but not vice versa",
                    )
                )
    return violations


def validate_virtual(net: VirtualNetwork) -> list[Violation]:
    """Check the static facts of a virtual network (positive unique ids,
    non-negative demands, symmetric connections, no self-loops)."""
    violations: list[Violation] = []
    seen: set[int] = set()
    index = {n.id: n for n in net.nodes}
    for node in net.nodes:
        if node.id <= 0:
            violations.append(Violation("non-positive-id", (node.id,)))
        if node.id in seen:
            violations.append(Violation("duplicate-id", (node.id,)))
        seen.add(node.id)
        if node.demand < 0:
            violations.append(Violation("negative-demand", (node.id,), f"demand={node.demand}"))
        if node.id in node.neighbors:
            violations.append(Violation("self-loop", (node.id,)))
        for other in sorted(node.neighbors):
            if other == node.id:
                continue
            if other not in index:
                violations.append(Violation("unknown-neighbor", (node.id, other)))
            elif node.id not in index[other].neighbors:
                violations.append(
                    Violation(
                        "asymmetry",
                        (node.id, other),
                        f"{node.id} lists {other} but not vice versa",
                    )
                )
    return violations


def _bfs_distances(net: PhysicalNetwork, source: int) -> dict[int, int]:
    index = net.by_id()
    dist = {source: 0}
    queue = deque([source])
    while queue:
        current = queue.popleft()
        for neighbor in index[current].neighbors:
            if neighbor not in dist:
                dist[neighbor] = dist[current] + 1
                queue.append(neighbor)
    return dist


def diameter(net: PhysicalNetwork) -> int | float:
    """Maximum shortest-hop distance over all node pairs.

    Returns 0 for a single node and ``math.inf`` when the network is
    disconnected.  Expects a network that passed :func:`validate_physical`.
    """
    ids = net.ids()
    if not ids:
        return 0
    worst = 0
    n = len(ids)
    for source in ids:
        dist = _bfs_distances(net, source)
        if len(dist) < n:
            return math.inf
        worst = max(worst, max(dist.values()))
    return worst


def path_exists(net: PhysicalNetwork, src: int, dst: int) -> bool:
    """True iff some hop path connects ``src`` and ``dst``.

    ``src == dst`` counts as reachable via the empty path.  Raises
    :class:`UnknownNodeError` if either id is absent.
    """
    index = net.by_id()
    if src not in index:
        raise UnknownNodeError(f"unknown physical node id {src}")
    if dst not in index:
        raise UnknownNodeError(f"unknown physical node id {dst}")
    if src == dst:
        return True
    return dst in _bfs_distances(net, src)


def induced_virtual_subnetwork(net: VirtualNetwork, keep: set[int]) -> VirtualNetwork:
    """Virtual network restricted to ``keep``: dropped nodes and their edges vanish."""
    nodes = tuple(
        VirtualNode(n.id, n.demand, frozenset(n.neighbors & keep))
        for n in net.nodes
        if n.id in keep
    )
    return VirtualNetwork(nodes)


def validate_mapping(
    mapping: Mapping, virtual: VirtualNetwork, physical: PhysicalNetwork
) -> tuple[bool, list[Violation]]:
    """Check whether ``mapping`` embeds ``virtual`` into ``physical``.

    Valid iff (i) every virtual node is mapped to exactly one existing
    physical node, (ii) the summed demand placed on each physical node fits
    within its capacity, and (iii) for every virtual link the hosting
    physical nodes are connected by some path.
    """
    violations: list[Violation] = []
    vindex = virtual.by_id()
    pindex = physical.by_id()

    for vid in virtual.ids():
        if vid not in mapping.assignments:
            violations.append(Violation("unmapped-item", (vid,)))
    for vid, pid in sorted(mapping.assignments.items()):
        if vid not in vindex:
            violations.append(Violation("unknown-virtual", (vid,)))
        if pid not in pindex:
            violations.append(Violation("unknown-physical", (vid, pid)))

    placed: dict[int, int] = {}
    for vid, pid in mapping.assignments.items():
        if vid in vindex and pid in pindex:
            placed[pid] = placed.get(pid, 0) + vindex[vid].demand
    for pid in sorted(placed):
        if placed[pid] > pindex[pid].capacity:
            violations.append(
                Violation(
                    "capacity-exceeded",
                    (pid,),
                    f"demand {placed[pid]} > capacity {pindex[pid].capacity}",
                )
            )

    for vnode in virtual.nodes:
        for other in sorted(vnode.neighbors):
            if vnode.id >= other:
                continue  # undirected: check each link once
            src = mapping.assignments.get(vnode.id)
            dst = mapping.assignments.get(other)
            if src is None or dst is None or src not in pindex or dst not in pindex:
                continue  # already reported as unmapped/unknown
            if not path_exists(physical, src, dst):
                violations.append(Violation("no-path", (vnode.id, other), f"{src}-{dst}"))

    return (not violations, violations)
