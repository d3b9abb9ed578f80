"""Bounded verification of the auction protocol.

:func:`enumerate_interleavings` walks every order in which buffered messages
can be processed, certifying that each order drains the buffer into an
agreed, conflict-free allocation, or returning the first failing order as a
replayable trace.  Failures are a revisited protocol state (an oscillation),
a path that outlives its message budget, a drained buffer without agreement,
or agreement on an allocation whose winners do not actually hold the items.

State digests deliberately ignore the step counter and normalize bid
timestamps to their per-winner rank: timestamps grow forever, so comparing
them verbatim would hide genuinely periodic behavior.  Two states with equal
digests are behaviorally identical, which also makes it safe to reuse
verified subtrees across branches.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field

from . import core
from .core import BidMessage, NetState
from .netmodel import diameter
from .scenario import Scenario

CAUSE_CYCLE = "cycle"
CAUSE_BOUND = "bound-exceeded"
CAUSE_NO_CONSENSUS = "no-consensus"
CAUSE_CONFLICT = "conflict"

DEFAULT_STATE_CEILING = 1_000_000


class DisconnectedNetworkError(ValueError):
    """The diameter-based message bound is undefined for disconnected networks."""


class StateSpaceLimitError(RuntimeError):
    """Exploration hit the configured explored-state ceiling."""


class ReplayError(ValueError):
    """A recorded trace does not replay against the scenario it claims."""


@dataclass(frozen=True)
class TraceEvent:
    """One processed message: 1-based step, the message, and the outcome."""

    step: int
    message: BidMessage
    digest: str
    bids: dict[int, int]


@dataclass(frozen=True)
class Trace:
    """A single execution path, replayable through :func:`replay_trace`.

    ``cycle_start`` indexes states (0 is the initial state; event ``i``
    produces state ``i``), so a cycle means the digest at ``cycle_start``
    equals the digest after the final event.  ``bid_log`` records every bid
    ever generated as ``(agent, item, bid, stamp)``.
    """

    events: tuple[TraceEvent, ...]
    cause: str | None
    cycle_start: int | None = None
    start_digest: str = ""
    bid_log: tuple[tuple[int, int, int, int], ...] = ()


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive exploration."""

    kind: str  # "all-converge" | "counterexample"
    paths_explored: int
    max_depth_seen: int
    bound: int
    slack: int
    witness: Trace | None = None


def default_bound(scenario: Scenario) -> int:
    """Message bound: network diameter times the number of items on auction."""
    d = diameter(scenario.physical)
    if math.isinf(d):
        raise DisconnectedNetworkError(
            "physical network is disconnected; the diameter bound is undefined"
        )
    return int(d) * len(scenario.items())


def default_slack(scenario: Scenario) -> int:
    """Extra budget absorbing per-edge broadcast copies.

    The diameter bound counts how far information must travel; this model
    delivers a separate copy per directed edge on every change, so the
    budget is padded by the directed edge count times a per-item allowance.
    """
    directed_edges = sum(len(n.neighbors) for n in scenario.physical.nodes)
    return default_bound(scenario) + directed_edges * (len(scenario.items()) + 2)


def _resolve_budget(scenario: Scenario, bound: int | None, slack: int | None) -> tuple[int, int]:
    if bound is None:
        bound = (
            scenario.bound_override
            if scenario.bound_override is not None
            else default_bound(scenario)
        )
    if slack is None:
        slack = (
            scenario.slack_override
            if scenario.slack_override is not None
            else default_slack(scenario)
        )
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if slack < 0:
        raise ValueError("slack must be non-negative")
    return bound, slack


def state_digest(state: NetState) -> str:
    """Collision-resistant digest of the protocol-relevant state.

    Views are serialized sorted by agent, entries by item, and the buffer as
    a sorted multiset.  The step counter and agent clocks are excluded, and
    stamps are replaced by their dense rank within the minting winner's
    stamps, so that two states that differ only in how far the clocks have
    run hash identically.
    """
    ranks = _stamp_ranks(state)

    def entry_key(item: int, entry: core.ItemEntry) -> tuple[int, int, int, int]:
        if entry.winner is None:
            return (item, -1, entry.bid, 0)
        return (item, entry.winner, entry.bid, ranks[entry.winner][entry.stamp])

    views = tuple(
        (
            agent,
            tuple(entry_key(item, e) for item, e in sorted(view.entries.items())),
            view.bundle,
            tuple(sorted(view.lost)),
        )
        for agent, view in sorted(state.views.items())
    )
    buffer = tuple(
        sorted(
            (
                msg.sender,
                msg.receiver,
                tuple(entry_key(item, e) for item, e in sorted(msg.payload.items())),
            )
            for msg in state.buffer
        )
    )
    blob = repr((views, buffer)).encode()
    return hashlib.sha256(blob).hexdigest()


def _stamp_ranks(state: NetState) -> dict[int, dict[int, int]]:
    lineages: dict[int, set[int]] = {}

    def note(entry: core.ItemEntry) -> None:
        if entry.winner is not None:
            lineages.setdefault(entry.winner, set()).add(entry.stamp)

    for view in state.views.values():
        for entry in view.entries.values():
            note(entry)
    for message in state.buffer:
        for entry in message.payload.values():
            note(entry)
    return {
        winner: {stamp: rank for rank, stamp in enumerate(sorted(stamps), start=1)}
        for winner, stamps in lineages.items()
    }


def _receiver_bids(state: NetState, receiver: int) -> dict[int, int]:
    view = state.views[receiver]
    return {item: entry.bid for item, entry in sorted(view.entries.items())}


@dataclass
class _PathEvent:
    message: BidMessage
    digest: str
    bids: dict[int, int]
    minted: tuple[tuple[int, int, int, int], ...]


class _CounterexampleFound(Exception):
    def __init__(self, cause: str, cycle_start: int | None = None):
        super().__init__(cause)
        self.cause = cause
        self.cycle_start = cycle_start


def _distinct(messages: tuple[BidMessage, ...]) -> list[BidMessage]:
    """Drop duplicate in-flight messages: identical copies are interchangeable."""
    picked: list[BidMessage] = []
    for message in messages:
        if not picked or message != picked[-1]:
            picked.append(message)
    return picked


def enumerate_interleavings(
    scenario: Scenario,
    bound: int | None = None,
    slack: int | None = None,
    *,
    state_ceiling: int = DEFAULT_STATE_CEILING,
    memoize: bool = True,
) -> Verdict:
    """Exhaustively explore all message-processing interleavings.

    Returns ``all-converge`` iff every interleaving drains the buffer into a
    consensus, conflict-free state within ``bound + slack`` processed
    messages and without revisiting a state.  Otherwise returns the first
    counterexample in deterministic branch order.  ``memoize=False`` forces
    a full tree walk (used by exhaustiveness tests); the memo only ever
    skips subtrees already proven to converge within the remaining budget.
    """
    bound, slack = _resolve_budget(scenario, bound, slack)
    budget = bound + slack
    start = core.initial_state(scenario)
    start_digest = state_digest(start)
    start_mints = core.initial_mints(start)

    stats = {"paths": 0, "max_depth": 0, "states": 0}
    path_digests: dict[str, int] = {}
    path_events: list[_PathEvent] = []
    memo: dict[str, int] = {}

    def explore(state: NetState, digest: str, depth: int) -> int:
        stats["states"] += 1
        if stats["states"] > state_ceiling:
            raise StateSpaceLimitError(
                f"exceeded state ceiling of {state_ceiling} explored states"
            )
        stats["max_depth"] = max(stats["max_depth"], depth)
        if depth > budget:
            raise _CounterexampleFound(CAUSE_BOUND)
        if not state.buffer:
            if not core.consensus_reached(state):
                raise _CounterexampleFound(CAUSE_NO_CONSENSUS)
            if not core.conflict_free(state):
                raise _CounterexampleFound(CAUSE_CONFLICT)
            stats["paths"] += 1
            return 0
        if digest in path_digests:
            raise _CounterexampleFound(CAUSE_CYCLE, cycle_start=path_digests[digest])
        if memoize:
            certified = memo.get(digest)
            if certified is not None and certified <= budget - depth:
                stats["paths"] += 1
                return certified
        path_digests[digest] = depth
        longest = 0
        for message in _distinct(state.buffer):
            child, effects = core.step_detailed(state, message, scenario)
            child_digest = state_digest(child)
            path_events.append(
                _PathEvent(
                    message,
                    child_digest,
                    _receiver_bids(child, message.receiver),
                    effects.minted,
                )
            )
            # A counterexample aborts via exception, leaving the appended
            # events in place: the event list is then the witness path.
            suffix = explore(child, child_digest, depth + 1)
            path_events.pop()
            longest = max(longest, 1 + suffix)
        del path_digests[digest]
        if memoize:
            memo[digest] = longest
        return longest

    try:
        explore(start, start_digest, 0)
    except _CounterexampleFound as found:
        witness = Trace(
            events=tuple(
                TraceEvent(i + 1, ev.message, ev.digest, ev.bids)
                for i, ev in enumerate(path_events)
            ),
            cause=found.cause,
            cycle_start=found.cycle_start,
            start_digest=start_digest,
            bid_log=start_mints + tuple(m for ev in path_events for m in ev.minted),
        )
        return Verdict(
            kind="counterexample",
            paths_explored=stats["paths"],
            max_depth_seen=stats["max_depth"],
            bound=bound,
            slack=slack,
            witness=witness,
        )
    return Verdict(
        kind="all-converge",
        paths_explored=stats["paths"],
        max_depth_seen=stats["max_depth"],
        bound=bound,
        slack=slack,
        witness=None,
    )


def simulate(
    scenario: Scenario, seed: int, max_steps: int
) -> tuple[Trace, str]:
    """One reproducible pseudo-random interleaving.

    Chooses uniformly among buffered messages with a seeded generator.
    Outcomes: ``converged`` (buffer drained into an agreed conflict-free
    state), ``cycle`` (state revisited), ``no-consensus`` (buffer drained
    without agreement), ``conflict`` (agreement on an allocation some
    winner does not actually hold), or ``bound-exceeded``.
    """
    rng = random.Random(seed)
    state = core.initial_state(scenario)
    start_digest = state_digest(state)
    seen: dict[str, int] = {start_digest: 0}
    events: list[TraceEvent] = []
    bid_log: list[tuple[int, int, int, int]] = list(core.initial_mints(state))
    outcome = None
    cycle_start: int | None = None

    while True:
        if not state.buffer:
            if not core.consensus_reached(state):
                outcome = CAUSE_NO_CONSENSUS
            elif not core.conflict_free(state):
                outcome = CAUSE_CONFLICT
            else:
                outcome = "converged"
            break
        if len(events) >= max_steps:
            outcome = CAUSE_BOUND
            break
        choice = state.buffer[rng.randrange(len(state.buffer))]
        state, effects = core.step_detailed(state, choice, scenario)
        digest = state_digest(state)
        bid_log.extend(effects.minted)
        events.append(
            TraceEvent(len(events) + 1, choice, digest, _receiver_bids(state, choice.receiver))
        )
        if digest in seen:
            outcome = CAUSE_CYCLE
            cycle_start = seen[digest]
            break
        seen[digest] = len(events)

    trace = Trace(
        events=tuple(events),
        cause=None if outcome == "converged" else outcome,
        cycle_start=cycle_start,
        start_digest=start_digest,
        bid_log=tuple(bid_log),
    )
    return trace, outcome


def replay_trace(scenario: Scenario, trace: Trace) -> NetState:
    """Re-execute a trace, checking every recorded message and digest."""
    state = core.initial_state(scenario)
    if trace.start_digest and state_digest(state) != trace.start_digest:
        raise ReplayError("initial state digest does not match the trace")
    for event in trace.events:
        if event.message not in state.buffer:
            raise ReplayError(f"step {event.step}: recorded message is not in the buffer")
        state = core.step(state, event.message, scenario)
        if state_digest(state) != event.digest:
            raise ReplayError(f"step {event.step}: state digest diverged from the trace")
    return state
