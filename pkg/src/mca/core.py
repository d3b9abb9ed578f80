"""The auction protocol state machine.

Each agent keeps a view of every item: the believed winner, the winning bid,
and the logical time at which that bid was generated, plus the ordered bundle
of items the agent currently claims and the set of items it lost to a higher
bidder.  Agents exchange full views with their neighbors; a state transition
processes exactly one buffered message: the receiver merges the sender's
view entry by entry, handles any items it just lost, re-runs greedy bidding,
and rebroadcasts iff anything changed.

All values are immutable; :func:`step` returns a fresh state, so exploration
can branch freely.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .policies import AgentPolicy, marginal_utility
from .scenario import Scenario


@dataclass(frozen=True)
class ItemEntry:
    """One item's slot in a view: believed winner, bid, and bid timestamp.

    A vacant slot is ``winner=None, bid=0, stamp=0``; a claimed slot always
    carries a positive bid and the winner's logical clock value at bid time.
    """

    winner: int | None
    bid: int
    stamp: int


NULL_ENTRY = ItemEntry(winner=None, bid=0, stamp=0)


class Resolution(enum.Enum):
    KEEP = "keep"
    ACCEPT = "accept"
    ACCEPT_OUTBID_SELF = "accept-and-outbid-self"


@dataclass(frozen=True)
class AgentView:
    """One agent's knowledge: per-item entries, claimed bundle, lost items."""

    agent: int
    entries: dict[int, ItemEntry]
    bundle: tuple[int, ...] = ()
    lost: frozenset[int] = frozenset()
    clock: int = 0

    def entry(self, item: int) -> ItemEntry:
        return self.entries.get(item, NULL_ENTRY)

    def bundle_bids(self) -> int:
        return sum(self.entries[item].bid for item in self.bundle)


@dataclass(frozen=True)
class BidMessage:
    """A sender's full entry map in flight to one neighbor."""

    sender: int
    receiver: int
    payload: dict[int, ItemEntry]


def _payload_key(payload: dict[int, ItemEntry]) -> tuple:
    return tuple(
        (item, -1 if e.winner is None else e.winner, e.bid, e.stamp)
        for item, e in sorted(payload.items())
    )


def message_sort_key(message: BidMessage) -> tuple:
    """Canonical ordering of buffered messages; fixes exploration branch order."""
    return (message.sender, message.receiver, _payload_key(message.payload))


@dataclass(frozen=True)
class NetState:
    """All agent views plus the unordered buffer of in-flight messages."""

    views: dict[int, AgentView]
    buffer: tuple[BidMessage, ...]
    step: int = 0


@dataclass(frozen=True)
class StepEffects:
    """What one transition did, for traces and bid logs."""

    receiver: int
    changed: bool
    minted: tuple[tuple[int, int, int, int], ...]  # (agent, item, bid, stamp)
    dethroned: tuple[int, ...]


def resolve_entry(local: ItemEntry, incoming: ItemEntry, self_id: int) -> Resolution:
    """Per-item agreement rule between a local entry and an incoming one.

    Same winner on both sides: the fresher stamp wins (equal stamps keep).
    Different winners: the strictly larger bid wins; on equal bids the
    smaller winner id wins, and a vacant entry loses to any winner.  The
    outcome is flagged as an outbid when accepting dethrones ``self_id``.
    """
    if incoming.winner == local.winner:
        decision = Resolution.ACCEPT if incoming.stamp > local.stamp else Resolution.KEEP
    elif incoming.bid > local.bid:
        decision = Resolution.ACCEPT
    elif incoming.bid == local.bid and _winner_rank(incoming) < _winner_rank(local):
        decision = Resolution.ACCEPT
    else:
        decision = Resolution.KEEP
    if (
        decision is Resolution.ACCEPT
        and local.winner == self_id
        and incoming.winner != self_id
    ):
        return Resolution.ACCEPT_OUTBID_SELF
    return decision


def _winner_rank(entry: ItemEntry) -> tuple[bool, int]:
    # None sorts after every agent id: a vacant entry loses ties.
    return (entry.winner is None, entry.winner if entry.winner is not None else 0)


def generate_bids(
    view: AgentView,
    policy: AgentPolicy,
    capacity: int,
    items: Iterable[int],
) -> tuple[AgentView, bool]:
    """Greedy bidding against the locally known bids.

    While the bundle is below ``target_items``, consider every item outside
    the bundle (and outside ``lost`` unless rebidding is allowed) whose
    marginal utility strictly beats the known bid, or ties it while this
    agent's id undercuts the known winner's.  Items whose bid would push the
    bundle's bid sum past ``capacity`` are skipped.  The best candidate
    (highest utility, then lowest item id) is appended with a fresh stamp.
    """
    entries = dict(view.entries)
    bundle = list(view.bundle)
    clock = view.clock
    committed = sum(entries.get(i, NULL_ENTRY).bid for i in bundle)
    changed = False
    item_list = sorted(set(items))

    while len(bundle) < policy.target_items:
        best: tuple[int, int] | None = None  # (utility, item)
        for item in item_list:
            if item in bundle:
                continue
            if item in view.lost and not policy.rebid_on_lost:
                continue
            utility = marginal_utility(policy.utility, view.agent, item, bundle)
            if utility <= 0:
                continue  # a zero bid cannot claim anything
            known = entries.get(item, NULL_ENTRY)
            beats = utility > known.bid or (
                utility == known.bid
                and known.winner is not None
                and view.agent < known.winner
            )
            if not beats:
                continue
            if committed + utility > capacity:
                continue  # bid sum must stay within capacity
            if best is None or (utility, -item) > (best[0], -best[1]):
                best = (utility, item)
        if best is None:
            break
        utility, item = best
        clock += 1
        entries[item] = ItemEntry(winner=view.agent, bid=utility, stamp=clock)
        bundle.append(item)
        committed += utility
        changed = True

    if not changed:
        return view, False
    return (
        AgentView(view.agent, entries, tuple(bundle), view.lost, clock),
        True,
    )


def handle_outbid(view: AgentView, item: int, policy: AgentPolicy) -> AgentView:
    """Drop an outbid item from the bundle and apply the release policy.

    The item joins ``lost`` unless rebidding on lost items is allowed.  With
    ``release_outbid``, every bundle item after the outbid one is removed and
    its entry reset to vacant so the next bidding pass re-prices it against
    the shrunken bundle; released items are not marked lost.
    """
    if item not in view.bundle:
        raise ValueError(f"item {item} is not in agent {view.agent}'s bundle")
    position = view.bundle.index(item)
    entries = dict(view.entries)
    lost = set(view.lost)
    if not policy.rebid_on_lost:
        lost.add(item)
    kept = list(view.bundle[:position])
    trailing = list(view.bundle[position + 1 :])
    if policy.release_outbid:
        for released in trailing:
            entries[released] = NULL_ENTRY
    else:
        kept.extend(trailing)
    return AgentView(view.agent, entries, tuple(kept), frozenset(lost), view.clock)


def _apply_message(
    view: AgentView,
    message: BidMessage,
    policy: AgentPolicy,
    capacity: int,
    items: Sequence[int],
) -> tuple[AgentView, bool, tuple[int, ...]]:
    """Fold a message into a view: resolve, handle outbids, rebid."""
    entries = dict(view.entries)
    dethroned: list[int] = []
    for item in sorted(message.payload):
        incoming = message.payload[item]
        local = entries.get(item, NULL_ENTRY)
        decision = resolve_entry(local, incoming, view.agent)
        if decision is Resolution.KEEP:
            continue
        entries[item] = incoming
        if decision is Resolution.ACCEPT_OUTBID_SELF and item in view.bundle:
            dethroned.append(item)

    updated = replace(view, entries=entries)
    # Handle later bundle positions first so a release never wipes out the
    # fresh competing entry of an item this same message dethroned.
    position = {it: i for i, it in enumerate(view.bundle)}
    for item in sorted(dethroned, key=lambda it: position[it], reverse=True):
        if item in updated.bundle:
            updated = handle_outbid(updated, item, policy)

    updated, _ = generate_bids(updated, policy, capacity, items)
    changed = updated.entries != view.entries
    return updated, changed, tuple(sorted(dethroned))


def _sorted_buffer(messages: Iterable[BidMessage]) -> tuple[BidMessage, ...]:
    return tuple(sorted(messages, key=message_sort_key))


def _broadcasts(view: AgentView, neighbors: Iterable[int]) -> list[BidMessage]:
    return [
        BidMessage(sender=view.agent, receiver=nb, payload=dict(view.entries))
        for nb in sorted(neighbors)
    ]


def step_detailed(
    state: NetState, choice: BidMessage, scenario: Scenario
) -> tuple[NetState, StepEffects]:
    """Process one buffered message and report what changed."""
    remaining = list(state.buffer)
    try:
        remaining.remove(choice)
    except ValueError:
        raise ValueError("chosen message is not in the buffer") from None

    receiver = choice.receiver
    view = state.views[receiver]
    policy = scenario.policy(receiver)
    items = scenario.items()
    old_clock = view.clock

    updated, changed, dethroned = _apply_message(
        view, choice, policy, scenario.capacity(receiver), items
    )

    if changed:
        remaining.extend(_broadcasts(updated, scenario.neighbors(receiver)))

    minted = tuple(
        (receiver, item, entry.bid, entry.stamp)
        for item, entry in sorted(updated.entries.items())
        if entry.winner == receiver and entry.stamp > old_clock
    )

    views = dict(state.views)
    views[receiver] = updated
    next_state = NetState(views=views, buffer=_sorted_buffer(remaining), step=state.step + 1)
    return next_state, StepEffects(receiver, changed, minted, dethroned)


def step(state: NetState, choice: BidMessage, scenario: Scenario) -> NetState:
    """Deterministic single-message transition (see :func:`step_detailed`)."""
    return step_detailed(state, choice, scenario)[0]


def initial_state(scenario: Scenario) -> NetState:
    """Every agent bids once against an all-vacant view, then broadcasts."""
    items = scenario.items()
    views: dict[int, AgentView] = {}
    outgoing: list[BidMessage] = []
    for agent in scenario.agents():
        blank = AgentView(agent, {item: NULL_ENTRY for item in items})
        view, changed = generate_bids(
            blank, scenario.policy(agent), scenario.capacity(agent), items
        )
        views[agent] = view
        if changed:
            outgoing.extend(_broadcasts(view, scenario.neighbors(agent)))
    return NetState(views=views, buffer=_sorted_buffer(outgoing), step=0)


def initial_mints(state: NetState) -> tuple[tuple[int, int, int, int], ...]:
    """Bid records (agent, item, bid, stamp) placed while forming ``state``."""
    mints = []
    for agent, view in sorted(state.views.items()):
        for item, entry in sorted(view.entries.items()):
            if entry.winner == agent:
                mints.append((agent, item, entry.bid, entry.stamp))
    return tuple(mints)


def consensus_reached(state: NetState) -> bool:
    """True iff all views agree item-wise on winner and bid (stamps ignored)."""
    picture = None
    for _, view in sorted(state.views.items()):
        snapshot = {
            item: (entry.winner, entry.bid) for item, entry in sorted(view.entries.items())
        }
        if picture is None:
            picture = snapshot
        elif snapshot != picture:
            return False
    return True


def conflict_free(state: NetState) -> bool:
    """True iff the agreed view and the agents' bundles tell the same story.

    Requires :func:`consensus_reached`; each agent's bundle must be exactly
    the set of items the agreed view awards it.
    """
    if not consensus_reached(state):
        raise ValueError("conflict_free requires a consensus state")
    agents = sorted(state.views)
    if not agents:
        return True
    agreed = state.views[agents[0]].entries
    for agent in agents:
        won = {item for item, entry in agreed.items() if entry.winner == agent}
        if set(state.views[agent].bundle) != won:
            return False
    return True
