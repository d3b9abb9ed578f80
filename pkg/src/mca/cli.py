"""Command-line front end: batch verification runs and machine-readable reports.

Subcommands::

    mca validate <scenario>                      exit 0 iff the file is a valid scenario
    mca check    <scenario> [--bound N] [--slack N] [--trace PATH] [--json]
    mca simulate <scenario> [--seed N] [--max-steps N] [--trace PATH] [--json]
    mca oracle   <scenario> [--json]

Exit codes: 0 convergence (or success), 2 counterexample / non-convergence,
1 error.  ``MCA_STATE_CEILING`` caps the explorer's state count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import core, explorer, oracle
from .explorer import (
    DEFAULT_STATE_CEILING,
    DisconnectedNetworkError,
    StateSpaceLimitError,
    Trace,
    Verdict,
)
from .netmodel import Mapping, induced_virtual_subnetwork, validate_mapping
from .oracle import InstanceTooLargeError
from .scenario import Scenario, ScenarioError, load_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2


@dataclass
class Report:
    """Everything a check run learned, JSON-serializable."""

    verdict: Verdict
    mapping: Mapping | None = None
    mapping_valid: bool | None = None
    unassigned_items: tuple[int, ...] = ()
    ratio: Fraction | None = None
    timings: dict[str, float] | None = None

    def to_document(self) -> dict:
        witness = self.verdict.witness
        return {
            "verdict": {
                "kind": self.verdict.kind,
                "paths_explored": self.verdict.paths_explored,
                "max_depth_seen": self.verdict.max_depth_seen,
                "bound": self.verdict.bound,
                "slack": self.verdict.slack,
            },
            "counterexample": None
            if witness is None
            else {
                "cause": witness.cause,
                "cycle_start": witness.cycle_start,
                "length": len(witness.events),
            },
            "mapping": None
            if self.mapping is None
            else {str(item): agent for item, agent in sorted(self.mapping.assignments.items())},
            "mapping_valid": self.mapping_valid,
            "unassigned_items": list(self.unassigned_items),
            "ratio": None if self.ratio is None else str(self.ratio),
            "timings": self.timings or {},
        }


def agreed_mapping(state: core.NetState) -> tuple[Mapping, tuple[int, ...]]:
    """The consensus assignment: mapped items plus the items nobody won."""
    if not core.consensus_reached(state):
        raise ValueError("mapping extraction requires a consensus state")
    any_view = state.views[min(state.views)]
    assignments = {
        item: entry.winner
        for item, entry in sorted(any_view.entries.items())
        if entry.winner is not None
    }
    unassigned = tuple(
        item for item, entry in sorted(any_view.entries.items()) if entry.winner is None
    )
    return Mapping(assignments), unassigned


def write_trace_jsonl(trace: Trace, path: str | Path) -> None:
    """One event per line: {step, sender, receiver, digest, bids}."""
    lines = []
    for event in trace.events:
        lines.append(
            json.dumps(
                {
                    "step": event.step,
                    "sender": event.message.sender,
                    "receiver": event.message.receiver,
                    "digest": event.digest,
                    "bids": {str(item): bid for item, bid in sorted(event.bids.items())},
                },
                sort_keys=True,
            )
        )
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def _state_ceiling() -> int:
    raw = os.environ.get("MCA_STATE_CEILING")
    if raw is None:
        return DEFAULT_STATE_CEILING
    try:
        return int(raw)
    except ValueError:
        raise ScenarioError(f"MCA_STATE_CEILING={raw!r} is not an integer") from None


def cmd_validate(args: argparse.Namespace) -> int:
    load_scenario(args.scenario)
    print(f"{args.scenario}: valid scenario")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    timings: dict[str, float] = {}
    started = time.perf_counter()
    scenario = load_scenario(args.scenario)
    timings["load"] = time.perf_counter() - started

    started = time.perf_counter()
    verdict = explorer.enumerate_interleavings(
        scenario, bound=args.bound, slack=args.slack, state_ceiling=_state_ceiling()
    )
    timings["enumerate"] = time.perf_counter() - started

    report = Report(verdict=verdict, timings=timings)
    if verdict.kind == "all-converge":
        # Any interleaving converges, so one deterministic run yields the
        # agreed allocation.
        budget = verdict.bound + verdict.slack
        trace, outcome = explorer.simulate(scenario, seed=0, max_steps=budget)
        if outcome != "converged":
            raise RuntimeError("simulation diverged from an all-converge verdict")
        final = explorer.replay_trace(scenario, trace)
        mapping, unassigned = agreed_mapping(final)
        mapped_virtual = induced_virtual_subnetwork(
            scenario.virtual, set(mapping.assignments)
        )
        valid, _ = validate_mapping(mapping, mapped_virtual, scenario.physical)
        report.mapping = mapping
        report.mapping_valid = valid
        report.unassigned_items = unassigned
        started = time.perf_counter()
        try:
            report.ratio = oracle.approximation_ratio(final, scenario)
        except InstanceTooLargeError:
            report.ratio = None
        timings["oracle"] = time.perf_counter() - started
        if args.trace:
            write_trace_jsonl(trace, args.trace)
    elif args.trace and verdict.witness is not None:
        write_trace_jsonl(verdict.witness, args.trace)

    if args.json:
        print(json.dumps(report.to_document(), sort_keys=True))
    else:
        _print_check_report(report)
    return EXIT_OK if verdict.kind == "all-converge" else EXIT_COUNTEREXAMPLE


def _print_check_report(report: Report) -> None:
    verdict = report.verdict
    print(
        f"verdict: {verdict.kind} "
        f"(bound={verdict.bound}, slack={verdict.slack}, "
        f"paths={verdict.paths_explored}, max-depth={verdict.max_depth_seen})"
    )
    if verdict.witness is not None:
        witness = verdict.witness
        print(f"counterexample: cause={witness.cause} after {len(witness.events)} messages")
        if witness.cycle_start is not None:
            print(f"  state {witness.cycle_start} revisited at the end of the trace")
    if report.mapping is not None:
        pairs = ", ".join(
            f"{item}->{agent}" for item, agent in sorted(report.mapping.assignments.items())
        )
        print(f"mapping: {{{pairs}}} valid={report.mapping_valid}")
        if report.unassigned_items:
            print(f"unassigned items: {list(report.unassigned_items)}")
    if report.ratio is not None:
        print(f"utility ratio vs optimum: {report.ratio} (~{float(report.ratio):.3f})")


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if args.max_steps is not None:
        max_steps = args.max_steps
    else:
        bound = (
            scenario.bound_override
            if scenario.bound_override is not None
            else explorer.default_bound(scenario)
        )
        slack = (
            scenario.slack_override
            if scenario.slack_override is not None
            else explorer.default_slack(scenario)
        )
        max_steps = bound + slack
    trace, outcome = explorer.simulate(scenario, seed=args.seed, max_steps=max_steps)
    if args.trace:
        write_trace_jsonl(trace, args.trace)
    if args.json:
        print(
            json.dumps(
                {
                    "outcome": outcome,
                    "steps": len(trace.events),
                    "cause": trace.cause,
                    "cycle_start": trace.cycle_start,
                    "seed": args.seed,
                },
                sort_keys=True,
            )
        )
    else:
        print(f"simulate seed={args.seed}: {outcome} after {len(trace.events)} messages")
    return EXIT_OK if outcome == "converged" else EXIT_COUNTEREXAMPLE


def cmd_oracle(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    allocation = oracle.optimal_allocation(scenario)
    if args.json:
        print(
            json.dumps(
                {
                    "value": allocation.value,
                    "bundles": {
                        str(agent): list(bundle)
                        for agent, bundle in sorted(allocation.bundles.items())
                    },
                },
                sort_keys=True,
            )
        )
    else:
        print(f"optimal utility: {allocation.value}")
        for agent, bundle in sorted(allocation.bundles.items()):
            if bundle:
                print(f"  agent {agent}: items {list(bundle)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mca",
        description="Verify max-consensus auction scenarios by exhaustive "
        "interleaving exploration, simulation, and brute-force comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="exhaustively verify convergence")
    check.add_argument("scenario")
    check.add_argument("--bound", type=int, default=None, help="override the message bound")
    check.add_argument("--slack", type=int, default=None, help="override the budget slack")
    check.add_argument("--trace", default=None, help="write the witness/converged trace (JSONL)")
    check.add_argument("--json", action="store_true", help="emit a JSON report")
    check.set_defaults(func=cmd_check)

    simulate = sub.add_parser("simulate", help="run one seeded interleaving")
    simulate.add_argument("scenario")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--max-steps", type=int, default=None)
    simulate.add_argument("--trace", default=None, help="write the trace (JSONL)")
    simulate.add_argument("--json", action="store_true")
    simulate.set_defaults(func=cmd_simulate)

    orc = sub.add_parser("oracle", help="brute-force optimal allocation")
    orc.add_argument("scenario")
    orc.add_argument("--json", action="store_true")
    orc.set_defaults(func=cmd_oracle)

    validate = sub.add_parser("validate", help="validate a scenario file")
    validate.add_argument("scenario")
    validate.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, DisconnectedNetworkError, InstanceTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except StateSpaceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
