"""Dev scratch: hunt for cycle counterexamples at 3 agents / 2 items."""
import itertools
import sys
import time

from mca.scenario import scenario_from_document
from mca import explorer

TOPOLOGIES = {
    "complete": {1: [2, 3], 2: [1, 3], 3: [1, 2]},
    "line123": {1: [2], 2: [1, 3], 3: [2]},
}


def make3(bases, slope, topo, release=True, rebid=False, targets=(2, 2, 2), cap=10_000,
          kind="nonsubmodular-additive"):
    doc = {
        "physical": [
            {"id": a, "capacity": cap, "neighbors": TOPOLOGIES[topo][a]} for a in (1, 2, 3)
        ],
        "virtual": [{"id": j, "demand": 0, "neighbors": []} for j in (1, 2)],
        "utility": {
            "kind": kind,
            "slope": slope,
            "base": {str(a): {str(j): bases[a - 1][j - 1] for j in (1, 2)} for a in (1, 2, 3)},
        },
        "policies": {
            str(a): {
                "target_items": targets[a - 1],
                "release_outbid": release,
                "rebid_on_lost": rebid,
            }
            for a in (1, 2, 3)
        },
        "adversarial": rebid,
    }
    return scenario_from_document(doc)


def hunt(topo, slope, maxbase, rebid, limit=None):
    t0 = time.time()
    stats = {"cycle": [], "other": 0, "converge": 0, "limit": 0}
    values = list(itertools.product(range(maxbase + 1), repeat=2))
    count = 0
    for b1, b2, b3 in itertools.product(values, repeat=3):
        count += 1
        if limit and count > limit:
            break
        scenario = make3((b1, b2, b3), slope, topo, rebid=rebid)
        # cheap prefilter: any seeded run that cycles?
        cycled = False
        for seed in range(4):
            _, outcome = explorer.simulate(scenario, seed=seed, max_steps=150)
            if outcome == "cycle":
                cycled = True
                break
        if not cycled:
            continue
        try:
            verdict = explorer.enumerate_interleavings(
                scenario, bound=80, slack=0, state_ceiling=60_000
            )
        except explorer.StateSpaceLimitError:
            stats["limit"] += 1
            continue
        if verdict.kind == "counterexample" and verdict.witness.cause == "cycle":
            rec = (topo, slope, b1, b2, b3, len(verdict.witness.events),
                   verdict.witness.cycle_start, verdict.paths_explored)
            stats["cycle"].append(rec)
            print("CYCLE", rec, flush=True)
            if len(stats["cycle"]) >= 12:
                break
        else:
            stats["other"] += 1
    print(f"{topo} slope={slope} rebid={rebid}: scanned {count} in {time.time()-t0:.0f}s; "
          f"enumerate-cycles {len(stats['cycle'])}, other {stats['other']}, limit {stats['limit']}")
    return stats


if __name__ == "__main__":
    rebid = len(sys.argv) > 1 and sys.argv[1] == "rebid"
    for topo in ("complete", "line123"):
        for slope in (1, 2):
            stats = hunt(topo, slope, maxbase=2, rebid=rebid)
            if stats["cycle"]:
                sys.exit(0)
