"""Dev scratch: find instances where dropping the no-rebid rule breaks agreement.

Want: rebid_on_lost=false -> all-converge, rebid_on_lost=true -> counterexample.
"""
import random
import sys
import time

from mca.scenario import scenario_from_document, scenario_to_document
from mca import explorer
from scratch_search_rand import random_connected


def instance(rng, kind):
    n = rng.choice([2, 3])
    m = rng.choice([2, 3])
    neighbors = random_connected(rng, n)
    slope = rng.randint(0, 3)
    base = {
        str(a): {str(j): rng.randint(0, 4) for j in range(1, m + 1)}
        for a in range(1, n + 1)
    }
    policies = {
        str(a): {
            "target_items": rng.randint(1, m),
            "release_outbid": rng.random() < 0.7,
            "rebid_on_lost": False,
        }
        for a in range(1, n + 1)
    }
    doc = {
        "physical": [
            {"id": a, "capacity": 10_000, "neighbors": sorted(neighbors[a])}
            for a in range(1, n + 1)
        ],
        "virtual": [{"id": j, "demand": 0, "neighbors": []} for j in range(1, m + 1)],
        "utility": {"kind": kind, "slope": slope, "base": base},
        "policies": policies,
        "adversarial": True,
    }
    return doc


def with_rebid(doc, agents):
    import copy

    other = copy.deepcopy(doc)
    for a in agents:
        other["policies"][str(a)]["rebid_on_lost"] = True
    return other


def hunt(kind, trials):
    rng = random.Random(4242)
    t0 = time.time()
    found = []
    for trial in range(trials):
        doc = instance(rng, kind)
        n = len(doc["physical"])
        attacked_doc = with_rebid(doc, range(1, n + 1))
        attacked_scenario = scenario_from_document(attacked_doc)
        # prefilter: some seeded run of the attacked instance must fail
        if all(
            explorer.simulate(attacked_scenario, seed=s, max_steps=250)[1] == "converged"
            for s in range(10)
        ):
            continue
        try:
            honest = explorer.enumerate_interleavings(
                scenario_from_document(doc), bound=70, slack=0, state_ceiling=60_000
            )
        except explorer.StateSpaceLimitError:
            continue
        if honest.kind != "all-converge":
            continue
        try:
            attacked = explorer.enumerate_interleavings(
                attacked_scenario, bound=70, slack=0, state_ceiling=60_000
            )
        except explorer.StateSpaceLimitError:
            print(f"trial {trial}: attack run hit state limit", flush=True)
            continue
        if attacked.kind == "counterexample":
            cause = attacked.witness.cause
            found.append((trial, cause, attacked_doc))
            print(f"FLIP trial={trial} cause={cause} "
                  f"n={n} m={len(doc['virtual'])} slope={doc['utility']['slope']}",
                  flush=True)
            if len(found) >= 6:
                break
    print(f"kind={kind}: {len(found)} flips in {trials} trials ({time.time()-t0:.0f}s)")
    for trial, cause, doc in found[:3]:
        print("=== candidate", trial, cause)
        import json

        print(json.dumps(doc))
    return found


if __name__ == "__main__":
    kind = sys.argv[1] if len(sys.argv) > 1 else "submodular-residual"
    trials = int(sys.argv[2]) if len(sys.argv) > 2 else 1500
    hunt(kind, trials)
