"""Dev scratch: rebid-caused flips, round 2 (tight capacity; additive fallback)."""
import copy
import json
import random
import sys
import time

from mca.scenario import scenario_from_document
from mca import explorer
from scratch_search_rand import random_connected


def instance(rng, kind, tight_cap):
    n = rng.choice([2, 3])
    m = rng.choice([2, 3])
    neighbors = random_connected(rng, n)
    slope = rng.randint(0 if kind == "submodular-residual" else 1, 3)
    base = {
        str(a): {str(j): rng.randint(0, 5) for j in range(1, m + 1)}
        for a in range(1, n + 1)
    }
    doc = {
        "physical": [
            {
                "id": a,
                "capacity": rng.randint(2, 9) if tight_cap else 10_000,
                "neighbors": sorted(neighbors[a]),
            }
            for a in range(1, n + 1)
        ],
        "virtual": [{"id": j, "demand": 0, "neighbors": []} for j in range(1, m + 1)],
        "utility": {"kind": kind, "slope": slope, "base": base},
        "policies": {
            str(a): {
                "target_items": rng.randint(1, m),
                "release_outbid": rng.random() < 0.7,
                "rebid_on_lost": False,
            }
            for a in range(1, n + 1)
        },
        "adversarial": True,
    }
    return doc


def hunt(kind, trials, tight_cap, rng_seed=99, want=5):
    rng = random.Random(rng_seed)
    t0 = time.time()
    found = []
    for trial in range(trials):
        doc = instance(rng, kind, tight_cap)
        n = len(doc["physical"])
        attacked_doc = copy.deepcopy(doc)
        for a in range(1, n + 1):
            attacked_doc["policies"][str(a)]["rebid_on_lost"] = True
        attacked_scenario = scenario_from_document(attacked_doc)
        if all(
            explorer.simulate(attacked_scenario, seed=s, max_steps=250)[1] == "converged"
            for s in range(10)
        ):
            continue
        try:
            honest = explorer.enumerate_interleavings(
                scenario_from_document(doc), bound=70, slack=0, state_ceiling=80_000
            )
            if honest.kind != "all-converge":
                continue
            attacked = explorer.enumerate_interleavings(
                attacked_scenario, bound=70, slack=0, state_ceiling=80_000
            )
        except explorer.StateSpaceLimitError:
            continue
        if attacked.kind == "counterexample":
            cause = attacked.witness.cause
            found.append((trial, cause, attacked_doc))
            print(f"FLIP trial={trial} cause={cause} doc={json.dumps(attacked_doc)}",
                  flush=True)
            if len(found) >= want:
                break
    print(f"kind={kind} tight={tight_cap}: {len(found)} flips in {trials} ({time.time()-t0:.0f}s)")
    return found


if __name__ == "__main__":
    kind = sys.argv[1]
    tight = sys.argv[2] == "tight"
    trials = int(sys.argv[3]) if len(sys.argv) > 3 else 3000
    hunt(kind, trials, tight)
