"""Dev scratch: randomized hunt for cycle outcomes across wide policy space."""
import random
import sys
import time

from mca.scenario import scenario_from_document
from mca import explorer


def random_connected(rng, n):
    nodes = list(range(1, n + 1))
    edges = set()
    shuffled = nodes[:]
    rng.shuffle(shuffled)
    for i in range(1, n):
        a = shuffled[i]
        b = rng.choice(shuffled[:i])
        edges.add((min(a, b), max(a, b)))
    for a in nodes:
        for b in nodes:
            if a < b and rng.random() < 0.4:
                edges.add((a, b))
    neighbors = {a: [] for a in nodes}
    for a, b in edges:
        neighbors[a].append(b)
        neighbors[b].append(a)
    return neighbors


def random_instance(rng, kind, rebid_mode):
    n = rng.choice([2, 2, 3])
    m = rng.choice([2, 2, 3])
    neighbors = random_connected(rng, n)
    slope = rng.randint(1, 3)
    doc = {
        "physical": [
            {"id": a, "capacity": 10_000, "neighbors": sorted(neighbors[a])}
            for a in range(1, n + 1)
        ],
        "virtual": [{"id": j, "demand": 0, "neighbors": []} for j in range(1, m + 1)],
        "utility": {
            "kind": kind,
            "slope": slope,
            "base": {
                str(a): {str(j): rng.randint(0, 4) for j in range(1, m + 1)}
                for a in range(1, n + 1)
            },
        },
        "policies": {
            str(a): {
                "target_items": rng.randint(1, m),
                "release_outbid": rng.random() < 0.8,
                "rebid_on_lost": (rebid_mode == "all")
                or (rebid_mode == "some" and rng.random() < 0.5),
            }
            for a in range(1, n + 1)
        },
        "adversarial": rebid_mode != "none",
    }
    return scenario_from_document(doc)


def hunt(kind, rebid_mode, trials, seeds=12, max_steps=400):
    rng = random.Random(777)
    t0 = time.time()
    cycles = []
    for trial in range(trials):
        scenario = random_instance(rng, kind, rebid_mode)
        for seed in range(seeds):
            _, outcome = explorer.simulate(scenario, seed=seed, max_steps=max_steps)
            if outcome == "cycle":
                cycles.append((trial, seed, scenario))
                print(f"SIM-CYCLE kind={kind} rebid={rebid_mode} trial={trial} seed={seed}",
                      flush=True)
                break
        if len(cycles) >= 8:
            break
    print(f"kind={kind} rebid={rebid_mode}: {len(cycles)} cycle instances "
          f"in {trials} trials ({time.time()-t0:.0f}s)")
    return cycles


if __name__ == "__main__":
    kind = sys.argv[1] if len(sys.argv) > 1 else "nonsubmodular-additive"
    rebid_mode = sys.argv[2] if len(sys.argv) > 2 else "none"
    trials = int(sys.argv[3]) if len(sys.argv) > 3 else 3000
    hunt(kind, rebid_mode, trials)
