"""Dev scratch: hunt for additive+release counterexamples (cycles preferred)."""
import itertools
import sys

from mca.scenario import scenario_from_document
from mca import explorer


def make(bases1, bases2, slope, release=True, rebid=False, t1=2, t2=2, cap=10_000):
    items = sorted(set(list(bases1) + list(bases2)))
    doc = {
        "physical": [
            {"id": 1, "capacity": cap, "neighbors": [2]},
            {"id": 2, "capacity": cap, "neighbors": [1]},
        ],
        "virtual": [{"id": j, "demand": 0, "neighbors": []} for j in items],
        "utility": {
            "kind": "nonsubmodular-additive",
            "slope": slope,
            "base": {
                "1": {str(j): bases1[j] for j in bases1},
                "2": {str(j): bases2[j] for j in bases2},
            },
        },
        "policies": {
            "1": {"target_items": t1, "release_outbid": release, "rebid_on_lost": rebid},
            "2": {"target_items": t2, "release_outbid": release, "rebid_on_lost": rebid},
        },
        "adversarial": rebid,
    }
    return scenario_from_document(doc)


def search(rebid, max_base, slopes, budget=60):
    found_cycle = []
    found_other = []
    count = 0
    values = range(max_base + 1)
    for slope in slopes:
        for a1, b1, a2, b2 in itertools.product(values, repeat=4):
            count += 1
            scenario = make({1: a1, 2: b1}, {1: a2, 2: b2}, slope, rebid=rebid)
            try:
                verdict = explorer.enumerate_interleavings(
                    scenario, bound=budget, slack=0, state_ceiling=120_000
                )
            except explorer.StateSpaceLimitError:
                found_other.append((slope, a1, b1, a2, b2, "state-limit"))
                continue
            if verdict.kind == "counterexample":
                cause = verdict.witness.cause
                rec = (slope, a1, b1, a2, b2, cause, len(verdict.witness.events),
                       verdict.witness.cycle_start)
                if cause == "cycle":
                    found_cycle.append(rec)
                    print("CYCLE", rec, flush=True)
                else:
                    found_other.append(rec)
    print(f"rebid={rebid}: scanned {count}; cycles {len(found_cycle)}; other {len(found_other)}")
    for rec in found_other[:15]:
        print("  other:", rec)
    return found_cycle, found_other


if __name__ == "__main__":
    rebid = sys.argv[1] == "rebid" if len(sys.argv) > 1 else False
    search(rebid, max_base=3, slopes=(1, 2))
