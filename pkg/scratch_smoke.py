"""Dev scratch: smoke test the full pipeline on the two-agent example."""
import json

from mca.scenario import scenario_from_document
from mca import core, explorer, oracle

doc = {
    "physical": [
        {"id": 1, "capacity": 50, "neighbors": [2]},
        {"id": 2, "capacity": 50, "neighbors": [1]},
    ],
    "virtual": [
        {"id": 1, "demand": 1, "neighbors": []},
        {"id": 2, "demand": 1, "neighbors": []},
        {"id": 3, "demand": 1, "neighbors": []},
    ],
    "utility": {
        "kind": "submodular-residual",
        "slope": 0,
        "base": {"1": {"1": 10, "3": 30}, "2": {"1": 20, "2": 12, "3": 5}},
    },
    "policies": {
        "1": {"target_items": 2},
        "2": {"target_items": 2},
    },
}
scenario = scenario_from_document(doc)

state = core.initial_state(scenario)
for agent, view in sorted(state.views.items()):
    print(agent, {i: (e.winner, e.bid, e.stamp) for i, e in sorted(view.entries.items())},
          "bundle", view.bundle)
print("buffer", len(state.buffer))

verdict = explorer.enumerate_interleavings(scenario)
print("verdict:", verdict.kind, "paths:", verdict.paths_explored,
      "max_depth:", verdict.max_depth_seen, "bound:", verdict.bound, "slack:", verdict.slack)

trace, outcome = explorer.simulate(scenario, seed=0, max_steps=50)
print("simulate:", outcome, "steps:", len(trace.events))
final = explorer.replay_trace(scenario, trace)
for agent, view in sorted(final.views.items()):
    print(agent, {i: (e.winner, e.bid) for i, e in sorted(view.entries.items())},
          "bundle", view.bundle, "lost", sorted(view.lost))
print("consensus:", core.consensus_reached(final), "conflict_free:", core.conflict_free(final))
print("ratio:", oracle.approximation_ratio(final, scenario))
print("optimal:", oracle.optimal_allocation(scenario))
