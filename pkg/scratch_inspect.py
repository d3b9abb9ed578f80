"""Dev scratch: dump one counterexample trace in detail."""
from scratch_search1 import make
from mca import core, explorer

scenario = make({1: 1, 2: 1}, {1: 2, 2: 1}, 1, rebid=False)
verdict = explorer.enumerate_interleavings(scenario, bound=60, slack=0)
print("kind:", verdict.kind, "cause:", verdict.witness.cause if verdict.witness else None)

state = core.initial_state(scenario)


def show(state, label):
    print(f"--- {label} (buffer {len(state.buffer)})")
    for agent, view in sorted(state.views.items()):
        entries = {i: (e.winner, e.bid, e.stamp) for i, e in sorted(view.entries.items())}
        print(f"  agent {agent}: {entries} bundle={view.bundle} lost={sorted(view.lost)}")
    for m in state.buffer:
        payload = {i: (e.winner, e.bid, e.stamp) for i, e in sorted(m.payload.items())}
        print(f"  msg {m.sender}->{m.receiver}: {payload}")


show(state, "initial")
for event in verdict.witness.events:
    state = core.step(state, event.message, scenario)
    show(state, f"step {event.step}: processed {event.message.sender}->{event.message.receiver}")
print("consensus:", core.consensus_reached(state))
