"""Walkthrough: the human-in-the-loop candidate selection loop.

A scripted provider stands in for the model backend; an embedded
simulator executes the finalists' plans.

Run with: python3 demos/feedback_rounds.py
"""

from sceneforge.agents import ScriptedProvider
from sceneforge.feedback import RetryBudget, Selection, finalize, start_loop, submit_selection
from sceneforge.service import in_process_client_factory

PLAN_LOFT = """[
  {"description": "platform", "console_cmds": ["add cube platform sx=3 sy=2"]},
  {"description": "ladder against platform",
   "console_cmds": ["add cube ladder sx=0.4 sz=2", "link ladder.tz = platform.sy"],
   "expected_check": {"query": "query ladder", "contains": "bound"}}
]"""

PLAN_NOOK = """[
  {"description": "nook light", "console_cmds": ["add light glow emissive=#ffd27f@1.5"]}
]"""

script = {
    "visualizer": [
        {
            "candidates": [
                {"id": "loft", "params": {"height": 2.4}, "descriptor": "raised sleeping loft"},
                {"id": "bunk", "params": {"height": 1.8}, "descriptor": "classic bunk"},
            ]
        },
        {
            "expect_contains": "introduce more diversity",
            "candidates": [
                {"id": "nook", "params": {"height": 1.2}, "descriptor": "floor-level nook"}
            ],
        },
    ],
    "planner": [{"text": PLAN_LOFT}, {"text": PLAN_NOOK}],
}
provider = ScriptedProvider(script)


def show(state):
    ids = [c.id for c in state.current]
    print(f"  round {state.round}: status={state.status} candidates={ids} kept={sorted(state.selected_ids)}")


print("Round 1: the visualizer proposes n=2 concepts for the prompt.")
state = start_loop("A kids bedroom with a reading spot", 2, provider)
show(state)

print("\nKeep 'loft', reject 'bunk' with a reason; a diverse replacement arrives:")
state = submit_selection(
    state,
    Selection(frozenset({"loft"}), {"bunk": "too tall for the room"}),
    provider,
    want_diversity=True,
)
show(state)

print("\nKeeping every current candidate ends collection and triggers finalization:")
state = submit_selection(state, Selection(frozenset({"loft", "nook"})), provider)
show(state)
assert state.status == "finalizing"

state, result = finalize(state, provider, in_process_client_factory, RetryBudget(base=2, per_step=1, cap=4))
print("\nEach finalist's plan ran on a fresh simulator scene:")
for entry in result.entries:
    steps = [f"{s.status}:{s.description}" for s in entry.report.steps]
    print(f"  {entry.candidate_id}: completed={entry.completed} steps={steps}")
    assert entry.completed and entry.snapshot.startswith('{"bindings"')
assert state.status == "done"
