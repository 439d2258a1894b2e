"""Walkthrough: the staged conversation workflow.

The packaged main template walks Scene Analyzer -> Knowledge Retrieval
-> Conceptualization -> Builder -> Inspector, one stage per turn. A
failing inspection loops back to the Builder until the inspection
budget runs out.

Run with: python3 demos/chatflow_stages.py
"""

from sceneforge.chatflow import ServiceBundle, SessionComplete, load_packaged_template, run_turn


def services(verdicts):
    verdicts = list(verdicts)
    return ServiceBundle(
        retrieval=lambda query, k: [f"doc{i}: {query}" for i in range(k)],
        agent=lambda role, ctx: verdicts.pop(0) if role == "inspector" else f"{role} draft",
        tool=lambda name, args: {"output": f"ran {args['cmd']}"},
    )


def drive(wf, bundle, prompt):
    state = wf.initial_state()
    for turn in range(1, 20):
        stage = state.stage
        try:
            result = run_turn(wf, state, prompt, bundle)
        except SessionComplete:
            print(f"  turn {turn}: [{stage}] session complete")
            return state
        arrow = stage if result.new_state.stage == stage else f"{stage} -> {result.new_state.stage}"
        print(f"  turn {turn}: [{arrow}] {result.output_text}")
        state = result.new_state
    raise AssertionError("never completed")


wf = load_packaged_template("3dify-main")
print(f"Stages: {wf.initial_state().stages}")

print("\nHappy path (inspector approves first try):")
final = drive(wf, services(["pass"]), "build a greenhouse")
assert final.stage == "Inspector"

print("\nRetry path (two rejections burn inspection budget, then approval):")
final = drive(wf, services(["fail", "fail", "pass"]), "build a greenhouse")
assert final.remaining_inspection_count == final.max_inspection_count - 2
print(f"  remaining inspection budget: {final.remaining_inspection_count}")
