"""Record real /v1 payloads into JSON fixtures for the UI test suite.

Runs the session service in-process against scripted providers and
captures every body the browser client would see, verbatim. Re-run
after an intentional API change:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import pathlib
import threading

from fastapi.testclient import TestClient

from sceneforge.agents import ScriptedProvider
from sceneforge.service import SessionManager, create_app

OUT = pathlib.Path(__file__).resolve().parent.parent / "test" / "fixtures"

PLAN_SHELF = """[
  {"description": "shelf carcass", "console_cmds": ["add cube shelf sx=0.9 sy=0.3 sz=1.8 color=#6b4f2a"]},
  {"description": "display board", "console_cmds": ["add cube board sx=0.86 sy=0.28 sz=0.04", "link board.tz = shelf.sz * 0.25"]}
]"""

PLAN_LAMP = """[
  {"description": "stem and warm bulb",
   "console_cmds": ["add cylinder stem radius=0.03 sz=1.5", "add light bulb emissive=#ffd9a0@1.8", "link bulb.tz = stem.sz"],
   "expected_check": {"query": "query bulb", "contains": "bound"}}
]"""

PLAN_CHAIR = """[
  {"description": "seat and backrest",
   "console_cmds": ["add cube seat sx=0.8 sy=0.8 sz=0.45 color=#5a2a3a", "add cube back sx=0.8 sy=0.2 sz=0.7 color=#5a2a3a", "link back.tz = seat.sz"]}
]"""

PLAN_THROW = """[
  {"description": "draped throw", "console_cmds": ["add plane throw sx=0.7 sy=0.5 color=#d8cbb3"]}
]"""

# Second add can never succeed twice, so the step escalates every retry.
PLAN_STUCK = """[
  {"description": "desk top", "console_cmds": ["add cube top sx=1.2", "add cube top sx=1.2"]}
]"""

HAPPY_PROMPT = "Arrange a cozy reading corner"

HAPPY_SCRIPT = {
    "visualizer": [
        {
            "expect_contains": HAPPY_PROMPT,
            "candidates": [
                {"id": "walnut-shelf", "params": {"width": 0.9, "height": 1.8}, "descriptor": "walnut book shelf"},
                {"id": "rattan-chair", "params": {"width": 0.7, "height": 0.9}, "descriptor": "rattan lounge chair"},
                {"id": "floor-lamp", "params": {"height": 1.5, "glow": "warm"}, "descriptor": "arc floor lamp"},
                {"id": "corner-rug", "params": {"width": 1.4, "depth": 1.4}, "descriptor": "patterned corner rug"},
            ],
        },
        {
            "expect_contains": "introduce more diversity",
            "candidates": [
                {"id": "velvet-armchair", "params": {"width": 0.8, "height": 1.0}, "descriptor": "wine velvet armchair"},
                {"id": "paper-lantern", "params": {"height": 0.4, "glow": "soft"}, "descriptor": "floor paper lantern"},
            ],
        },
        {
            "candidates": [
                {"id": "wool-throw", "params": {"width": 0.7, "depth": 0.5}, "descriptor": "folded wool throw"}
            ]
        },
    ],
    # Finalization order: kept candidates stay in their original slots,
    # regenerated ones take over the rejected slots.
    "planner": [
        {"expect_contains": "walnut-shelf", "text": PLAN_SHELF},
        {"expect_contains": "velvet-armchair", "text": PLAN_CHAIR},
        {"expect_contains": "floor-lamp", "text": PLAN_LAMP},
        {"expect_contains": "wool-throw", "text": PLAN_THROW},
    ],
}

HAPPY_SELECTIONS = [
    {
        "round": 1,
        "selected_ids": ["walnut-shelf", "floor-lamp"],
        "rejection_reasons": {"rattan-chair": "too fragile for kids", "corner-rug": "pattern too busy"},
        "want_diversity": True,
    },
    {
        "round": 2,
        "selected_ids": ["walnut-shelf", "floor-lamp", "velvet-armchair"],
        "rejection_reasons": {"paper-lantern": "crowds the lamp"},
    },
    {
        "round": 3,
        "selected_ids": ["walnut-shelf", "floor-lamp", "velvet-armchair", "wool-throw"],
    },
]

FLAKY_SCRIPT = {
    "visualizer": [
        {
            "candidates": [
                {"id": "oak-desk", "params": {"width": 1.2}, "descriptor": "oak writing desk"},
                {"id": "pine-desk", "params": {"width": 1.1}, "descriptor": "pine writing desk"},
            ]
        }
    ],
    "planner": [
        {"expect_contains": "oak-desk", "text": PLAN_THROW},
        {"expect_contains": "pine-desk", "text": PLAN_STUCK},
    ],
}


def make_client(script):
    manager = SessionManager(provider_factory=lambda: ScriptedProvider(script))
    return TestClient(create_app(manager))


def capture_state(client, sid, with_scenes=False):
    session = client.get(f"/v1/sessions/{sid}").json()
    cset = client.get(f"/v1/sessions/{sid}/candidates").json()
    thumbs = {}
    for cand in cset["candidates"]:
        r = client.get(f"/v1/sessions/{sid}/candidates/{cand['id']}/thumbnail")
        thumbs[cand["id"]] = r.text
    state = {
        "session": session,
        "candidate_set": cset,
        "events": client.get(f"/v1/sessions/{sid}/events").text,
        "thumbnails": thumbs,
    }
    if with_scenes:
        state["scenes"] = {
            cid: client.get(f"/v1/sessions/{sid}/scene/{cid}").text
            for cid in [c["id"] for c in cset["candidates"]]
        }
    return state


def record_happy():
    client = make_client(HAPPY_SCRIPT)
    created = client.post("/v1/sessions", json={"prompt": HAPPY_PROMPT, "n": 4})
    assert created.status_code == 201, created.text
    sid = created.json()["id"]
    states = [capture_state(client, sid)]
    for sel in HAPPY_SELECTIONS:
        posted = client.post(f"/v1/sessions/{sid}/selection", json=sel)
        assert posted.status_code == 200, posted.text
        states.append(capture_state(client, sid, with_scenes=sel is HAPPY_SELECTIONS[-1]))
    assert states[-1]["session"]["loop"]["status"] == "done"
    return {
        "prompt": HAPPY_PROMPT,
        "n": 4,
        "create_response": created.json(),
        "selections": HAPPY_SELECTIONS,
        "states": states,
    }


def record_flaky():
    client = make_client(FLAKY_SCRIPT)
    created = client.post("/v1/sessions", json={"prompt": "A study nook", "n": 2})
    sid = created.json()["id"]
    states = [capture_state(client, sid)]
    posted = client.post(
        f"/v1/sessions/{sid}/selection",
        json={"round": 1, "selected_ids": ["oak-desk", "pine-desk"]},
    )
    assert posted.status_code == 200, posted.text
    states.append(capture_state(client, sid, with_scenes=True))
    done = states[-1]["session"]
    assert any(s["status"] == "escalated" for r in done["reports"] for s in r["steps"])
    return {
        "prompt": "A study nook",
        "n": 2,
        "create_response": created.json(),
        "states": states,
    }


def record_errors():
    client = make_client(HAPPY_SCRIPT)
    sid = client.post("/v1/sessions", json={"prompt": HAPPY_PROMPT, "n": 4}).json()["id"]
    stale = client.post(
        f"/v1/sessions/{sid}/selection", json={"round": 99, "selected_ids": []}
    )
    assert stale.status_code == 422, stale.text

    class GateProvider:
        """Blocks the regeneration call until released, to hold the session lock."""

        def __init__(self):
            self.inner = ScriptedProvider(HAPPY_SCRIPT)
            self.gate = threading.Event()
            self.calls = 0

        def complete(self, role, context):
            self.calls += 1
            if role == "visualizer" and self.calls > 1:
                self.gate.wait(timeout=10)
            return self.inner.complete(role, context)

    gated = GateProvider()
    manager = SessionManager(provider_factory=lambda: gated)
    gclient = TestClient(create_app(manager))
    gid = gclient.post("/v1/sessions", json={"prompt": HAPPY_PROMPT, "n": 4}).json()["id"]
    first = threading.Thread(
        target=lambda: gclient.post(
            f"/v1/sessions/{gid}/selection", json=dict(HAPPY_SELECTIONS[0])
        )
    )
    first.start()
    while gated.calls < 2:
        pass
    conflict = gclient.post(
        f"/v1/sessions/{gid}/selection", json=dict(HAPPY_SELECTIONS[0])
    )
    assert conflict.status_code == 409, conflict.text
    gated.gate.set()
    first.join()

    bad = client.post("/v1/sessions", json={"prompt": "", "n": 4})
    assert bad.status_code == 400
    missing = client.get("/v1/sessions/s9999")
    assert missing.status_code == 404
    return {
        "stale": {"status": 422, "body": stale.json()},
        "conflict": {"status": 409, "body": conflict.json()},
        "empty_prompt": {"status": 400, "body": bad.json()},
        "unknown_session": {"status": 404, "body": missing.json()},
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, payload in (
        ("happy", record_happy()),
        ("flaky", record_flaky()),
        ("errors", record_errors()),
    ):
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"recorded {path.relative_to(OUT.parent.parent)}")


if __name__ == "__main__":
    main()
