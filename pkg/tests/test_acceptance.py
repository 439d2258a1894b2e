"""One test per release criterion.

Each test runs its criterion end to end at the stated size and tolerance,
reusing the module suites' independent oracles. conftest.py prints a
PASS/FAIL line per criterion after the run.
"""

import json
import pathlib
import random
import subprocess
import sys
import time

import pytest

from sceneforge.chatflow import SessionComplete, to_next_stage
from sceneforge.dccsim import Scene, apply_command, parse_command, make_dcc_server, snapshot_text
from sceneforge.mcp import PARSE_ERROR, INVALID_REQUEST, RpcError, decode_message

ROOT = pathlib.Path(__file__).resolve().parents[1]


def test_chatflow_agreement():
    from test_chatflow_agreement import run_agreement

    start = time.monotonic()
    outcomes = run_agreement(200, seed=20260814)
    elapsed = time.monotonic() - start
    assert outcomes["ok"] >= 100  # corpus exercised real turns, not only failures
    assert elapsed < 10.0, f"agreement run took {elapsed:.1f}s"


def test_stage_machine():
    from test_chatflow_state import STAGES, make_state

    for pos in range(len(STAGES)):
        for dirty in (0, 1):
            for enable in (0, 1):
                state = make_state(stage_num=pos, dirty=dirty, enable=enable)
                advances = dirty == 0 and enable == 1
                if advances and pos == len(STAGES) - 1:
                    with pytest.raises(SessionComplete):
                        to_next_stage(state)
                    continue
                new = to_next_stage(state)
                assert new.stage_num == (pos + 1 if advances else pos)
                assert new.dirty_bit == 0
                assert new.stage == STAGES[new.stage_num]


def test_inspection_budget():
    from test_chatflow_interpreter import test_build_loop_spends_exactly_its_budget

    for budget in range(11):
        test_build_loop_spends_exactly_its_budget(budget)


def test_mcp_conformance():
    from test_dccsim_server import GOLDEN, run_transcript
    from test_mcp_messages import random_json_value

    first = run_transcript()
    second = run_transcript()
    requests = [
        line for line in first.splitlines() if line.startswith(b">> ") and b'"id":' in line
    ]
    assert len(requests) >= 100
    assert first == second
    assert first == GOLDEN.read_bytes()

    rng = random.Random(20260814)
    server, _ = make_dcc_server()
    for _ in range(100_000):
        roll = rng.random()
        if roll < 0.4:
            line = bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))
        elif roll < 0.7:
            line = "".join(
                rng.choice('{}[]",:0123456789truefalsenul \t') for _ in range(rng.randint(0, 60))
            ).encode()
        else:
            line = json.dumps(random_json_value(rng)).encode()
        try:
            message = decode_message(line)
            assert isinstance(message, dict)
        except RpcError as e:
            assert e.code in (PARSE_ERROR, INVALID_REQUEST)
        reply = server.handle_line(line)  # must answer or stay silent, never raise
        assert reply is None or reply.endswith(b"\n")


def test_scene_graph():
    from test_dccsim_scene import (
        test_evaluation_matches_fixed_point_oracle_on_100_random_scenes,
        test_every_cycle_introducing_link_is_rejected,
    )

    test_evaluation_matches_fixed_point_oracle_on_100_random_scenes()
    test_every_cycle_introducing_link_is_rejected()

    scene = Scene()
    lines = (
        "add cube wall height=2.5",
        "add cube roof base_z=0",
        "link roof.base_z = wall.height",
        "set wall.height 3",
    )
    for line in lines:
        scene = apply_command(scene, parse_command(line))[0]
    assert '"base_z":3' in snapshot_text(scene)


def test_feedback_loop():
    from test_feedback import (
        test_every_monotone_selection_sequence_terminates_within_n_rounds,
        test_selecting_everything_on_round_one_finalizes_immediately,
    )

    for n in range(1, 7):
        test_every_monotone_selection_sequence_terminates_within_n_rounds(n)
    test_selecting_everything_on_round_one_finalizes_immediately()


def test_planner_scopes_and_budget():
    from test_agents_planner import (
        test_budget_matches_brute_force_and_stays_bounded,
        test_scopes_match_independent_min_max_on_random_sets,
    )

    test_scopes_match_independent_min_max_on_random_sets()
    test_budget_matches_brute_force_and_stays_bounded()


def test_rag_retrieval():
    from test_rag import (
        test_exact_child_text_scores_one_at_rank_one,
        test_retrieval_matches_brute_force_on_1000_chunks,
    )

    test_retrieval_matches_brute_force_on_1000_chunks()
    test_exact_child_text_scores_one_at_rank_one()


def test_end_to_end_replay(tmp_path):
    start = time.monotonic()
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "sceneforge.cli",
            "--root",
            str(ROOT),
            "replay",
            "scenarios/pc-demo",
            "--artifacts",
            str(tmp_path),
        ],
        capture_output=True,
        text=True,
        timeout=60,
    )
    elapsed = time.monotonic() - start
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert elapsed < 30.0, f"replay took {elapsed:.1f}s"
    golden_dir = ROOT / "scenarios" / "pc-demo" / "golden"
    for golden in sorted(golden_dir.iterdir()):
        assert (tmp_path / golden.name).read_bytes() == golden.read_bytes()
