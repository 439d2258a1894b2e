"""Plan execution: retries resume, budgets cap attempts, escalation halts."""

import json
import threading

import pytest

from sceneforge.agents import (
    CheckSpec,
    PlanError,
    PlanStep,
    ProceduralSpec,
    RetryBudget,
    manage_execute,
)
from sceneforge.dccsim import CONSOLE_TOOL, SceneBox, run_console_line, snapshot_text
from sceneforge.mcp import McpClient, McpServer, ToolRegistry, transport_pair
from sceneforge.mcp.errors import TransportClosed


def serve_console(fail_plan=None):
    """DCC-style server whose console can fail scripted transient errors.

    fail_plan maps a command line to how many times it fails before
    starting to work; pass None for an always-honest console.
    """
    fail_plan = dict(fail_plan or {})
    box = SceneBox()
    registry = ToolRegistry()

    def console(args):
        cmd = args["cmd"]
        if fail_plan.get(cmd, 0) > 0:
            fail_plan[cmd] -= 1
            raise ValueError(f"transient failure running {cmd!r}")
        box.scene, result = run_console_line(box.scene, cmd)
        return result

    registry.register_tool(
        CONSOLE_TOOL, "console", {"cmd": {"type": "string", "required": True}}, console
    )
    registry.register_tool(
        "get_scene_snapshot", "snapshot", {}, lambda args: snapshot_text(box.scene)
    )
    client_side, server_side = transport_pair()
    server = McpServer("console-fixture", "0", registry)
    thread = threading.Thread(target=server.serve, args=(server_side,), daemon=True)
    thread.start()
    client = McpClient(client_side)
    client.initialize()
    return client, thread, box


def spec_of(*steps):
    return ProceduralSpec(numeric_scopes={}, categorical_scopes={}, plan=tuple(steps))


def step(description, *cmds, check=None):
    return PlanStep(description=description, console_cmds=tuple(cmds), expected_check=check)


BUDGET = RetryBudget(base=2, per_step=1, cap=4)


def test_clean_plan_uses_one_attempt_per_step():
    client, thread, box = serve_console()
    report = manage_execute(
        spec_of(
            step("base", "add cube base"),
            step("tower", "add cube tower ty=2", "link tower.top = base.sy + 1"),
            step("check", "query tower"),
        ),
        client,
        BUDGET,
    )
    assert report.attempts == [1, 1, 1]
    assert [s.status for s in report.steps] == ["ok", "ok", "ok"]
    assert not report.escalated
    assert {o["name"] for o in json.loads(report.final_snapshot)["objects"]} == {"base", "tower"}
    assert box.scene.objects["tower"].get_param("top") == 2.0
    client.close()
    thread.join(timeout=5)


def test_transient_failures_retry_and_resume():
    client, thread, _ = serve_console(fail_plan={"add cube mid": 2})
    report = manage_execute(
        spec_of(
            step("base", "add cube base"),
            step("mid", "set base.y 1", "add cube mid", "set mid.z 2"),
            step("last", "query mid"),
        ),
        client,
        RetryBudget(base=3, per_step=0, cap=5),
    )
    assert report.attempts == [1, 3, 1]
    assert not report.escalated
    # A retry must not replay commands that already succeeded: replaying
    # "set base.y 1" would work, but replaying an add would collide.
    snapshot = json.loads(report.final_snapshot)
    assert {o["name"] for o in snapshot["objects"]} == {"base", "mid"}
    client.close()
    thread.join(timeout=5)


def test_always_failing_step_exhausts_the_capped_budget():
    client, thread, _ = serve_console()
    filler = [f"set wall.p{i} 1" for i in range(9)]
    report = manage_execute(
        spec_of(
            step("prep", "add cube wall", "add cube dup"),
            step("doomed", "add cube dup", *filler),  # complexity 10
            step("never", "query wall"),
        ),
        client,
        RetryBudget(base=1, per_step=1, cap=4),
    )
    doomed = report.steps[1]
    assert doomed.attempts == 4  # min(4, 1 + 1*10)
    assert doomed.status == "escalated"
    assert "already exists" in doomed.error
    assert report.steps[2].status == "not_run"
    assert report.steps[2].attempts == 0
    assert report.escalated
    client.close()
    thread.join(timeout=5)


def test_failed_check_retries_only_the_check():
    client, thread, _ = serve_console()
    report = manage_execute(
        spec_of(
            step(
                "base",
                "add cube base",
                check=CheckSpec(query="query base", contains="kind=plane"),
            )
        ),
        client,
        RetryBudget(base=2, per_step=0, cap=2),
    )
    assert report.steps[0].status == "escalated"
    assert report.steps[0].attempts == 2
    assert "kind=plane" in report.steps[0].error
    # The add ran once; retrying it would have failed with a duplicate.
    assert "already exists" not in report.steps[0].error
    client.close()
    thread.join(timeout=5)


def test_passing_check_counts_in_the_same_attempt():
    client, thread, _ = serve_console()
    report = manage_execute(
        spec_of(
            step(
                "base",
                "add cube base",
                check=CheckSpec(query="query base", contains="kind=cube"),
            )
        ),
        client,
        BUDGET,
    )
    assert report.attempts == [1]
    assert not report.escalated
    client.close()
    thread.join(timeout=5)


def test_empty_plan_rejected():
    client, thread, _ = serve_console()
    with pytest.raises(PlanError, match="empty"):
        manage_execute(spec_of(), client, BUDGET)
    client.close()
    thread.join(timeout=5)


def test_transport_failure_raises_instead_of_escalating():
    client, thread, _ = serve_console()
    client.close()
    thread.join(timeout=5)
    with pytest.raises(TransportClosed):
        manage_execute(spec_of(step("base", "add cube base")), client, BUDGET)


def test_scripted_runs_are_identical():
    reports = []
    for _ in range(2):
        client, thread, _ = serve_console(fail_plan={"add cube mid": 1})
        reports.append(
            manage_execute(
                spec_of(step("base", "add cube base"), step("mid", "add cube mid")),
                client,
                BUDGET,
            )
        )
        client.close()
        thread.join(timeout=5)
    assert reports[0] == reports[1]
