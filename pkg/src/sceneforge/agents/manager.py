"""Plan execution over an MCP client, with per-step retry budgets."""

from __future__ import annotations

from dataclasses import dataclass

from ..dccsim import CONSOLE_TOOL
from ..mcp import McpClient, RpcError
from .planner import PlanError, ProceduralSpec, RetryBudget, compute_retry_budget


class _CheckFailed(Exception):
    pass


@dataclass(frozen=True)
class StepReport:
    index: int
    description: str
    attempts: int
    status: str  # "ok" | "escalated" | "not_run"
    error: str | None = None


@dataclass(frozen=True)
class ExecutionReport:
    steps: tuple[StepReport, ...]
    final_snapshot: str
    escalated: bool

    @property
    def attempts(self) -> list[int]:
        return [s.attempts for s in self.steps]


def _run_step(client: McpClient, step, allowed: int) -> tuple[int, str | None]:
    """Returns (attempts, error); error None means the step passed.

    A retry resumes after the commands that already succeeded, because
    every applied console command has already changed the scene.
    """
    attempts = 0
    done = 0
    error: str | None = None
    while attempts < allowed:
        attempts += 1
        try:
            while done < len(step.console_cmds):
                client.call_tool_text(CONSOLE_TOOL, {"cmd": step.console_cmds[done]})
                done += 1
            if step.expected_check is not None:
                output = client.call_tool_text(CONSOLE_TOOL, {"cmd": step.expected_check.query})
                if step.expected_check.contains not in output:
                    raise _CheckFailed(
                        f"check {step.expected_check.query!r} missing "
                        f"{step.expected_check.contains!r} in {output!r}"
                    )
            return attempts, None
        except RpcError as e:
            error = e.message
        except _CheckFailed as e:
            error = str(e)
    return attempts, error


def manage_execute(
    spec: ProceduralSpec, client: McpClient, budget: RetryBudget
) -> ExecutionReport:
    """Run the plan in order. A step that exhausts its budget is marked
    escalated and execution halts there, since later steps may rely on
    the scene state this one failed to reach. Transport-level failures
    raise instead of being recorded."""
    if not spec.plan:
        raise PlanError("plan is empty")
    reports: list[StepReport] = []
    escalated = False
    for index, step in enumerate(spec.plan):
        if escalated:
            reports.append(StepReport(index, step.description, 0, "not_run"))
            continue
        allowed = compute_retry_budget(budget, len(step.console_cmds))
        attempts, error = _run_step(client, step, allowed)
        if error is None:
            reports.append(StepReport(index, step.description, attempts, "ok"))
        else:
            reports.append(StepReport(index, step.description, attempts, "escalated", error))
            escalated = True
    final_snapshot = client.call_tool_text("get_scene_snapshot", {})
    return ExecutionReport(steps=tuple(reports), final_snapshot=final_snapshot, escalated=escalated)
