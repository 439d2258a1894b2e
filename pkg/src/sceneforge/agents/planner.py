"""Parameter-scope extraction and plan authoring."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from ..dccsim import CommandDiagnostic, parse_command
from .providers import Message, Provider
from .visualizer import Candidate


class PlanError(Exception):
    """The selection or the provider's plan is unusable."""


@dataclass(frozen=True)
class CheckSpec:
    """Post-step verification: run a query, require a substring."""

    query: str
    contains: str


@dataclass(frozen=True)
class PlanStep:
    description: str
    console_cmds: tuple[str, ...]
    expected_check: CheckSpec | None = None


@dataclass(frozen=True)
class RetryBudget:
    base: int
    per_step: int
    cap: int

    def __post_init__(self):
        if self.base < 1 or self.cap < 1 or self.per_step < 0:
            raise ValueError("retry budget needs base >= 1, cap >= 1, per_step >= 0")


@dataclass(frozen=True)
class ProceduralSpec:
    numeric_scopes: dict[str, tuple[float, float]]
    categorical_scopes: dict[str, frozenset[str]]
    plan: tuple[PlanStep, ...] = field(default_factory=tuple)


def compute_retry_budget(budget: RetryBudget, complexity: int) -> int:
    if complexity < 0:
        raise ValueError("complexity must be >= 0")
    return min(budget.cap, budget.base + budget.per_step * complexity)


def extract_scopes(
    selected: list[Candidate],
) -> tuple[dict[str, tuple[float, float]], dict[str, frozenset[str]]]:
    """Numeric params get [min, max] over the selection; string params get
    the set of observed values. All candidates must agree on param names
    and on each param's kind."""
    if not selected:
        raise PlanError("selection is empty")
    names = set(selected[0].params)
    for candidate in selected[1:]:
        if set(candidate.params) != names:
            raise PlanError(
                f"candidate {candidate.id} has params {sorted(candidate.params)}, "
                f"expected {sorted(names)}"
            )
    numeric: dict[str, tuple[float, float]] = {}
    categorical: dict[str, frozenset[str]] = {}
    for name in sorted(names):
        values = [c.params[name] for c in selected]
        if all(isinstance(v, str) for v in values):
            categorical[name] = frozenset(values)
        elif all(isinstance(v, (int, float)) for v in values):
            numeric[name] = (min(values), max(values))
        else:
            raise PlanError(f"param {name} mixes numeric and string values")
    return numeric, categorical


def _parse_plan_steps(text: str) -> tuple[PlanStep, ...]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise PlanError(f"plan is not valid JSON: {e}") from e
    if not isinstance(raw, list) or not raw:
        raise PlanError("plan must be a non-empty JSON list of steps")
    steps = []
    for index, entry in enumerate(raw):
        if not isinstance(entry, dict) or not entry.get("description"):
            raise PlanError(f"plan step {index}: needs a description")
        cmds = entry.get("console_cmds")
        if not isinstance(cmds, list) or not cmds:
            raise PlanError(f"plan step {index}: needs a non-empty console_cmds list")
        for cmd in cmds:
            try:
                parse_command(cmd)
            except CommandDiagnostic as e:
                raise PlanError(f"plan step {index}: bad command {cmd!r}: {e}") from e
        check = entry.get("expected_check")
        check_spec = None
        if check is not None:
            if not isinstance(check, dict) or set(check) != {"query", "contains"}:
                raise PlanError(f"plan step {index}: expected_check needs query and contains")
            try:
                parse_command(check["query"])
            except CommandDiagnostic as e:
                raise PlanError(f"plan step {index}: bad check query: {e}") from e
            check_spec = CheckSpec(query=check["query"], contains=check["contains"])
        steps.append(
            PlanStep(
                description=entry["description"],
                console_cmds=tuple(cmds),
                expected_check=check_spec,
            )
        )
    return tuple(steps)


def _scope_text(numeric, categorical) -> str:
    parts = [f"{name} in [{lo}, {hi}]" for name, (lo, hi) in numeric.items()]
    parts += [f"{name} in {{{', '.join(sorted(vs))}}}" for name, vs in categorical.items()]
    return "; ".join(parts) if parts else "no scoped params"


def plan_from_selection(selected: list[Candidate], provider: Provider) -> ProceduralSpec:
    """Scopes come from the deterministic min/max/set rule; the step list
    comes from the planner provider as a JSON plan, validated here."""
    numeric, categorical = extract_scopes(selected)
    context: list[Message] = [
        {
            "role": "user",
            "content": "Selected candidates:\n"
            + "\n".join(
                f"- {c.id} ({c.descriptor}): {json.dumps(c.params, sort_keys=True)}"
                for c in selected
            ),
        },
        {"role": "user", "content": f"Parameter scopes: {_scope_text(numeric, categorical)}"},
        {
            "role": "user",
            "content": "Write the build plan as a JSON list of steps with "
            "description, console_cmds, and optional expected_check.",
        },
    ]
    reply = provider.complete("planner", context)
    if reply.text is None:
        raise PlanError("planner reply must be text containing a JSON plan")
    return ProceduralSpec(
        numeric_scopes=numeric,
        categorical_scopes=categorical,
        plan=_parse_plan_steps(reply.text),
    )
