"""The candidate-selection feedback loop.

Rounds of n candidates; the user keeps m of them, optionally saying why
the rest were rejected. Selected candidates survive verbatim, rejected
slots are regenerated, and the loop exits to finalization exactly when
m = n. Finalization plans and executes each accepted candidate into its
own scene.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

from .agents import (
    Candidate,
    CandidateSet,
    ExecutionReport,
    PriorRound,
    Provider,
    RetryBudget,
    manage_execute,
    plan_from_selection,
    visualize_candidates,
)
from .mcp import McpClient


class LoopError(Exception):
    """A feedback-loop operation violated the protocol."""


@dataclass(frozen=True)
class Selection:
    selected_ids: frozenset[str]
    rejection_reasons: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class HistoryEntry:
    round: int
    selection: Selection


@dataclass(frozen=True)
class LoopState:
    prompt: str
    n: int
    round: int
    current: CandidateSet
    selected_ids: frozenset[str]
    history: tuple[HistoryEntry, ...]
    status: str  # "collecting" | "finalizing" | "done"

    def candidate_ids(self) -> list[str]:
        return [c.id for c in self.current]


def start_loop(prompt: str, n: int, provider: Provider) -> LoopState:
    if n < 1:
        raise LoopError("candidate count must be >= 1")
    current = visualize_candidates(provider, prompt, n)
    return LoopState(
        prompt=prompt,
        n=n,
        round=1,
        current=current,
        selected_ids=frozenset(),
        history=(),
        status="collecting",
    )


def _validate_selection(state: LoopState, sel: Selection) -> None:
    ids = set(state.candidate_ids())
    unknown = sel.selected_ids - ids
    if unknown:
        raise LoopError(f"selected ids not in this round: {sorted(unknown)}")
    rejected = ids - sel.selected_ids
    misplaced = set(sel.rejection_reasons) - rejected
    if misplaced:
        raise LoopError(f"rejection reasons on non-rejected ids: {sorted(misplaced)}")


def submit_selection(
    state: LoopState,
    sel: Selection,
    provider: Provider,
    want_diversity: bool = False,
) -> LoopState:
    """Record the selection; either exit to finalizing (m = n) or produce
    the next round with rejected slots regenerated."""
    if state.status != "collecting":
        raise LoopError(f"cannot select while {state.status}")
    _validate_selection(state, sel)
    history = state.history + (HistoryEntry(round=state.round, selection=sel),)
    if len(sel.selected_ids) == state.n:
        return replace(
            state, selected_ids=sel.selected_ids, history=history, status="finalizing"
        )
    prior = PriorRound(
        candidates=state.current,
        selected_ids=frozenset(sel.selected_ids),
        reasons=dict(sel.rejection_reasons),
    )
    current = visualize_candidates(
        provider, state.prompt, state.n, prior=prior, want_diversity=want_diversity
    )
    return replace(
        state,
        round=state.round + 1,
        current=current,
        selected_ids=sel.selected_ids,
        history=history,
    )


@dataclass(frozen=True)
class FinalizationEntry:
    candidate_id: str
    completed: bool
    snapshot: str
    report: ExecutionReport


@dataclass(frozen=True)
class FinalizationResult:
    entries: tuple[FinalizationEntry, ...]

    def snapshots(self) -> dict[str, str]:
        return {e.candidate_id: e.snapshot for e in self.entries}


def finalize(
    state: LoopState,
    provider: Provider,
    make_client: Callable[[], McpClient],
    budget: RetryBudget,
) -> tuple[LoopState, FinalizationResult]:
    """Plan and build every accepted candidate in its own fresh scene.

    An escalated execution marks that candidate incomplete instead of
    aborting the others.
    """
    if state.status != "finalizing":
        raise LoopError(f"cannot finalize while {state.status}")
    entries: list[FinalizationEntry] = []
    for candidate in state.current:
        spec = plan_from_selection([candidate], provider)
        client = make_client()
        try:
            report = manage_execute(spec, client, budget)
        finally:
            client.close()
        entries.append(
            FinalizationEntry(
                candidate_id=candidate.id,
                completed=not report.escalated,
                snapshot=report.final_snapshot,
                report=report,
            )
        )
    done = replace(state, status="done")
    return done, FinalizationResult(entries=tuple(entries))
