"""Session lifecycle: create, select, finalize, journal, replay.

The manager is transport-agnostic; the HTTP layer translates ApiError
into status codes. All mutations for one session are serialized by a
per-session lock, and a second writer observing the lock held gets a
conflict instead of waiting (the UI retries idempotently).
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from ..agents import (
    Candidate,
    ProviderError,
    ProviderProtocolError,
    RetryBudget,
)
from ..chatflow import ConversationState, load_packaged_template, set_stage
from ..dccsim import serve_dcc_mcp
from ..feedback import (
    FinalizationResult,
    LoopError,
    LoopState,
    Selection,
    finalize,
    start_loop,
    submit_selection,
)
from ..mcp import McpClient, connect_tcp, transport_pair
from .journal import Journal

MAX_CANDIDATES = 16

STAGE_AT_CREATE = "Conceptualization"  # candidate rounds concretize the concept
STAGE_AT_FINALIZE = "Builder"
STAGE_AT_DONE = "Inspector"


class ApiError(Exception):
    """Error with a stable symbolic code and an HTTP status."""

    def __init__(self, http_status: int, code: str, message: str, **extra: Any):
        super().__init__(f"{code}: {message}")
        self.http_status = http_status
        self.code = code
        self.message = message
        self.extra = dict(extra)

    def body(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, **self.extra}


def in_process_client_factory() -> McpClient:
    """Fresh embedded simulator per connection (the default backend)."""
    client_side, server_side = transport_pair()
    thread = threading.Thread(target=serve_dcc_mcp, args=(server_side,), daemon=True)
    thread.start()
    client = McpClient(client_side)
    client.initialize()
    return client


def tcp_client_factory(host: str, port: int) -> Callable[[], McpClient]:
    """Points the manager at an external DCC MCP server."""

    def factory() -> McpClient:
        client = McpClient(connect_tcp(host, port))
        client.initialize()
        return client

    return factory


def candidate_body(candidate: Candidate) -> dict[str, Any]:
    return {
        "id": candidate.id,
        "params": candidate.params,
        "descriptor": candidate.descriptor,
    }


@dataclass
class Session:
    id: str
    prompt: str
    n: int
    provider: Any
    loop: LoopState
    conversation: ConversationState
    created_at: float
    updated_at: float
    events: list[dict[str, Any]] = field(default_factory=list)
    result: FinalizationResult | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def emit(self, event: str, **payload: Any) -> None:
        self.events.append({"seq": len(self.events) + 1, "event": event, **payload})

    def candidate(self, candidate_id: str) -> Candidate:
        for c in self.loop.current:
            if c.id == candidate_id:
                return c
        raise ApiError(404, "unknown_candidate", f"no candidate {candidate_id!r}")

    def body(self) -> dict[str, Any]:
        reports = []
        if self.result is not None:
            for entry in self.result.entries:
                reports.append(
                    {
                        "candidate_id": entry.candidate_id,
                        "completed": entry.completed,
                        "steps": [
                            {
                                "index": s.index,
                                "description": s.description,
                                "attempts": s.attempts,
                                "status": s.status,
                                "error": s.error,
                            }
                            for s in entry.report.steps
                        ],
                    }
                )
        return {
            "id": self.id,
            "prompt": self.prompt,
            "n": self.n,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "conversation": self.conversation.to_dict(),
            "loop": {
                "status": self.loop.status,
                "round": self.loop.round,
                "current": [candidate_body(c) for c in self.loop.current],
                "selected_ids": sorted(self.loop.selected_ids),
                "history": [
                    {
                        "round": h.round,
                        "selected_ids": sorted(h.selection.selected_ids),
                        "rejection_reasons": dict(h.selection.rejection_reasons),
                    }
                    for h in self.loop.history
                ],
            },
            "reports": reports,
        }


class SessionManager:
    def __init__(
        self,
        provider_factory: Callable[[], Any],
        make_client: Callable[[], McpClient] = in_process_client_factory,
        budget: RetryBudget = RetryBudget(base=2, per_step=1, cap=4),
        journal_dir: str | None = None,
        workflow_template: str = "3dify-main",
    ):
        self._provider_factory = provider_factory
        self._make_client = make_client
        self._budget = budget
        self._journal = Journal(journal_dir) if journal_dir else None
        self._workflow = load_packaged_template(workflow_template)
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._next_id = 1
        self._replaying = False

    # -- lookup ---------------------------------------------------------------

    def get(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        return session

    def session_ids(self) -> list[str]:
        return sorted(self._sessions)

    # -- mutations ------------------------------------------------------------

    def create_session(self, prompt: str, n: Any, session_id: str | None = None) -> Session:
        if not isinstance(prompt, str) or not prompt.strip():
            raise ApiError(400, "empty_prompt", "prompt must be a non-empty string")
        if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_CANDIDATES:
            raise ApiError(
                400, "bad_candidate_count", f"n must be an integer in 1..{MAX_CANDIDATES}"
            )
        provider = self._provider_factory()
        try:
            loop = start_loop(prompt, n, provider)
        except (ProviderError, ProviderProtocolError) as e:
            raise ApiError(503, "provider_unavailable", str(e)) from e
        conversation = set_stage(self._workflow.initial_state(), STAGE_AT_CREATE)
        now = time.time()
        with self._lock:
            if session_id is None:
                session_id = f"s{self._next_id:04d}"
            number = int(session_id[1:]) if session_id[1:].isdigit() else self._next_id
            self._next_id = max(self._next_id, number) + 1
            if session_id in self._sessions:
                raise ApiError(409, "conflict", f"session {session_id!r} already exists")
            session = Session(
                id=session_id,
                prompt=prompt,
                n=n,
                provider=provider,
                loop=loop,
                conversation=conversation,
                created_at=now,
                updated_at=now,
            )
            self._sessions[session_id] = session
        session.emit("round_opened", round=loop.round, candidate_ids=session.loop.candidate_ids())
        if self._journal and not self._replaying:
            self._journal.append(session_id, {"op": "create", "prompt": prompt, "n": n})
        return session

    def submit_selection(
        self,
        session_id: str,
        round_token: Any,
        selected_ids: list[str],
        rejection_reasons: dict[str, str] | None = None,
        want_diversity: bool = False,
    ) -> Session:
        session = self.get(session_id)
        if not session.lock.acquire(blocking=False):
            raise ApiError(409, "conflict", "another selection for this session is in flight")
        try:
            if round_token != session.loop.round:
                raise ApiError(
                    422,
                    "stale_round",
                    f"selection answers round {round_token!r}, current is {session.loop.round}",
                    round=session.loop.round,
                )
            selection = Selection(
                selected_ids=frozenset(selected_ids),
                rejection_reasons=dict(rejection_reasons or {}),
            )
            try:
                session.loop = submit_selection(
                    session.loop, selection, session.provider, want_diversity=want_diversity
                )
            except LoopError as e:
                raise ApiError(400, "bad_selection", str(e)) from e
            except (ProviderError, ProviderProtocolError) as e:
                raise ApiError(503, "provider_unavailable", str(e)) from e
            if session.loop.status == "finalizing":
                session.conversation = set_stage(session.conversation, STAGE_AT_FINALIZE)
                self._finalize(session)
            else:
                session.emit(
                    "round_opened",
                    round=session.loop.round,
                    candidate_ids=session.loop.candidate_ids(),
                )
            session.updated_at = time.time()
            if self._journal and not self._replaying:
                self._journal.append(
                    session_id,
                    {
                        "op": "selection",
                        "round": round_token,
                        "selected_ids": sorted(selected_ids),
                        "rejection_reasons": dict(rejection_reasons or {}),
                        "want_diversity": want_diversity,
                    },
                )
            return session
        finally:
            session.lock.release()

    def _finalize(self, session: Session) -> None:
        try:
            session.loop, result = finalize(
                session.loop, session.provider, self._make_client, self._budget
            )
        except (ProviderError, ProviderProtocolError) as e:
            raise ApiError(503, "provider_unavailable", str(e)) from e
        session.result = result
        for entry in result.entries:
            for step in entry.report.steps:
                session.emit(
                    "finalization_step",
                    candidate_id=entry.candidate_id,
                    step_index=step.index,
                    description=step.description,
                    attempts=step.attempts,
                    status=step.status,
                )
                if step.status == "escalated":
                    session.emit(
                        "escalation",
                        candidate_id=entry.candidate_id,
                        step_index=step.index,
                        message=step.error or "",
                    )
        session.conversation = set_stage(session.conversation, STAGE_AT_DONE)
        session.emit(
            "done",
            snapshot_ids=sorted(result.snapshots()),
            completed={e.candidate_id: e.completed for e in result.entries},
        )

    # -- artifacts -------------------------------------------------------------

    def scene_snapshot(self, session_id: str, candidate_id: str) -> str:
        session = self.get(session_id)
        if session.result is None:
            raise ApiError(404, "no_scene_yet", "finalization has not produced scenes")
        snapshots = session.result.snapshots()
        if candidate_id not in snapshots:
            raise ApiError(404, "unknown_candidate", f"no scene for {candidate_id!r}")
        return snapshots[candidate_id]

    def thumbnail(self, session_id: str, candidate_id: str) -> str:
        return self.get(session_id).candidate(candidate_id).thumbnail

    # -- persistence -----------------------------------------------------------

    def replay_journal(self) -> int:
        """Re-run every journaled request; returns sessions restored."""
        if self._journal is None:
            raise ApiError(500, "no_journal", "manager has no journal directory")
        restored = 0
        self._replaying = True
        try:
            for session_id, entries in self._journal.load_all():
                for entry in entries:
                    if entry["op"] == "create":
                        self.create_session(entry["prompt"], entry["n"], session_id=session_id)
                        restored += 1
                    elif entry["op"] == "selection":
                        self.submit_selection(
                            session_id,
                            entry["round"],
                            entry["selected_ids"],
                            entry.get("rejection_reasons") or {},
                            entry.get("want_diversity", False),
                        )
        finally:
            self._replaying = False
        return restored
