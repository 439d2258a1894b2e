"""Provider seam for the agent roles, plus the scripted test double.

A provider answers one completion request for a role ("visualizer",
"planner", ...) over a message-list context. Scripted providers replay
fixture replies keyed by (role, per-role ordinal), so a whole session
is reproducible without any model backend.
"""

from __future__ import annotations

import json
import pathlib
from dataclasses import dataclass
from typing import Any, Protocol

Message = dict[str, str]  # {"role": ..., "content": ...}


class ProviderError(Exception):
    """The provider could not produce a reply."""


class ProviderProtocolError(Exception):
    """The provider replied, but not in the shape the pipeline requires."""


@dataclass(frozen=True)
class ProviderReply:
    """Exactly one of text, tool_call, or candidates is set."""

    text: str | None = None
    tool_call: dict[str, Any] | None = None
    candidates: tuple[dict[str, Any], ...] | None = None

    def __post_init__(self):
        filled = sum(v is not None for v in (self.text, self.tool_call, self.candidates))
        if filled != 1:
            raise ValueError("reply must carry exactly one of text/tool_call/candidates")


class Provider(Protocol):
    def complete(self, role: str, context: list[Message]) -> ProviderReply: ...


def _reply_from_spec(spec: dict[str, Any]) -> ProviderReply:
    keys = {"text", "tool_call", "candidates"} & spec.keys()
    if len(keys) != 1:
        raise ProviderError(f"fixture reply must have one of text/tool_call/candidates, got {sorted(spec)}")
    key = keys.pop()
    value = spec[key]
    if key == "candidates":
        return ProviderReply(candidates=tuple(value))
    return ProviderReply(**{key: value})


class ScriptedProvider:
    """Replays fixture replies in order, independently per role.

    Fixture shape: {role: [reply, ...]} where each reply is
    {"text": ...} | {"tool_call": {...}} | {"candidates": [...]} and may
    carry "expect_contains": a string that must appear somewhere in the
    request context (a cheap guard against replies drifting out of sync
    with the prompts that consume them).
    """

    def __init__(self, script: dict[str, list[dict[str, Any]]]):
        self._script = {role: list(replies) for role, replies in script.items()}
        self._cursor = {role: 0 for role in script}

    @classmethod
    def from_file(cls, path: str | pathlib.Path) -> "ScriptedProvider":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def complete(self, role: str, context: list[Message]) -> ProviderReply:
        replies = self._script.get(role)
        if replies is None:
            raise ProviderError(f"no scripted replies for role {role!r}")
        index = self._cursor[role]
        if index >= len(replies):
            raise ProviderError(f"scripted replies for role {role!r} exhausted after {index}")
        self._cursor[role] = index + 1
        spec = replies[index]
        expect = spec.get("expect_contains")
        if expect is not None:
            joined = "\n".join(m.get("content", "") for m in context)
            if expect not in joined:
                raise ProviderError(
                    f"scripted reply {index} for role {role!r} expected context "
                    f"containing {expect!r}"
                )
        return _reply_from_spec(spec)


class RecordingProvider:
    """Wraps a provider and keeps every (role, context) it was asked."""

    def __init__(self, inner: Provider):
        self.inner = inner
        self.calls: list[tuple[str, list[Message]]] = []

    def complete(self, role: str, context: list[Message]) -> ProviderReply:
        self.calls.append((role, [dict(m) for m in context]))
        return self.inner.complete(role, context)
