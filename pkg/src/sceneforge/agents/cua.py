"""Screen-driving seam. The shipped backend only reports "unsupported";
the interface exists so a real computer-use agent can be attached."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class UiAction:
    kind: str  # "click" | "type" | "key" | "unsupported"
    detail: str = ""


class ScreenAgent:
    def act(self, screenshot: bytes, goal: str) -> UiAction:
        raise NotImplementedError


class UnsupportedScreenAgent(ScreenAgent):
    def act(self, screenshot: bytes, goal: str) -> UiAction:
        return UiAction(kind="unsupported", detail=f"no screen backend for goal: {goal}")
