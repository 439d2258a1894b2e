"""Conversation state: the only data that survives a chatflow turn.

The state carries the multi-agent dispatch variables (stage, dirty_bit,
enable_increment, stage_num, stages), the inspection-loop budget pair
(max/remaining_inspection_count), and arbitrary user variables. All
operations are value-style: they return a new state and never mutate
their argument.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any

# Conversation variables may hold strings, numbers, or lists of strings.
Scalar = str | int | float
VarValue = Scalar | list[str]

BUILTIN_VARS = (
    "stage",
    "dirty_bit",
    "enable_increment",
    "stage_num",
    "stages",
    "max_inspection_count",
    "remaining_inspection_count",
)


class ChatflowError(Exception):
    """Base class for chatflow engine errors."""


class StateError(ChatflowError):
    """A ConversationState invariant does not hold."""


class UnknownStageError(ChatflowError):
    """set_stage was asked for a stage name not in the stage list."""

    def __init__(self, stage_name: str, stages: list[str]):
        super().__init__(
            f"unknown stage {stage_name!r}; valid stages: {', '.join(stages)}"
        )
        self.stage_name = stage_name
        self.stages = list(stages)


class SessionComplete(ChatflowError):
    """Auto-increment ran past the final stage; the session should finalize."""

    def __init__(self, stage: str):
        super().__init__(f"session complete: no stage after {stage!r}")
        self.stage = stage


def _check_flag(name: str, value: Any) -> int:
    if value not in (0, 1):
        raise StateError(f"{name} must be 0 or 1, got {value!r}")
    return int(value)


def check_var_value(name: str, value: Any) -> VarValue:
    """Validate a conversation-variable value against the allowed types."""
    if isinstance(value, bool):
        raise StateError(f"variable {name!r}: booleans are not conversation values")
    if isinstance(value, (str, int, float)):
        return value
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return list(value)
    raise StateError(
        f"variable {name!r} must be a string, number, or list of strings, "
        f"got {value!r}"
    )


@dataclass(frozen=True)
class ConversationState:
    stage: str
    dirty_bit: int = 0
    enable_increment: int = 1
    stage_num: int = 0
    stages: tuple[str, ...] = ()
    max_inspection_count: int = 0
    remaining_inspection_count: int = 0
    user_vars: dict[str, VarValue] = field(default_factory=dict)

    def validate(self) -> "ConversationState":
        """Raise StateError unless every invariant holds; returns self."""
        if not self.stages:
            raise StateError("stages must be a non-empty list of stage names")
        if not all(isinstance(s, str) and s for s in self.stages):
            raise StateError("stages must contain non-empty strings")
        if not 0 <= self.stage_num < len(self.stages):
            raise StateError(
                f"stage_num {self.stage_num} out of range for {len(self.stages)} stages"
            )
        if self.stage != self.stages[self.stage_num]:
            raise StateError(
                f"stage {self.stage!r} != stages[{self.stage_num}] "
                f"({self.stages[self.stage_num]!r})"
            )
        _check_flag("dirty_bit", self.dirty_bit)
        _check_flag("enable_increment", self.enable_increment)
        if self.max_inspection_count < 0:
            raise StateError("max_inspection_count must be >= 0")
        if not 0 <= self.remaining_inspection_count <= self.max_inspection_count:
            raise StateError(
                f"remaining_inspection_count {self.remaining_inspection_count} "
                f"outside [0, {self.max_inspection_count}]"
            )
        for name, value in self.user_vars.items():
            check_var_value(name, value)
        return self

    # -- variable access -------------------------------------------------

    def get_var(self, name: str) -> VarValue:
        if name in BUILTIN_VARS:
            value = getattr(self, name)
        elif name in self.user_vars:
            value = self.user_vars[name]
        else:
            raise KeyError(name)
        return list(value) if isinstance(value, (list, tuple)) else value

    def has_var(self, name: str) -> bool:
        return name in BUILTIN_VARS or name in self.user_vars

    def with_var(self, name: str, value: Any) -> "ConversationState":
        """Return a copy with one conversation variable written."""
        if name in BUILTIN_VARS:
            if name == "stages":
                if not (isinstance(value, list) and all(isinstance(v, str) for v in value)):
                    raise StateError("stages must be a list of strings")
                return dataclasses.replace(self, stages=tuple(value))
            if name == "stage":
                if not isinstance(value, str):
                    raise StateError("stage must be a string")
                return dataclasses.replace(self, stage=value)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise StateError(f"{name} must be a number, got {value!r}")
            if name in ("dirty_bit", "enable_increment"):
                value = _check_flag(name, value)
            return dataclasses.replace(self, **{name: int(value)})
        return dataclasses.replace(
            self, user_vars={**self.user_vars, name: check_var_value(name, value)}
        )

    def var_names(self) -> list[str]:
        return list(BUILTIN_VARS) + sorted(self.user_vars)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {name: self.get_var(name) for name in BUILTIN_VARS}
        d["user_vars"] = dict(self.user_vars)
        return d

    @classmethod
    def from_vars(cls, variables: dict[str, Any]) -> "ConversationState":
        """Build a state from a flat conversation_variables mapping.

        Known names map onto builtin fields, everything else lands in
        user_vars. `stage` defaults to stages[stage_num] when omitted.
        """
        vars_ = dict(variables)
        stages = vars_.pop("stages", None)
        if stages is None:
            raise StateError("conversation_variables must define 'stages'")
        stage_num = int(vars_.pop("stage_num", 0))
        stage = vars_.pop("stage", None)
        if stage is None and 0 <= stage_num < len(stages):
            stage = stages[stage_num]
        state = cls(
            stage=stage if stage is not None else "",
            dirty_bit=int(vars_.pop("dirty_bit", 0)),
            enable_increment=int(vars_.pop("enable_increment", 1)),
            stage_num=stage_num,
            stages=tuple(stages),
            max_inspection_count=int(vars_.pop("max_inspection_count", 0)),
            remaining_inspection_count=int(vars_.pop("remaining_inspection_count", 0)),
            user_vars={k: check_var_value(k, v) for k, v in vars_.items()},
        )
        return state.validate()


# -- stage machine operations ----------------------------------------------


def to_next_stage(state: ConversationState) -> ConversationState:
    """Advance to the next stage when allowed; always consume dirty_bit.

    The increment happens only when dirty_bit == 0 and enable_increment == 1.
    Raises SessionComplete when the increment would run past the last stage.
    """
    state.validate()
    if state.dirty_bit == 0 and state.enable_increment == 1:
        nxt = state.stage_num + 1
        if nxt >= len(state.stages):
            raise SessionComplete(state.stage)
        return dataclasses.replace(
            state, stage_num=nxt, stage=state.stages[nxt], dirty_bit=0
        )
    return dataclasses.replace(state, dirty_bit=0)


def set_stage(state: ConversationState, stage_name: str) -> ConversationState:
    """Jump to a named stage and mark the choice explicit (dirty_bit = 1)."""
    state.validate()
    if stage_name not in state.stages:
        raise UnknownStageError(stage_name, list(state.stages))
    idx = state.stages.index(stage_name)
    return dataclasses.replace(state, stage_num=idx, stage=stage_name, dirty_bit=1)


def decrement_inspection(state: ConversationState) -> tuple[ConversationState, bool]:
    """Spend one inspection attempt.

    Returns (new_state, at_budget); at_budget is True when the remaining
    count is 0 afterwards, which tells the caller to exit the
    Builder-Inspector loop. Decrementing at 0 is a no-op that still
    reports at_budget.
    """
    state.validate()
    remaining = state.remaining_inspection_count
    if remaining > 0:
        remaining -= 1
    new = dataclasses.replace(state, remaining_inspection_count=remaining)
    return new, remaining == 0


def reset_inspection(state: ConversationState) -> ConversationState:
    """Refill the inspection budget to its maximum."""
    state.validate()
    return dataclasses.replace(
        state, remaining_inspection_count=state.max_inspection_count
    )
