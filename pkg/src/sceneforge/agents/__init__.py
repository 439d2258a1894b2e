"""Agent roles: candidate generation, planning, and plan execution."""

from .cua import ScreenAgent, UiAction, UnsupportedScreenAgent
from .manager import ExecutionReport, StepReport, manage_execute
from .planner import (
    CheckSpec,
    PlanError,
    PlanStep,
    ProceduralSpec,
    RetryBudget,
    compute_retry_budget,
    extract_scopes,
    plan_from_selection,
)
from .providers import (
    Message,
    Provider,
    ProviderError,
    ProviderProtocolError,
    ProviderReply,
    RecordingProvider,
    ScriptedProvider,
)
from .visualizer import (
    DIVERSITY_HINT,
    Candidate,
    CandidateSet,
    PriorRound,
    build_candidate,
    candidate_thumbnail,
    preview_scene,
    visualize_candidates,
)

__all__ = [
    "Candidate",
    "CandidateSet",
    "CheckSpec",
    "DIVERSITY_HINT",
    "ExecutionReport",
    "Message",
    "PlanError",
    "PlanStep",
    "PriorRound",
    "ProceduralSpec",
    "Provider",
    "ProviderError",
    "ProviderProtocolError",
    "ProviderReply",
    "RecordingProvider",
    "RetryBudget",
    "ScreenAgent",
    "ScriptedProvider",
    "StepReport",
    "UiAction",
    "UnsupportedScreenAgent",
    "build_candidate",
    "candidate_thumbnail",
    "compute_retry_budget",
    "extract_scopes",
    "manage_execute",
    "plan_from_selection",
    "preview_scene",
    "visualize_candidates",
]
