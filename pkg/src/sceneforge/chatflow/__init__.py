"""Multi-turn workflow engine with persistent conversation variables."""

from .interpreter import (
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    ServiceBundle,
    TurnError,
    TurnResult,
    run_turn,
)
from .state import (
    ChatflowError,
    ConversationState,
    SessionComplete,
    StateError,
    UnknownStageError,
    decrement_inspection,
    reset_inspection,
    set_stage,
    to_next_stage,
)
from .workflow import (
    Node,
    Workflow,
    WorkflowParseError,
    WorkflowValidationError,
    case_label,
    load_packaged_template,
    load_workflow,
    load_workflow_file,
    packaged_template_names,
)

__all__ = [
    "BudgetExceeded",
    "ChatflowError",
    "ConversationState",
    "DEFAULT_NODE_BUDGET",
    "Node",
    "ServiceBundle",
    "SessionComplete",
    "StateError",
    "TurnError",
    "TurnResult",
    "UnknownStageError",
    "Workflow",
    "WorkflowParseError",
    "WorkflowValidationError",
    "case_label",
    "decrement_inspection",
    "load_packaged_template",
    "load_workflow",
    "load_workflow_file",
    "packaged_template_names",
    "reset_inspection",
    "run_turn",
    "set_stage",
    "to_next_stage",
]
