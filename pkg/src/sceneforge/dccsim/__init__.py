"""Headless DCC stand-in: scene graph, console DSL, snapshots, tool server."""

from .commands import (
    Add,
    Command,
    CommandDiagnostic,
    Delete,
    Link,
    Query,
    RenderSummary,
    Set,
    Snapshot,
    apply_command,
    parse_command,
    run_console_line,
)
from .expr import (
    EvalError,
    ExprDiagnostic,
    evaluate,
    expr_refs,
    format_expression,
    parse_expression,
)
from .render import (
    SNAPSHOT_SCHEMA,
    canon_number,
    format_number,
    render_summary,
    render_thumbnail,
    snapshot,
    snapshot_text,
)
from .scene import OBJECT_KINDS, Scene, SceneError, SceneObject
from .server import (
    CONSOLE_TOOL,
    SERVER_NAME,
    SERVER_VERSION,
    SHORTCUT_KEYS,
    SceneBox,
    build_dcc_registry,
    make_dcc_server,
    serve_dcc_mcp,
)

__all__ = [
    "CONSOLE_TOOL",
    "OBJECT_KINDS",
    "SERVER_NAME",
    "SERVER_VERSION",
    "SHORTCUT_KEYS",
    "SNAPSHOT_SCHEMA",
    "Add",
    "Command",
    "CommandDiagnostic",
    "Delete",
    "EvalError",
    "ExprDiagnostic",
    "Link",
    "Query",
    "RenderSummary",
    "Scene",
    "SceneBox",
    "SceneError",
    "SceneObject",
    "Set",
    "Snapshot",
    "apply_command",
    "build_dcc_registry",
    "canon_number",
    "evaluate",
    "expr_refs",
    "format_expression",
    "format_number",
    "make_dcc_server",
    "parse_command",
    "parse_expression",
    "render_summary",
    "render_thumbnail",
    "serve_dcc_mcp",
    "snapshot",
    "snapshot_text",
    "run_console_line",
]
