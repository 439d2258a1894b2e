"""The simulator's tool server: console, snapshot, summary, shortcuts."""

from __future__ import annotations

from ..mcp import McpServer, ToolRegistry
from ..mcp.transport import LineTransport
from .commands import CommandDiagnostic, run_console_line
from .render import render_summary, snapshot_text
from .scene import Scene, SceneError

SERVER_NAME = "3Dify-MCP-Server"
SERVER_VERSION = "0.1"

SHORTCUT_KEYS = {
    "delete": "X",
    "duplicate": "Shift+D",
    "grab": "G",
    "rotate": "R",
    "scale": "S",
    "search": "F3",
    "snap_toggle": "Shift+Tab",
    "undo": "Ctrl+Z",
}

CONSOLE_TOOL = "run_cmd_on_default_console"


class SceneBox:
    """Mutable holder so tool handlers can swap in the post-command scene."""

    def __init__(self, scene: Scene | None = None):
        self.scene = scene if scene is not None else Scene()


def build_dcc_registry(box: SceneBox) -> ToolRegistry:
    registry = ToolRegistry()

    def console(args):
        try:
            box.scene, result = run_console_line(box.scene, args["cmd"])
        except (CommandDiagnostic, SceneError) as e:
            raise ValueError(str(e)) from e
        return result

    registry.register_tool(
        CONSOLE_TOOL,
        "Execute command on DCC's default console",
        {"cmd": {"type": "string", "description": "one console command line", "required": True}},
        console,
    )
    registry.register_tool(
        "get_scene_snapshot",
        "Get the canonical scene snapshot document",
        {},
        lambda args: snapshot_text(box.scene),
    )
    registry.register_tool(
        "render_summary",
        "Render a text summary of the scene's objects",
        {},
        lambda args: render_summary(box.scene),
    )
    registry.register_resource(
        "shortcut://keys",
        "Get activated shortcut key list",
        lambda: dict(SHORTCUT_KEYS),
    )
    return registry


def make_dcc_server(scene: Scene | None = None) -> tuple[McpServer, SceneBox]:
    box = SceneBox(scene)
    return McpServer(SERVER_NAME, SERVER_VERSION, build_dcc_registry(box)), box


def serve_dcc_mcp(transport: LineTransport, scene: Scene | None = None) -> None:
    """Serve one connection with its own fresh scene until EOF."""
    server, _ = make_dcc_server(scene)
    server.serve(transport)
