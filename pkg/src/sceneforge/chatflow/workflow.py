"""Workflow graph model, loading, and load-time validation.

A workflow document is JSON with top-level keys `nodes`, `edges`, `start`,
and `conversation_variables`. Nodes are typed; every branch case needs an
edge plus a default, every non-answer node needs exactly one outgoing
edge, and every node must be able to reach an answer node. Cycles are
legal (the interpreter's per-turn visit budget guards against runaways).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .state import BUILTIN_VARS, ChatflowError, ConversationState, check_var_value

NODE_KINDS = (
    "start",
    "answer",
    "assigner",
    "function",
    "branch",
    "retrieval",
    "agent_call",
    "tool_call",
)

# Spec-style capitalized aliases accepted in documents.
_KIND_ALIASES = {
    "start": "start",
    "answer": "answer",
    "assigner": "assigner",
    "function": "function",
    "branch": "branch",
    "retrieval": "retrieval",
    "agentcall": "agent_call",
    "agent_call": "agent_call",
    "toolcall": "tool_call",
    "tool_call": "tool_call",
}

FUNCTION_NAMES = (
    "to_next_stage",
    "set_stage",
    "decrement_inspection",
    "reset_inspection",
)

# Edge labels: linear nodes use OUT, branches use case indices or DEFAULT.
OUT = "out"
DEFAULT = "default"


class WorkflowParseError(ChatflowError):
    """The document is not valid JSON or not an object."""


class WorkflowValidationError(ChatflowError):
    """The document violates a workflow invariant; names the offender."""


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    config: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Workflow:
    nodes: dict[str, Node]
    edges: dict[tuple[str, str], str]
    start_node: str
    initial_vars: dict[str, Any]

    def initial_state(self) -> ConversationState:
        return ConversationState.from_vars(self.initial_vars)

    def out_edge(self, node_id: str, label: str = OUT) -> str:
        return self.edges[(node_id, label)]


def _is_source(value: Any) -> bool:
    """A value source is {"ref": "name[.path]"} or {"value": scalar}."""
    if not isinstance(value, dict) or len(value) != 1:
        return False
    if "ref" in value:
        return isinstance(value["ref"], str) and bool(value["ref"])
    if "value" in value:
        v = value["value"]
        return isinstance(v, (str, int, float, bool)) or (
            isinstance(v, list) and all(isinstance(x, str) for x in v)
        )
    return False


def _err(node: Node | str, msg: str) -> WorkflowValidationError:
    nid = node if isinstance(node, str) else node.id
    return WorkflowValidationError(f"node {nid!r}: {msg}")


def _require_source(node: Node, key: str) -> None:
    if key not in node.config or not _is_source(node.config[key]):
        raise _err(node, f"config.{key} must be a {{ref}} or {{value}} source")


def _validate_node_config(node: Node, known_vars: set[str]) -> None:
    cfg = node.config
    if node.kind == "start":
        out = cfg.get("out", "input")
        if not isinstance(out, str) or not out:
            raise _err(node, "config.out must be a non-empty string")
    elif node.kind == "answer":
        if not isinstance(cfg.get("template"), str):
            raise _err(node, "config.template must be a string")
    elif node.kind == "assigner":
        assign = cfg.get("assign")
        if not isinstance(assign, list) or not assign:
            raise _err(node, "config.assign must be a non-empty list")
        for i, item in enumerate(assign):
            if not isinstance(item, dict) or not isinstance(item.get("var"), str):
                raise _err(node, f"assign[{i}] must name a conversation variable")
            if item["var"] not in known_vars:
                raise _err(
                    node,
                    f"assign[{i}] targets undeclared conversation variable "
                    f"{item['var']!r}",
                )
            if not _is_source(item.get("from")):
                raise _err(node, f"assign[{i}].from must be a source")
    elif node.kind == "function":
        fn = cfg.get("fn")
        if fn not in FUNCTION_NAMES:
            raise _err(node, f"config.fn must be one of {FUNCTION_NAMES}, got {fn!r}")
        if not isinstance(cfg.get("out"), str) or not cfg["out"]:
            raise _err(node, "config.out must be a non-empty string")
        args = cfg.get("args", {})
        if not isinstance(args, dict) or not all(_is_source(v) for v in args.values()):
            raise _err(node, "config.args values must be sources")
        if fn == "set_stage" and "stage" not in args:
            raise _err(node, "set_stage needs an args.stage source")
    elif node.kind == "branch":
        _require_source(node, "on")
        cases = cfg.get("cases")
        if not isinstance(cases, list) or not cases:
            raise _err(node, "config.cases must be a non-empty list")
        for c in cases:
            if not isinstance(c, (str, int, float, bool)):
                raise _err(node, f"case value {c!r} must be a scalar")
        if len(set(map(repr, cases))) != len(cases):
            raise _err(node, "duplicate case values")
        if not isinstance(cfg.get("strict", False), bool):
            raise _err(node, "config.strict must be a boolean")
    elif node.kind == "retrieval":
        _require_source(node, "query")
        k = cfg.get("k", 3)
        if not isinstance(k, int) or k < 1:
            raise _err(node, "config.k must be a positive integer")
        if not isinstance(cfg.get("out"), str) or not cfg["out"]:
            raise _err(node, "config.out must be a non-empty string")
    elif node.kind == "agent_call":
        if not isinstance(cfg.get("role"), str) or not cfg["role"]:
            raise _err(node, "config.role must be a non-empty string")
        _require_source(node, "prompt")
        if not isinstance(cfg.get("out"), str) or not cfg["out"]:
            raise _err(node, "config.out must be a non-empty string")
    elif node.kind == "tool_call":
        if not isinstance(cfg.get("tool"), str) or not cfg["tool"]:
            raise _err(node, "config.tool must be a non-empty string")
        args = cfg.get("args", {})
        if not isinstance(args, dict) or not all(_is_source(v) for v in args.values()):
            raise _err(node, "config.args values must be sources")
        if not isinstance(cfg.get("out"), str) or not cfg["out"]:
            raise _err(node, "config.out must be a non-empty string")


def case_label(node: Node, value: Any) -> str | None:
    """Label for the branch case equal to `value`, or None if unmatched."""
    for i, c in enumerate(node.config["cases"]):
        if type(c) is type(value) or {type(c), type(value)} <= {int, float}:
            if c == value:
                return f"case{i}"
    return None


def load_workflow(definition: dict | str | bytes) -> Workflow:
    """Parse and validate a workflow document.

    Accepts a parsed dict or raw JSON text. Raises WorkflowParseError for
    malformed documents and WorkflowValidationError (naming the offending
    node or edge) for invariant violations.
    """
    if isinstance(definition, (str, bytes)):
        try:
            definition = json.loads(definition)
        except json.JSONDecodeError as e:
            raise WorkflowParseError(f"workflow document is not valid JSON: {e}") from e
    if not isinstance(definition, dict):
        raise WorkflowParseError("workflow document must be a JSON object")

    for key in ("nodes", "edges", "start", "conversation_variables"):
        if key not in definition:
            raise WorkflowParseError(f"workflow document missing top-level {key!r}")

    initial_vars = definition["conversation_variables"]
    if not isinstance(initial_vars, dict):
        raise WorkflowParseError("conversation_variables must be an object")
    for name, value in initial_vars.items():
        if name == "stages":
            continue
        check_var_value(name, value)
    known_vars = set(BUILTIN_VARS) | set(initial_vars)

    # Nodes.
    nodes: dict[str, Node] = {}
    start_ids = []
    for i, raw in enumerate(definition["nodes"]):
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str) or not raw["id"]:
            raise WorkflowValidationError(f"nodes[{i}] must have a string id")
        nid = raw["id"]
        if nid in nodes:
            raise WorkflowValidationError(f"duplicate node id {nid!r}")
        kind = _KIND_ALIASES.get(str(raw.get("kind", "")).lower())
        if kind is None:
            raise WorkflowValidationError(
                f"node {nid!r}: unknown kind {raw.get('kind')!r}"
            )
        cfg = raw.get("config", {})
        if not isinstance(cfg, dict):
            raise WorkflowValidationError(f"node {nid!r}: config must be an object")
        node = Node(id=nid, kind=kind, config=cfg)
        _validate_node_config(node, known_vars)
        nodes[nid] = node
        if kind == "start":
            start_ids.append(nid)

    if len(start_ids) != 1:
        raise WorkflowValidationError(
            f"workflow must have exactly one start node, found {len(start_ids)}"
        )
    start = definition["start"]
    if start != start_ids[0]:
        raise WorkflowValidationError(
            f"top-level start {start!r} does not name the start node {start_ids[0]!r}"
        )

    # Edges.
    edges: dict[tuple[str, str], str] = {}
    for i, raw in enumerate(definition["edges"]):
        if not isinstance(raw, dict):
            raise WorkflowValidationError(f"edges[{i}] must be an object")
        src, dst = raw.get("from"), raw.get("to")
        if src not in nodes:
            raise WorkflowValidationError(f"edges[{i}]: unknown source node {src!r}")
        if dst not in nodes:
            raise WorkflowValidationError(f"edges[{i}]: unknown target node {dst!r}")
        src_node = nodes[src]
        if src_node.kind == "answer":
            raise WorkflowValidationError(
                f"edges[{i}]: answer node {src!r} cannot have outgoing edges"
            )
        if src_node.kind == "branch":
            if "case" in raw and raw["case"] is not None:
                label = case_label(src_node, raw["case"])
                if label is None:
                    raise WorkflowValidationError(
                        f"edges[{i}]: case {raw['case']!r} is not declared on "
                        f"branch {src!r}"
                    )
            else:
                label = DEFAULT
        else:
            if raw.get("case") is not None:
                raise WorkflowValidationError(
                    f"edges[{i}]: non-branch node {src!r} cannot have case edges"
                )
            label = OUT
        if (src, label) in edges:
            raise WorkflowValidationError(
                f"edges[{i}]: duplicate edge {label!r} from node {src!r}"
            )
        edges[(src, label)] = dst

    # Every node carries its required out-edges.
    for node in nodes.values():
        if node.kind == "answer":
            continue
        if node.kind == "branch":
            for i in range(len(node.config["cases"])):
                if (node.id, f"case{i}") not in edges:
                    raise WorkflowValidationError(
                        f"branch {node.id!r}: case {node.config['cases'][i]!r} "
                        "has no edge"
                    )
            if (node.id, DEFAULT) not in edges:
                raise WorkflowValidationError(
                    f"branch {node.id!r}: missing default edge"
                )
        elif (node.id, OUT) not in edges:
            raise WorkflowValidationError(f"node {node.id!r}: missing outgoing edge")

    # Reachability from start, and answer-reachability from every node.
    succ: dict[str, set[str]] = {nid: set() for nid in nodes}
    for (src, _), dst in edges.items():
        succ[src].add(dst)
    seen = {start}
    frontier = [start]
    while frontier:
        for nxt in succ[frontier.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    unreachable = sorted(set(nodes) - seen)
    if unreachable:
        raise WorkflowValidationError(
            f"nodes unreachable from start: {', '.join(unreachable)}"
        )
    can_finish = {nid for nid, n in nodes.items() if n.kind == "answer"}
    if not can_finish:
        raise WorkflowValidationError("workflow has no answer node")
    changed = True
    while changed:
        changed = False
        for nid in nodes:
            if nid not in can_finish and succ[nid] & can_finish:
                can_finish.add(nid)
                changed = True
    stuck = sorted(set(nodes) - can_finish)
    if stuck:
        raise WorkflowValidationError(
            f"nodes cannot reach an answer node: {', '.join(stuck)}"
        )

    wf = Workflow(nodes=nodes, edges=edges, start_node=start, initial_vars=dict(initial_vars))
    wf.initial_state()  # conversation variables must form a valid state
    return wf


def load_workflow_file(path: str | Path) -> Workflow:
    return load_workflow(Path(path).read_text(encoding="utf-8"))


def packaged_template_names() -> list[str]:
    root = resources.files(__package__) / "templates"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_packaged_template(name: str) -> Workflow:
    """Load one of the shipped workflow templates by bare name."""
    root = resources.files(__package__) / "templates"
    candidate = root / f"{name}.json"
    try:
        text = candidate.read_text(encoding="utf-8")
    except (FileNotFoundError, NotADirectoryError):
        raise WorkflowParseError(
            f"no packaged template {name!r}; available: "
            f"{', '.join(packaged_template_names())}"
        ) from None
    return load_workflow(text)
