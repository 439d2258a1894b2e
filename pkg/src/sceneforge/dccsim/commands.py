"""The console command language.

    add <kind> <name> [k=v ...]
    set <obj>.<param> <number|string>
    link <obj>.<param> = <expr>
    delete <name>
    query <name>
    snapshot
    render_summary

Parsing is total: every line yields a Command or a CommandDiagnostic with
a 1-based column. apply_command works on a copy of the scene and commits
only on success, so a failed command leaves the scene bit-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Union

from .expr import ExprDiagnostic, format_expression, parse_expression
from .render import format_number, render_summary, snapshot_text
from .scene import Scene, SceneError

_TOKEN_RE = re.compile(r"\S+")
_NUMBER_RE = re.compile(r"-?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\Z")
_TARGET_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")
_PARAM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

VERBS = ("add", "set", "link", "delete", "query", "snapshot", "render_summary")


class CommandDiagnostic(Exception):
    """A console line the grammar rejects; column is 1-based."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


@dataclass(frozen=True)
class Add:
    kind: str
    name: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Set:
    target: str
    value: Any


@dataclass(frozen=True)
class Link:
    target: str
    expr: tuple


@dataclass(frozen=True)
class Delete:
    name: str


@dataclass(frozen=True)
class Query:
    name: str


@dataclass(frozen=True)
class Snapshot:
    pass


@dataclass(frozen=True)
class RenderSummary:
    pass


Command = Union[Add, Set, Link, Delete, Query, Snapshot, RenderSummary]


class _Cursor:
    def __init__(self, line: str):
        self.line = line
        self.pos = 0

    def column(self) -> int:
        return self.pos + 1

    def end_column(self) -> int:
        return len(self.line.rstrip()) + 1

    def next_token(self, what: str) -> tuple[str, int]:
        m = _TOKEN_RE.search(self.line, self.pos)
        if m is None:
            raise CommandDiagnostic(f"expected {what}", self.end_column())
        self.pos = m.end()
        return m.group(0), m.start() + 1

    def rest(self) -> tuple[str, int]:
        m = _TOKEN_RE.search(self.line, self.pos)
        if m is None:
            return "", self.end_column()
        start = m.start()
        return self.line[start:].rstrip(), start + 1

    def expect_end(self) -> None:
        m = _TOKEN_RE.search(self.line, self.pos)
        if m is not None:
            raise CommandDiagnostic(f"unexpected trailing {m.group(0)!r}", m.start() + 1)


def _parse_value(token: str, column: int) -> Any:
    if _NUMBER_RE.match(token):
        return float(token)
    if token.startswith('"'):
        if len(token) < 2 or not token.endswith('"'):
            raise CommandDiagnostic("unterminated string", column)
        return token[1:-1]
    return token


def _parse_target(token: str, column: int) -> str:
    if not _TARGET_RE.match(token) or "." not in token:
        raise CommandDiagnostic(
            f"expected object.param target, got {token!r}", column
        )
    obj, _, param = token.rpartition(".")
    if not obj or not _PARAM_RE.match(param):
        raise CommandDiagnostic(f"bad parameter name in target {token!r}", column)
    return token


def _parse_name(token: str, column: int, what: str) -> str:
    if not _TARGET_RE.match(token):
        raise CommandDiagnostic(f"bad {what} {token!r}", column)
    return token


def parse_command(line: str) -> Command:
    cur = _Cursor(line)
    verb, verb_col = cur.next_token("a command verb")
    if verb not in VERBS:
        raise CommandDiagnostic(
            f"unknown command {verb!r}; expected one of {', '.join(VERBS)}", verb_col
        )
    if verb == "add":
        kind, _ = cur.next_token("an object kind")
        name_tok, name_col = cur.next_token("an object name")
        name = _parse_name(name_tok, name_col, "object name")
        params: dict[str, Any] = {}
        while True:
            m = _TOKEN_RE.search(cur.line, cur.pos)
            if m is None:
                break
            token, col = m.group(0), m.start() + 1
            cur.pos = m.end()
            key, eq, value = token.partition("=")
            if not eq:
                raise CommandDiagnostic(f"expected key=value, got {token!r}", col)
            if not _PARAM_RE.match(key):
                raise CommandDiagnostic(f"bad parameter name {key!r}", col)
            if key in params:
                raise CommandDiagnostic(f"duplicate parameter {key!r}", col)
            params[key] = _parse_value(value, col + len(key) + 1)
        return Add(kind=kind, name=name, params=params)
    if verb == "set":
        target_tok, target_col = cur.next_token("an object.param target")
        target = _parse_target(target_tok, target_col)
        value_tok, value_col = cur.next_token("a value")
        value = _parse_value(value_tok, value_col)
        cur.expect_end()
        return Set(target=target, value=value)
    if verb == "link":
        target_tok, target_col = cur.next_token("an object.param target")
        target = _parse_target(target_tok, target_col)
        eq_tok, eq_col = cur.next_token("'='")
        if eq_tok != "=":
            raise CommandDiagnostic(f"expected '=', got {eq_tok!r}", eq_col)
        expr_text, expr_col = cur.rest()
        try:
            ast = parse_expression(expr_text, column_offset=expr_col)
        except ExprDiagnostic as e:
            raise CommandDiagnostic(e.message, e.column) from e
        return Link(target=target, expr=ast)
    if verb in ("delete", "query"):
        name_tok, name_col = cur.next_token("an object name")
        name = _parse_name(name_tok, name_col, "object name")
        cur.expect_end()
        return Delete(name=name) if verb == "delete" else Query(name=name)
    cur.expect_end()
    return Snapshot() if verb == "snapshot" else RenderSummary()


# -- application -------------------------------------------------------------


def _fmt_value(value: Any) -> str:
    return value if isinstance(value, str) else format_number(value)


def _describe(scene: Scene, name: str) -> str:
    obj = scene.get_object(name)
    t = obj.transform
    parts = [
        f"{obj.name}: kind={obj.kind}",
        f"t=({format_number(t['tx'])},{format_number(t['ty'])},{format_number(t['tz'])})",
        f"r=({format_number(t['rx'])},{format_number(t['ry'])},{format_number(t['rz'])})",
        f"s=({format_number(t['sx'])},{format_number(t['sy'])},{format_number(t['sz'])})",
    ]
    for param in sorted(obj.params):
        parts.append(f"{param}={_fmt_value(obj.params[param])}")
    if obj.emissive is not None:
        parts.append(
            f"emissive={obj.emissive['color']}@{format_number(obj.emissive['strength'])}"
        )
    bound = sorted(
        (target, ast)
        for target, ast in scene.bindings.items()
        if target.rsplit(".", 1)[0] == name
    )
    for target, ast in bound:
        parts.append(f"bound[{target.rsplit('.', 1)[1]} = {format_expression(ast)}]")
    return " ".join(parts)


def apply_command(scene: Scene, cmd: Command) -> tuple[Scene, str]:
    """Apply one parsed command; returns (new scene, one-line result).

    Raises SceneError without touching the input scene. Read-only commands
    return the input scene unchanged.
    """
    if isinstance(cmd, Query):
        return scene, _describe(scene, cmd.name)
    if isinstance(cmd, Snapshot):
        return scene, snapshot_text(scene)
    if isinstance(cmd, RenderSummary):
        return scene, render_summary(scene)

    work = scene.copy()
    if isinstance(cmd, Add):
        obj = work.add_object(cmd.name, cmd.kind)
        for key in sorted(cmd.params):
            obj.set_param(key, cmd.params[key])
        detail = "".join(
            f" {k}={_fmt_value(obj.get_param(k))}" for k in sorted(cmd.params)
        )
        result = f"added {cmd.kind} {cmd.name}{detail}"
    elif isinstance(cmd, Set):
        if cmd.target in work.bindings:
            raise SceneError(
                f"{cmd.target} is bound to an expression; relink or delete it instead"
            )
        obj, param = work.resolve_target(cmd.target)
        obj.set_param(param, cmd.value)
        result = f"set {cmd.target} = {_fmt_value(obj.get_param(param))}"
    elif isinstance(cmd, Link):
        work.set_binding(cmd.target, cmd.expr)
        result = f"linked {cmd.target} = {format_expression(cmd.expr)}"
    elif isinstance(cmd, Delete):
        work.delete_object(cmd.name)
        result = f"deleted {cmd.name}"
    else:
        raise SceneError(f"unhandled command {cmd!r}")
    work.evaluate_graph()
    return work, result


def run_console_line(scene: Scene, line: str) -> tuple[Scene, str]:
    """Parse and apply one console line (the default-console entry point)."""
    cmd = parse_command(line)
    return apply_command(scene, cmd)
