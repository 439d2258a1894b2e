"""Operator entry points.

Exit codes are part of the contract: 2 usage (click's default), 3 input
validation, 4 golden mismatch, 5 runtime failure.
"""

from __future__ import annotations

import json
import pathlib
import socket
import sys
import tempfile
import threading

import click

from .agents import ScriptedProvider
from .chatflow import (
    WorkflowParseError,
    WorkflowValidationError,
    load_packaged_template,
    load_workflow_file,
    packaged_template_names,
)
from .dccsim import serve_dcc_mcp
from .mcp import stdio_transport, socket_transport
from .rag import ChunkConfig, RagError, build_index, save_index
from .service import ApiError, SessionManager, create_app, tcp_client_factory

EXIT_VALIDATION = 3
EXIT_GOLDEN = 4
EXIT_RUNTIME = 5

INGEST_SUFFIXES = (".txt", ".md")


def _resolve(ctx: click.Context, path: str) -> pathlib.Path:
    candidate = pathlib.Path(path)
    if candidate.is_absolute():
        return candidate
    return ctx.obj["root"] / candidate


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.option(
    "--root",
    default=".",
    show_default=True,
    help="Base directory for relative paths (hermetic CI runs pin this).",
)
@click.pass_context
def main(ctx, root):
    """Prompt-driven procedural scene generation toolkit."""
    ctx.obj = {"root": pathlib.Path(root)}


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8208, show_default=True)
@click.option("--fixtures", required=True, help="Scripted provider fixture file (JSON).")
@click.option("--journal-dir", default=None, help="Journal directory; replayed on startup.")
@click.option("--app-dir", default=None, help="Static UI build to host under /app.")
@click.option(
    "--mcp-endpoint",
    default=None,
    metavar="HOST:PORT",
    help="External DCC MCP server; default is the embedded simulator.",
)
@click.pass_context
def serve(ctx, host, port, fixtures, journal_dir, app_dir, mcp_endpoint):
    """Run the session service."""
    import uvicorn

    fixture_path = _resolve(ctx, fixtures)
    if not fixture_path.is_file():
        _fail(EXIT_VALIDATION, f"fixture file not found: {fixture_path}")
    kwargs = {}
    if mcp_endpoint is not None:
        try:
            mcp_host, mcp_port = mcp_endpoint.rsplit(":", 1)
            kwargs["make_client"] = tcp_client_factory(mcp_host, int(mcp_port))
        except ValueError:
            _fail(EXIT_VALIDATION, f"bad --mcp-endpoint {mcp_endpoint!r}, want HOST:PORT")
    manager = SessionManager(
        provider_factory=lambda: ScriptedProvider.from_file(fixture_path),
        journal_dir=str(_resolve(ctx, journal_dir)) if journal_dir else None,
        **kwargs,
    )
    if journal_dir:
        restored = manager.replay_journal()
        click.echo(f"journal: restored {restored} sessions")
    app = create_app(manager, app_dir=_resolve(ctx, app_dir) if app_dir else None)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("dcc-sim")
@click.option("--tcp", default=None, metavar="HOST:PORT", help="Listen on TCP instead of stdio.")
def dcc_sim(tcp):
    """Run the DCC simulator as a standalone MCP server."""
    if tcp is None:
        serve_dcc_mcp(stdio_transport())
        return
    try:
        host, port_text = tcp.rsplit(":", 1)
        port = int(port_text)
    except ValueError:
        _fail(EXIT_VALIDATION, f"bad --tcp {tcp!r}, want HOST:PORT")
    listener = socket.create_server((host, port))
    click.echo(f"dcc-sim listening on {host}:{listener.getsockname()[1]}", err=True)
    while True:
        conn, _ = listener.accept()
        threading.Thread(
            target=serve_dcc_mcp, args=(socket_transport(conn),), daemon=True
        ).start()


def iter_documents(paths: list[pathlib.Path], root: pathlib.Path):
    """Yield (doc_id, text) with ids relative to root, in sorted id order."""
    files = []
    for path in paths:
        if path.is_dir():
            files.extend(p for p in path.rglob("*") if p.suffix in INGEST_SUFFIXES)
        else:
            files.append(path)
    def doc_id(p: pathlib.Path) -> str:
        try:
            return p.resolve().relative_to(root.resolve()).as_posix()
        except ValueError:
            return p.name
    for path in sorted(set(files), key=doc_id):
        yield doc_id(path), path.read_text(encoding="utf-8")


@main.command()
@click.argument("paths", nargs=-1, required=True)
@click.option("--parent", default=1200, show_default=True, help="Parent chunk size budget (chars).")
@click.option("--child", default=200, show_default=True, help="Child chunk size budget (chars).")
@click.option("--out", default="rag_index.json", show_default=True, help="Index file to write.")
@click.pass_context
def ingest(ctx, paths, parent, child, out):
    """Chunk and embed text documents into a retrieval index."""
    resolved = [_resolve(ctx, p) for p in paths]
    for path in resolved:
        if not path.exists():
            _fail(EXIT_VALIDATION, f"no such path: {path}")
    try:
        config = ChunkConfig(parent_max_chars=parent, child_max_chars=child)
        index = build_index(iter_documents(resolved, ctx.obj["root"]), config)
    except (RagError, ValueError) as e:
        _fail(EXIT_VALIDATION, str(e))
    out_path = _resolve(ctx, out)
    save_index(index, out_path)
    stats = index.stats()
    click.echo(
        f"ingested {stats.documents} documents: {stats.parents} parents, "
        f"{stats.children} children -> {out_path}"
    )


@main.group()
def workflow():
    """Workflow template tools."""


@workflow.command("validate")
@click.argument("template")
@click.pass_context
def workflow_validate(ctx, template):
    """Load a template (file path or packaged name) and report diagnostics."""
    path = _resolve(ctx, template)
    if not path.exists() and path.suffix != ".json":
        path = path.with_suffix(".json")
    try:
        if path.exists():
            wf = load_workflow_file(path)
        elif template in packaged_template_names():
            wf = load_packaged_template(template)
        else:
            _fail(EXIT_VALIDATION, f"no template file or packaged name {template!r}")
    except (WorkflowParseError, WorkflowValidationError) as e:
        click.echo(f"diagnostic: {e}")
        sys.exit(EXIT_VALIDATION)
    stages = wf.initial_state().stages
    click.echo(f"ok: {template} ({len(wf.nodes)} nodes, stages: {', '.join(stages)})")


def _load_scenario(scenario_dir: pathlib.Path) -> tuple[dict, pathlib.Path]:
    script_path = scenario_dir / "scenario.json"
    provider_path = scenario_dir / "provider.json"
    for required in (script_path, provider_path):
        if not required.is_file():
            _fail(EXIT_VALIDATION, f"scenario is missing {required.name}: {required}")
    try:
        script = json.loads(script_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        _fail(EXIT_VALIDATION, f"scenario.json is not valid JSON: {e}")
    if not isinstance(script.get("prompt"), str) or not isinstance(script.get("n"), int):
        _fail(EXIT_VALIDATION, "scenario.json needs a prompt string and candidate count n")
    if not isinstance(script.get("selections"), list):
        _fail(EXIT_VALIDATION, "scenario.json needs a selections list")
    return script, provider_path


def _write_artifacts(session, artifact_dir: pathlib.Path) -> None:
    artifact_dir.mkdir(parents=True, exist_ok=True)
    events = "".join(
        json.dumps(e, sort_keys=True, separators=(",", ":")) + "\n" for e in session.events
    )
    (artifact_dir / "events.jsonl").write_text(events, encoding="utf-8")
    reports = session.body()["reports"]
    (artifact_dir / "report.json").write_text(
        json.dumps(reports, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if session.result is not None:
        for candidate_id, snapshot in session.result.snapshots().items():
            (artifact_dir / f"scene_{candidate_id}.json").write_text(
                snapshot, encoding="utf-8"
            )


@main.command()
@click.argument("scenario")
@click.option("--artifacts", default=None, help="Artifact directory (default: a fresh temp dir).")
@click.option("--update-goldens", is_flag=True, help="Copy this run's artifacts into golden/.")
@click.pass_context
def replay(ctx, scenario, artifacts, update_goldens):
    """Run a scripted session end-to-end and compare against its goldens."""
    scenario_dir = _resolve(ctx, scenario)
    if not scenario_dir.is_dir():
        _fail(EXIT_VALIDATION, f"no such scenario directory: {scenario_dir}")
    script, provider_path = _load_scenario(scenario_dir)
    artifact_dir = (
        _resolve(ctx, artifacts)
        if artifacts
        else pathlib.Path(tempfile.mkdtemp(prefix="replay-"))
    )

    manager = SessionManager(provider_factory=lambda: ScriptedProvider.from_file(provider_path))
    try:
        session = manager.create_session(script["prompt"], script["n"])
        for selection in script["selections"]:
            manager.submit_selection(
                session.id,
                session.loop.round,
                selection.get("selected_ids", []),
                selection.get("rejection_reasons", {}),
                selection.get("want_diversity", False),
            )
    except ApiError as e:
        _fail(EXIT_RUNTIME, f"replay failed: {e}")
    _write_artifacts(session, artifact_dir)
    click.echo(f"artifacts: {artifact_dir}")

    golden_dir = scenario_dir / "golden"
    if update_goldens:
        golden_dir.mkdir(exist_ok=True)
        for artifact in sorted(artifact_dir.iterdir()):
            (golden_dir / artifact.name).write_bytes(artifact.read_bytes())
        click.echo(f"goldens updated: {golden_dir}")
        return
    if not golden_dir.is_dir():
        _fail(EXIT_VALIDATION, f"scenario has no golden directory: {golden_dir}")
    mismatches = []
    for golden in sorted(golden_dir.iterdir()):
        produced = artifact_dir / golden.name
        if not produced.is_file():
            mismatches.append(f"{golden.name}: not produced")
        elif produced.read_bytes() != golden.read_bytes():
            mismatches.append(f"{golden.name}: differs")
    for line in mismatches:
        click.echo(f"mismatch: {line}", err=True)
    if mismatches:
        sys.exit(EXIT_GOLDEN)
    click.echo(f"replay ok: {len(list(golden_dir.iterdir()))} goldens matched")


if __name__ == "__main__":
    main()
