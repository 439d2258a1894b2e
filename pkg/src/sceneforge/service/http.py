"""HTTP adapter over SessionManager.

Bodies are parsed by hand rather than through response models so the
error codes stay exactly the documented ones (400 bad_json instead of
framework-shaped validation errors).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import anyio.to_thread
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .core import ApiError, SessionManager, candidate_body


async def _read_json_object(request: Request) -> dict[str, Any]:
    try:
        body = await request.json()
    except Exception as e:
        raise ApiError(400, "bad_json", "request body must be a JSON object") from e
    if not isinstance(body, dict):
        raise ApiError(400, "bad_json", "request body must be a JSON object")
    return body


def _selection_fields(body: dict[str, Any]) -> tuple[int, list[str], dict[str, str], bool]:
    round_token = body.get("round")
    if not isinstance(round_token, int) or isinstance(round_token, bool):
        raise ApiError(400, "bad_selection", "round must be an integer")
    selected = body.get("selected_ids")
    if not isinstance(selected, list) or not all(isinstance(s, str) for s in selected):
        raise ApiError(400, "bad_selection", "selected_ids must be a list of strings")
    reasons = body.get("rejection_reasons", {})
    if not isinstance(reasons, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in reasons.items()
    ):
        raise ApiError(400, "bad_selection", "rejection_reasons must map ids to strings")
    want_diversity = body.get("want_diversity", False)
    if not isinstance(want_diversity, bool):
        raise ApiError(400, "bad_selection", "want_diversity must be a boolean")
    return round_token, selected, reasons, want_diversity


def create_app(manager: SessionManager, app_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="sceneforge", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.http_status, content=exc.body())

    @app.post("/v1/sessions")
    async def create_session(request: Request) -> JSONResponse:
        body = await _read_json_object(request)
        # Mutations run in worker threads: providers and the DCC client
        # block, and the per-session conflict check must stay reachable
        # while a slow request is in flight.
        session = await anyio.to_thread.run_sync(
            lambda: manager.create_session(body.get("prompt"), body.get("n"))
        )
        return JSONResponse(status_code=201, content=session.body())

    @app.get("/v1/sessions/{session_id}")
    async def get_session(session_id: str) -> JSONResponse:
        return JSONResponse(manager.get(session_id).body())

    @app.get("/v1/sessions/{session_id}/candidates")
    async def get_candidates(session_id: str) -> JSONResponse:
        session = manager.get(session_id)
        return JSONResponse(
            {
                "round": session.loop.round,
                "candidates": [candidate_body(c) for c in session.loop.current],
                "selected_ids": sorted(session.loop.selected_ids),
            }
        )

    @app.get("/v1/sessions/{session_id}/candidates/{candidate_id}/thumbnail")
    async def get_thumbnail(session_id: str, candidate_id: str) -> Response:
        svg = manager.thumbnail(session_id, candidate_id)
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/v1/sessions/{session_id}/selection")
    async def post_selection(session_id: str, request: Request) -> JSONResponse:
        body = await _read_json_object(request)
        round_token, selected, reasons, want_diversity = _selection_fields(body)
        session = await anyio.to_thread.run_sync(
            lambda: manager.submit_selection(
                session_id, round_token, selected, reasons, want_diversity
            )
        )
        return JSONResponse(session.body())

    @app.get("/v1/sessions/{session_id}/scene/{candidate_id}")
    async def get_scene(session_id: str, candidate_id: str) -> Response:
        snapshot = manager.scene_snapshot(session_id, candidate_id)
        return Response(content=snapshot, media_type="application/json")

    @app.get("/v1/sessions/{session_id}/events")
    async def get_events(session_id: str) -> Response:
        session = manager.get(session_id)
        lines = [
            json.dumps(event, sort_keys=True, separators=(",", ":"))
            for event in list(session.events)
        ]
        content = "".join(line + "\n" for line in lines)
        return Response(content=content, media_type="application/x-ndjson")

    if app_dir is not None and Path(app_dir).is_dir():
        app.mount("/app", StaticFiles(directory=str(app_dir), html=True), name="app")

    return app
