"""Wire message model: one JSON-RPC 2.0 message per UTF-8 line.

Encoding is canonical (sorted keys, no whitespace) so identical messages
are identical bytes, which golden-transcript tests rely on. Decoding is
total: any byte line yields either a message dict or an RpcError with a
parse/invalid-request code, never an unhandled exception.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import INVALID_REQUEST, PARSE_ERROR, RpcError

PROTOCOL_VERSION = "1.0"

_ID_TYPES = (str, int)


def message_kind(msg: dict[str, Any]) -> str:
    """Classify a validated message: request, notification, response,
    or error-response."""
    if "method" in msg:
        return "request" if "id" in msg else "notification"
    return "error-response" if "error" in msg else "response"


def validate_message(msg: Any) -> dict[str, Any]:
    """Check JSON-RPC 2.0 shape; returns the message or raises RpcError."""
    if not isinstance(msg, dict):
        raise RpcError(INVALID_REQUEST, "message must be a JSON object")
    if msg.get("jsonrpc") != "2.0":
        raise RpcError(INVALID_REQUEST, 'message must carry "jsonrpc": "2.0"')
    if "method" in msg:
        if not isinstance(msg["method"], str) or not msg["method"]:
            raise RpcError(INVALID_REQUEST, "method must be a non-empty string")
        if "id" in msg and not (isinstance(msg["id"], _ID_TYPES) and not isinstance(msg["id"], bool)):
            raise RpcError(INVALID_REQUEST, "request id must be a string or integer")
        if "params" in msg and not isinstance(msg["params"], dict):
            raise RpcError(INVALID_REQUEST, "params must be an object")
        if "result" in msg or "error" in msg:
            raise RpcError(INVALID_REQUEST, "a request cannot carry result or error")
        return msg
    if "result" in msg or "error" in msg:
        if "id" not in msg:
            raise RpcError(INVALID_REQUEST, "a response must carry an id")
        if ("result" in msg) == ("error" in msg):
            raise RpcError(INVALID_REQUEST, "a response carries exactly one of result/error")
        if msg["id"] is not None and not (
            isinstance(msg["id"], _ID_TYPES) and not isinstance(msg["id"], bool)
        ):
            raise RpcError(INVALID_REQUEST, "response id must be a string, integer, or null")
        if "error" in msg:
            err = msg["error"]
            if (
                not isinstance(err, dict)
                or not isinstance(err.get("code"), int)
                or isinstance(err.get("code"), bool)
                or not isinstance(err.get("message"), str)
            ):
                raise RpcError(INVALID_REQUEST, "error must carry integer code and string message")
        return msg
    raise RpcError(INVALID_REQUEST, "message carries neither method nor result/error")


def encode_message(msg: dict[str, Any]) -> bytes:
    """Serialize a validated message as one canonical JSON line."""
    validate_message(msg)
    return json.dumps(msg, sort_keys=True, separators=(",", ":")).encode("utf-8") + b"\n"


def decode_message(line: bytes | str) -> dict[str, Any]:
    """Parse one wire line into a validated message dict."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as e:
            raise RpcError(PARSE_ERROR, f"line is not valid UTF-8: {e}") from e
    try:
        msg = json.loads(line)
    except json.JSONDecodeError as e:
        raise RpcError(PARSE_ERROR, f"line is not valid JSON: {e.msg}") from e
    return validate_message(msg)


def request(req_id: int | str, method: str, params: dict[str, Any] | None = None) -> dict[str, Any]:
    msg: dict[str, Any] = {"jsonrpc": "2.0", "id": req_id, "method": method}
    if params is not None:
        msg["params"] = params
    return msg


def notification(method: str, params: dict[str, Any] | None = None) -> dict[str, Any]:
    msg: dict[str, Any] = {"jsonrpc": "2.0", "method": method}
    if params is not None:
        msg["params"] = params
    return msg


def response(req_id: int | str | None, result: Any) -> dict[str, Any]:
    return {"jsonrpc": "2.0", "id": req_id, "result": result}


def error_response(req_id: int | str | None, error: RpcError) -> dict[str, Any]:
    return {"jsonrpc": "2.0", "id": req_id, "error": error.to_error_object()}
