"""Protocol error codes and the exception that carries them.

Standard JSON-RPC 2.0 codes plus application codes in the reserved
-32000..-32099 range. The symbolic names are part of the documented
protocol surface; keep them in sync with docs/protocol.md.
"""

from __future__ import annotations

from typing import Any

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602

HANDLER_ERROR = -32000
UNKNOWN_TOOL = -32001
ALREADY_INITIALIZED = -32002
UNKNOWN_RESOURCE = -32003
NOT_INITIALIZED = -32004

ERROR_NAMES = {
    PARSE_ERROR: "parse_error",
    INVALID_REQUEST: "invalid_request",
    METHOD_NOT_FOUND: "method_not_found",
    INVALID_PARAMS: "invalid_params",
    HANDLER_ERROR: "handler_error",
    UNKNOWN_TOOL: "unknown_tool",
    ALREADY_INITIALIZED: "already_initialized",
    UNKNOWN_RESOURCE: "unknown_resource",
    NOT_INITIALIZED: "not_initialized",
}


class RpcError(Exception):
    """A protocol-level failure; serializable as a JSON-RPC error object."""

    def __init__(self, code: int, message: str, data: Any = None):
        super().__init__(f"[{code} {ERROR_NAMES.get(code, 'unknown')}] {message}")
        self.code = code
        self.message = message
        self.data = data

    def to_error_object(self) -> dict[str, Any]:
        obj: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.data is not None:
            obj["data"] = self.data
        return obj


class TransportClosed(Exception):
    """The peer closed the connection while a reply was still expected."""
