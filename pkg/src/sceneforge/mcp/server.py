"""Server framework: tool/resource registries and the serving loop.

Dispatch covers exactly four methods: initialize, tools/list, tools/call,
and resources/read. Anything else answers method_not_found. One request
is handled at a time per connection, in arrival order; notifications are
consumed without a reply. Handler failures become error responses and the
loop keeps serving.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import (
    ALREADY_INITIALIZED,
    HANDLER_ERROR,
    INVALID_PARAMS,
    METHOD_NOT_FOUND,
    NOT_INITIALIZED,
    UNKNOWN_RESOURCE,
    UNKNOWN_TOOL,
    RpcError,
)
from .messages import (
    PROTOCOL_VERSION,
    decode_message,
    encode_message,
    error_response,
    message_kind,
    response,
)
from .transport import LineTransport

# input_schema entries: param name -> {"type", "description", "required"}.
_SCHEMA_TYPES = {
    "string": str,
    "number": (int, float),
    "integer": int,
    "boolean": bool,
    "array": list,
    "object": dict,
}


@dataclass
class ToolRegistry:
    """Named tools and resources with LLM-facing metadata."""

    tools: dict[str, tuple[dict[str, Any], Callable[[dict[str, Any]], Any]]] = field(
        default_factory=dict
    )
    resources: dict[str, tuple[dict[str, Any], Callable[[], Any]]] = field(
        default_factory=dict
    )
    _frozen: bool = False

    def register_tool(
        self,
        name: str,
        description: str,
        input_schema: dict[str, dict[str, Any]],
        handler: Callable[[dict[str, Any]], Any],
    ) -> None:
        if self._frozen:
            raise ValueError("registry is frozen once serving begins")
        if not name or name in self.tools:
            raise ValueError(f"tool name {name!r} is empty or already registered")
        if not description:
            raise ValueError(f"tool {name!r} needs a non-empty description")
        for param, spec in input_schema.items():
            if spec.get("type") not in _SCHEMA_TYPES:
                raise ValueError(f"tool {name!r} param {param!r}: unknown type {spec.get('type')!r}")
        descriptor = {
            "name": name,
            "description": description,
            "inputSchema": {k: dict(v) for k, v in input_schema.items()},
        }
        self.tools[name] = (descriptor, handler)

    def register_resource(self, uri: str, description: str, handler: Callable[[], Any]) -> None:
        if self._frozen:
            raise ValueError("registry is frozen once serving begins")
        if not uri or uri in self.resources:
            raise ValueError(f"resource uri {uri!r} is empty or already registered")
        if not description:
            raise ValueError(f"resource {uri!r} needs a non-empty description")
        self.resources[uri] = ({"uri": uri, "description": description}, handler)

    def freeze(self) -> None:
        self._frozen = True

    def tool_descriptors(self) -> list[dict[str, Any]]:
        return [self.tools[name][0] for name in sorted(self.tools)]

    def resource_descriptors(self) -> list[dict[str, Any]]:
        return [self.resources[uri][0] for uri in sorted(self.resources)]


def check_arguments(input_schema: dict[str, dict[str, Any]], arguments: dict[str, Any]) -> None:
    """Validate call arguments against a tool's input schema."""
    for param, spec in input_schema.items():
        if spec.get("required", False) and param not in arguments:
            raise RpcError(INVALID_PARAMS, f"missing required argument {param!r}")
    for name, value in arguments.items():
        spec = input_schema.get(name)
        if spec is None:
            raise RpcError(INVALID_PARAMS, f"unexpected argument {name!r}")
        expected = _SCHEMA_TYPES[spec["type"]]
        if isinstance(value, bool) and spec["type"] != "boolean":
            raise RpcError(INVALID_PARAMS, f"argument {name!r} must be {spec['type']}")
        if not isinstance(value, expected):
            raise RpcError(INVALID_PARAMS, f"argument {name!r} must be {spec['type']}")


class McpServer:
    """Dispatches decoded requests against a registry for one connection."""

    def __init__(self, name: str, version: str, registry: ToolRegistry):
        self.name = name
        self.version = version
        self.registry = registry
        self._initialized = False
        registry.freeze()

    # -- request handling --------------------------------------------------

    def handle_line(self, line: bytes) -> bytes | None:
        """Process one wire line; returns the response line, or None for
        notifications."""
        try:
            msg = decode_message(line)
        except RpcError as e:
            return encode_message(error_response(None, e))
        kind = message_kind(msg)
        if kind == "notification":
            return None
        if kind != "request":
            # Peers must not send us responses; answer with an error so
            # misbehaving clients notice instead of hanging.
            err = RpcError(INVALID_PARAMS, f"server expects requests, got a {kind}")
            return encode_message(error_response(msg.get("id"), err))
        try:
            result = self._dispatch(msg["method"], msg.get("params", {}))
        except RpcError as e:
            return encode_message(error_response(msg["id"], e))
        except Exception as e:  # handler bug: report, keep serving
            err = RpcError(HANDLER_ERROR, f"handler failed: {e}")
            return encode_message(error_response(msg["id"], err))
        return encode_message(response(msg["id"], result))

    def _dispatch(self, method: str, params: Any) -> Any:
        if not isinstance(params, dict):
            raise RpcError(INVALID_PARAMS, "params must be an object")
        if method == "initialize":
            return self._initialize(params)
        if not self._initialized:
            raise RpcError(NOT_INITIALIZED, f"call initialize before {method}")
        if method == "tools/list":
            return {"tools": self.registry.tool_descriptors()}
        if method == "tools/call":
            return self._call_tool(params)
        if method == "resources/read":
            return self._read_resource(params)
        raise RpcError(METHOD_NOT_FOUND, f"unknown method {method!r}")

    def _initialize(self, params: dict[str, Any]) -> dict[str, Any]:
        if self._initialized:
            raise RpcError(ALREADY_INITIALIZED, "connection is already initialized")
        self._initialized = True
        return {
            "protocolVersion": PROTOCOL_VERSION,
            "serverInfo": {"name": self.name, "version": self.version},
            "capabilities": {
                "tools": {"count": len(self.registry.tools)},
                "resources": {"count": len(self.registry.resources)},
            },
        }

    def _call_tool(self, params: dict[str, Any]) -> dict[str, Any]:
        name = params.get("name")
        if not isinstance(name, str):
            raise RpcError(INVALID_PARAMS, "tools/call needs a string tool name")
        arguments = params.get("arguments", {})
        if not isinstance(arguments, dict):
            raise RpcError(INVALID_PARAMS, "arguments must be an object")
        entry = self.registry.tools.get(name)
        if entry is None:
            raise RpcError(UNKNOWN_TOOL, f"no tool named {name!r}")
        descriptor, handler = entry
        check_arguments(descriptor["inputSchema"], arguments)
        try:
            value = handler(arguments)
        except RpcError:
            raise
        except Exception as e:
            raise RpcError(HANDLER_ERROR, f"tool {name!r} failed: {e}") from e
        text = value if isinstance(value, str) else str(value)
        return {"content": [{"type": "text", "text": text}]}

    def _read_resource(self, params: dict[str, Any]) -> dict[str, Any]:
        uri = params.get("uri")
        if not isinstance(uri, str):
            raise RpcError(INVALID_PARAMS, "resources/read needs a string uri")
        entry = self.registry.resources.get(uri)
        if entry is None:
            raise RpcError(UNKNOWN_RESOURCE, f"no resource at {uri!r}")
        _, handler = entry
        try:
            value = handler()
        except Exception as e:
            raise RpcError(HANDLER_ERROR, f"resource {uri!r} failed: {e}") from e
        return {"uri": uri, "value": value}

    # -- serving -----------------------------------------------------------

    def serve(self, transport: LineTransport) -> None:
        """Answer requests until the peer closes the connection."""
        while True:
            line = transport.recv_line()
            if line is None:
                return
            if not line.strip():
                continue
            reply = self.handle_line(line)
            if reply is not None:
                transport.send_line(reply)
