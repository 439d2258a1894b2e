"""Client side of the protocol: initialize, list/call tools, read resources."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import RpcError, TransportClosed
from .messages import PROTOCOL_VERSION, message_kind, request
from .transport import LineTransport


class ClientStateError(Exception):
    """The client was used out of order (e.g. a call before initialize)."""


@dataclass(frozen=True)
class ServerInfo:
    name: str
    version: str
    protocol_version: str


class McpClient:
    """Strict request/response client over one connection.

    Not thread-safe: callers own serialization. One request is in flight
    at a time; every call blocks until its response arrives.
    """

    def __init__(self, transport: LineTransport, client_name: str = "sceneforge"):
        self._transport = transport
        self._client_name = client_name
        self._next_id = 1
        self._server_info: ServerInfo | None = None

    @property
    def server_info(self) -> ServerInfo | None:
        return self._server_info

    def _call(self, method: str, params: dict[str, Any]) -> Any:
        req_id = self._next_id
        self._next_id += 1
        self._transport.send(request(req_id, method, params))
        reply = self._transport.recv()
        kind = message_kind(reply)
        if kind not in ("response", "error-response") or reply.get("id") != req_id:
            raise TransportClosed(
                f"peer broke request/response alternation: got {kind} id={reply.get('id')!r}"
            )
        if "error" in reply:
            err = reply["error"]
            raise RpcError(err["code"], err["message"], err.get("data"))
        return reply["result"]

    def initialize(self) -> ServerInfo:
        if self._server_info is not None:
            raise ClientStateError("client is already initialized")
        result = self._call(
            "initialize",
            {"protocolVersion": PROTOCOL_VERSION, "clientInfo": {"name": self._client_name}},
        )
        if result.get("protocolVersion") != PROTOCOL_VERSION:
            raise ClientStateError(
                f"protocol version mismatch: server speaks {result.get('protocolVersion')!r}"
            )
        info = result.get("serverInfo", {})
        self._server_info = ServerInfo(
            name=info.get("name", ""),
            version=info.get("version", ""),
            protocol_version=result["protocolVersion"],
        )
        return self._server_info

    def _require_ready(self) -> None:
        if self._server_info is None:
            raise ClientStateError("initialize the client first")

    def list_tools(self) -> list[dict[str, Any]]:
        self._require_ready()
        return self._call("tools/list", {})["tools"]

    def call_tool(self, name: str, arguments: dict[str, Any] | None = None) -> dict[str, Any]:
        self._require_ready()
        return self._call("tools/call", {"name": name, "arguments": arguments or {}})

    def call_tool_text(self, name: str, arguments: dict[str, Any] | None = None) -> str:
        """Call a tool and return its text payload."""
        result = self.call_tool(name, arguments)
        return "".join(
            part["text"] for part in result.get("content", []) if part.get("type") == "text"
        )

    def read_resource(self, uri: str) -> Any:
        self._require_ready()
        return self._call("resources/read", {"uri": uri})["value"]

    def close(self) -> None:
        self._transport.close()
