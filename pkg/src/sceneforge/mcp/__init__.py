"""Line-delimited JSON-RPC tool protocol: client, server, transports."""

from .client import ClientStateError, McpClient, ServerInfo
from .errors import (
    ALREADY_INITIALIZED,
    ERROR_NAMES,
    HANDLER_ERROR,
    INVALID_PARAMS,
    INVALID_REQUEST,
    METHOD_NOT_FOUND,
    NOT_INITIALIZED,
    PARSE_ERROR,
    UNKNOWN_RESOURCE,
    UNKNOWN_TOOL,
    RpcError,
    TransportClosed,
)
from .messages import (
    PROTOCOL_VERSION,
    decode_message,
    encode_message,
    error_response,
    message_kind,
    notification,
    request,
    response,
    validate_message,
)
from .server import McpServer, ToolRegistry, check_arguments
from .transport import (
    LineTransport,
    connect_tcp,
    socket_transport,
    stdio_transport,
    transport_pair,
)

__all__ = [
    "ALREADY_INITIALIZED",
    "ERROR_NAMES",
    "HANDLER_ERROR",
    "INVALID_PARAMS",
    "INVALID_REQUEST",
    "METHOD_NOT_FOUND",
    "NOT_INITIALIZED",
    "PARSE_ERROR",
    "PROTOCOL_VERSION",
    "UNKNOWN_RESOURCE",
    "UNKNOWN_TOOL",
    "ClientStateError",
    "LineTransport",
    "McpClient",
    "McpServer",
    "RpcError",
    "ServerInfo",
    "ToolRegistry",
    "TransportClosed",
    "check_arguments",
    "connect_tcp",
    "decode_message",
    "encode_message",
    "error_response",
    "message_kind",
    "notification",
    "request",
    "response",
    "socket_transport",
    "stdio_transport",
    "transport_pair",
    "validate_message",
]
