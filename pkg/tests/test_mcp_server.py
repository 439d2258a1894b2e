"""Server dispatch, error codes, and registry behavior."""

import json

import pytest

from sceneforge.mcp import (
    ALREADY_INITIALIZED,
    HANDLER_ERROR,
    INVALID_PARAMS,
    INVALID_REQUEST,
    METHOD_NOT_FOUND,
    NOT_INITIALIZED,
    PARSE_ERROR,
    PROTOCOL_VERSION,
    UNKNOWN_RESOURCE,
    UNKNOWN_TOOL,
    McpServer,
    ToolRegistry,
    decode_message,
    encode_message,
    notification,
    request,
)

ECHO_SCHEMA = {"text": {"type": "string", "description": "text to echo", "required": True}}


def make_registry():
    reg = ToolRegistry()
    reg.register_tool("echo", "Echo the given text back.", ECHO_SCHEMA, lambda a: a["text"])
    reg.register_tool(
        "fail", "Always raises.", {}, lambda a: (_ for _ in ()).throw(RuntimeError("boom"))
    )
    reg.register_resource("keys://all", "All known keys.", lambda: {"delete": "X"})
    return reg


def ask(server, msg):
    reply = server.handle_line(encode_message(msg))
    return decode_message(reply)


def initialized_server():
    server = McpServer("test-server", "9.9", make_registry())
    ask(server, request(0, "initialize", {}))
    return server


def test_initialize_reports_server_info():
    server = McpServer("test-server", "9.9", make_registry())
    reply = ask(server, request(1, "initialize", {}))
    assert reply["id"] == 1
    assert reply["result"]["serverInfo"] == {"name": "test-server", "version": "9.9"}
    assert reply["result"]["protocolVersion"] == PROTOCOL_VERSION


def test_double_initialize_rejected():
    server = initialized_server()
    reply = ask(server, request(2, "initialize", {}))
    assert reply["error"]["code"] == ALREADY_INITIALIZED


def test_calls_before_initialize_rejected():
    server = McpServer("s", "1", make_registry())
    for method in ("tools/list", "tools/call", "resources/read"):
        reply = ask(server, request(1, method, {}))
        assert reply["error"]["code"] == NOT_INITIALIZED, method


def test_tools_list_sorted_and_complete():
    server = initialized_server()
    tools = ask(server, request(1, "tools/list"))["result"]["tools"]
    assert [t["name"] for t in tools] == ["echo", "fail"]
    assert all(t["description"] for t in tools)
    assert tools[0]["inputSchema"] == ECHO_SCHEMA


def test_tools_list_on_empty_registry():
    server = McpServer("s", "1", ToolRegistry())
    ask(server, request(0, "initialize", {}))
    assert ask(server, request(1, "tools/list"))["result"]["tools"] == []


def test_tool_call_and_text_wrapping():
    server = initialized_server()
    reply = ask(server, request(1, "tools/call", {"name": "echo", "arguments": {"text": "hi"}}))
    assert reply["result"] == {"content": [{"type": "text", "text": "hi"}]}


def test_tool_error_codes():
    server = initialized_server()
    cases = [
        ({"name": "nope", "arguments": {}}, UNKNOWN_TOOL),
        ({"name": "echo", "arguments": {}}, INVALID_PARAMS),  # missing required
        ({"name": "echo", "arguments": {"text": 7}}, INVALID_PARAMS),  # wrong type
        ({"name": "echo", "arguments": {"text": "x", "bogus": 1}}, INVALID_PARAMS),
        ({"name": "fail", "arguments": {}}, HANDLER_ERROR),
        ({"arguments": {}}, INVALID_PARAMS),  # no tool name
    ]
    for params, code in cases:
        reply = ask(server, request(1, "tools/call", params))
        assert reply["error"]["code"] == code, params
    # The loop keeps serving after handler failures.
    ok = ask(server, request(2, "tools/call", {"name": "echo", "arguments": {"text": "y"}}))
    assert ok["result"]["content"][0]["text"] == "y"


def test_resource_read_and_unknown():
    server = initialized_server()
    reply = ask(server, request(1, "resources/read", {"uri": "keys://all"}))
    assert reply["result"] == {"uri": "keys://all", "value": {"delete": "X"}}
    reply = ask(server, request(2, "resources/read", {"uri": "keys://none"}))
    assert reply["error"]["code"] == UNKNOWN_RESOURCE


def test_unknown_method():
    server = initialized_server()
    reply = ask(server, request(1, "prompts/list", {}))
    assert reply["error"]["code"] == METHOD_NOT_FOUND


def test_notifications_get_no_reply():
    server = initialized_server()
    assert server.handle_line(encode_message(notification("tools/list"))) is None


def test_malformed_lines_answered_with_null_id():
    server = initialized_server()
    reply = decode_message(server.handle_line(b"{broken"))
    assert reply["id"] is None
    assert reply["error"]["code"] == PARSE_ERROR
    reply = decode_message(server.handle_line(b'{"jsonrpc":"1.0","method":"x","id":1}'))
    assert reply["error"]["code"] == INVALID_REQUEST


def test_server_output_always_decodes():
    server = McpServer("s", "1", make_registry())
    lines = [
        b"garbage",
        encode_message(request(1, "initialize", {})),
        encode_message(request(2, "tools/call", {"name": "fail", "arguments": {}})),
        encode_message(request("x", "bogus")),
        encode_message(request(3, "tools/call", {"name": "echo", "arguments": {"text": "ok"}})),
    ]
    for line in lines:
        reply = server.handle_line(line)
        if reply is not None:
            decode_message(reply)  # must never raise


def test_registry_rejects_bad_registrations():
    reg = ToolRegistry()
    reg.register_tool("a", "desc", {}, lambda a: "x")
    with pytest.raises(ValueError):
        reg.register_tool("a", "again", {}, lambda a: "x")
    with pytest.raises(ValueError):
        reg.register_tool("b", "", {}, lambda a: "x")
    with pytest.raises(ValueError):
        reg.register_tool("c", "desc", {"p": {"type": "wat"}}, lambda a: "x")
    reg.freeze()
    with pytest.raises(ValueError):
        reg.register_tool("d", "desc", {}, lambda a: "x")


def test_list_payload_grows_linearly_with_tool_count():
    # Tool metadata is LLM-facing context; its cost must stay predictable.
    sizes = []
    for count in range(1, 9):
        reg = ToolRegistry()
        for i in range(count):
            reg.register_tool(
                f"tool_{i:02d}",
                f"Fixed-size description {i:02d}.",
                {"cmd": {"type": "string", "description": "the input", "required": True}},
                lambda a: "",
            )
        server = McpServer("s", "1", reg)
        ask(server, request(0, "initialize", {}))
        line = server.handle_line(encode_message(request(1, "tools/list")))
        sizes.append(len(line))
    deltas = {b - a for a, b in zip(sizes, sizes[1:])}
    assert len(deltas) == 1  # constant bytes per added tool
