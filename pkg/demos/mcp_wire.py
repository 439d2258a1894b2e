"""Walkthrough: the JSON-RPC wire protocol between client and simulator.

Every message is one canonical JSON line. This taps the transport so
both directions print exactly as they travel.

Run with: python3 demos/mcp_wire.py
"""

import threading

from sceneforge.dccsim import CONSOLE_TOOL, serve_dcc_mcp
from sceneforge.mcp import McpClient, RpcError, encode_message, transport_pair


class Tap:
    """Prints each wire line before passing it through."""

    def __init__(self, inner):
        self.inner = inner

    def send(self, msg):
        print(f"  -> {encode_message(msg).decode().rstrip()}")
        self.inner.send(msg)

    def recv(self):
        msg = self.inner.recv()
        print(f"  <- {encode_message(msg).decode().rstrip()}")
        return msg

    def close(self):
        self.inner.close()


client_side, server_side = transport_pair()
threading.Thread(target=serve_dcc_mcp, args=(server_side,), daemon=True).start()
client = McpClient(Tap(client_side))

print("Handshake (initialize must come first):")
client.initialize()

print("\nDiscover the tool set:")
tools = client.list_tools()
print(f"  tools: {[t['name'] for t in tools]}")

print("\nDrive the scene through the console tool:")
client.call_tool_text(CONSOLE_TOOL, {"cmd": "add light sun intensity=3"})
text = client.call_tool_text(CONSOLE_TOOL, {"cmd": "query sun"})
assert "intensity=3" in text

print("\nErrors come back as JSON-RPC error objects, not crashes:")
try:
    client.call_tool("no_such_tool", {})
except RpcError as e:
    print(f"  error {e.code}: {e}")

client.close()
