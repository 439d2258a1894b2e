"""Newline-delimited message transports: stdio, TCP, and in-process pairs."""

from __future__ import annotations

import socket
import sys
from typing import Any, BinaryIO

from .errors import TransportClosed
from .messages import decode_message, encode_message


class LineTransport:
    """One message per line over a pair of binary streams."""

    def __init__(self, reader: BinaryIO, writer: BinaryIO, owns: tuple = ()):
        self._reader = reader
        self._writer = writer
        self._owns = owns  # closed along with the streams (e.g. the socket)

    def send(self, msg: dict[str, Any]) -> None:
        self.send_line(encode_message(msg))

    def send_line(self, line: bytes) -> None:
        try:
            self._writer.write(line)
            self._writer.flush()
        except (OSError, ValueError) as e:
            raise TransportClosed(f"connection closed while sending: {e}") from e

    def recv_line(self) -> bytes | None:
        """Read one raw line; None at end of stream."""
        try:
            line = self._reader.readline()
        except (OSError, ValueError):
            return None
        return line if line else None

    def recv(self) -> dict[str, Any]:
        """Read and decode one message; raises TransportClosed at EOF."""
        line = self.recv_line()
        if line is None:
            raise TransportClosed("connection closed")
        return decode_message(line)

    def close(self) -> None:
        for stream in (self._reader, self._writer, *self._owns):
            try:
                stream.close()
            except OSError:
                pass


def stdio_transport() -> LineTransport:
    return LineTransport(sys.stdin.buffer, sys.stdout.buffer)


def socket_transport(sock: socket.socket) -> LineTransport:
    return LineTransport(sock.makefile("rb"), sock.makefile("wb"), owns=(sock,))


def connect_tcp(host: str, port: int) -> LineTransport:
    return socket_transport(socket.create_connection((host, port)))


def transport_pair() -> tuple[LineTransport, LineTransport]:
    """Two connected in-process transports (client side, server side)."""
    a, b = socket.socketpair()
    return socket_transport(a), socket_transport(b)
