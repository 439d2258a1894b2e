"""Append-only request journal, one JSON-lines file per session.

Only the inputs are journaled (create, selection). Because providers are
deterministic fixtures and the simulator is deterministic, replaying the
inputs reconstructs identical state, so outputs never need to be stored.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterator

SUFFIX = ".journal"


class Journal:
    def __init__(self, directory: str):
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)

    def path(self, session_id: str) -> Path:
        return self._dir / f"{session_id}{SUFFIX}"

    def append(self, session_id: str, entry: dict[str, Any]) -> None:
        line = json.dumps(entry, sort_keys=True, separators=(",", ":"))
        with open(self.path(session_id), "a", encoding="utf-8") as fh:
            fh.write(line + "\n")

    def load(self, session_id: str) -> list[dict[str, Any]]:
        path = self.path(session_id)
        if not path.exists():
            return []
        entries = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    entries.append(json.loads(line))
        return entries

    def load_all(self) -> Iterator[tuple[str, list[dict[str, Any]]]]:
        """Sessions in id order, each with its entries in append order."""
        for path in sorted(self._dir.glob(f"*{SUFFIX}")):
            session_id = path.name[: -len(SUFFIX)]
            yield session_id, self.load(session_id)
