"""Parent-child retrieval over a flat, exhaustively-scanned index.

Documents split into parent chunks on blank-line boundaries and into
child chunks on sentence boundaries, both greedy under a size cap.
Queries embed with a bit-reproducible mock embedder, score every child
by cosine similarity, and return each matching parent once, keyed by
its best child.
"""

from __future__ import annotations

import json
import math
import pathlib
import re
from dataclasses import dataclass, field
from typing import Any, Iterable

INDEX_SCHEMA = "ragindex/1"
EMBED_DIM = 64

_FNV_OFFSET = 14695981039346656037
_FNV_PRIME = 1099511628211
_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SENTENCE_END_RE = re.compile(r"[.!?]+(?=\s)")
_PARAGRAPH_GAP_RE = re.compile(r"\n[ \t]*\n")

# Scores are rounded so identical token multisets compare exactly equal
# (and equal to 1.0) despite normalization round-off.
_SCORE_DECIMALS = 12


class RagError(Exception):
    pass


def fnv1a64(data: bytes) -> int:
    value = _FNV_OFFSET
    for byte in data:
        value = ((value ^ byte) * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return value


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class MockEmbedder:
    """Hashed bag-of-tokens: token bucket = FNV-1a-64 mod 64, then L2
    normalization. Deterministic and dependency-free; empty token sets
    embed to the zero vector."""

    dim = EMBED_DIM

    def embed(self, text: str) -> tuple[float, ...]:
        counts = [0.0] * EMBED_DIM
        for token in tokenize(text):
            counts[fnv1a64(token.encode("ascii")) % EMBED_DIM] += 1.0
        norm = math.sqrt(sum(c * c for c in counts))
        if norm == 0.0:
            return tuple(counts)
        return tuple(c / norm for c in counts)


DEFAULT_EMBEDDER = MockEmbedder()


@dataclass(frozen=True)
class ChunkConfig:
    parent_max_chars: int
    child_max_chars: int

    def __post_init__(self):
        if not self.parent_max_chars > self.child_max_chars > 0:
            raise RagError("need parent_max_chars > child_max_chars > 0")


@dataclass(frozen=True)
class ParentChunk:
    id: str
    doc_id: str
    text: str
    span: tuple[int, int]  # byte offsets into the UTF-8 document


@dataclass(frozen=True)
class ChildChunk:
    id: str
    parent_id: str
    text: str
    embedding: tuple[float, ...] = field(repr=False)


@dataclass(frozen=True)
class RetrievalHit:
    parent: ParentChunk
    score: float
    best_child_id: str


def _pack(pieces: list[tuple[int, int]], max_chars: int) -> list[tuple[int, int]]:
    """Pack consecutive piece spans while the covered slice fits max_chars.

    A single oversized piece still becomes its own span; content is never
    dropped to satisfy the cap.
    """
    groups: list[tuple[int, int]] = []
    for piece_start, piece_end in pieces:
        if groups and piece_end - groups[-1][0] <= max_chars:
            groups[-1] = (groups[-1][0], piece_end)
        else:
            groups.append((piece_start, piece_end))
    return groups


def _paragraph_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    position = 0
    for gap in _PARAGRAPH_GAP_RE.finditer(text):
        spans.append((position, gap.start()))
        position = gap.end()
    spans.append((position, len(text)))
    return [(s, e) for s, e in (_trim(text, s, e) for s, e in spans) if e > s]


def _sentence_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    position = 0
    for end in _SENTENCE_END_RE.finditer(text):
        spans.append((position, end.end()))
        position = end.end()
    spans.append((position, len(text)))
    return [(s, e) for s, e in (_trim(text, s, e) for s, e in spans) if e > s]


def _trim(text: str, start: int, end: int) -> tuple[int, int]:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end


def split_parents(doc_id: str, text: str, parent_max_chars: int) -> list[ParentChunk]:
    paragraphs = _paragraph_spans(text)
    groups = _pack(paragraphs, parent_max_chars)
    # Character offsets -> byte offsets, walking the document once.
    boundaries = sorted({offset for span in groups for offset in span})
    byte_at = {}
    position = byte_total = 0
    for boundary in boundaries:
        byte_total += len(text[position:boundary].encode("utf-8"))
        byte_at[boundary] = byte_total
        position = boundary
    return [
        ParentChunk(
            id=f"{doc_id}:p{index:04d}",
            doc_id=doc_id,
            text=text[start:end],
            span=(byte_at[start], byte_at[end]),
        )
        for index, (start, end) in enumerate(groups)
    ]


def split_children(parent: ParentChunk, child_max_chars: int, embedder=DEFAULT_EMBEDDER) -> list[ChildChunk]:
    sentences = _sentence_spans(parent.text)
    groups = _pack(sentences, child_max_chars)
    return [
        ChildChunk(
            id=f"{parent.id}:c{index:04d}",
            parent_id=parent.id,
            text=parent.text[start:end],
            embedding=embedder.embed(parent.text[start:end]),
        )
        for index, (start, end) in enumerate(groups)
    ]


@dataclass(frozen=True)
class IndexStats:
    documents: int
    parents: int
    children: int


@dataclass
class RagIndex:
    config: ChunkConfig
    parents: dict[str, ParentChunk] = field(default_factory=dict)
    children: list[ChildChunk] = field(default_factory=list)

    def stats(self) -> IndexStats:
        return IndexStats(
            documents=len({p.doc_id for p in self.parents.values()}),
            parents=len(self.parents),
            children=len(self.children),
        )


def build_index(
    documents: Iterable[tuple[str, str]],
    config: ChunkConfig,
    embedder=DEFAULT_EMBEDDER,
) -> RagIndex:
    index = RagIndex(config=config)
    seen = set()
    for doc_id, text in documents:
        if doc_id in seen:
            raise RagError(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)
        for parent in split_parents(doc_id, text, config.parent_max_chars):
            index.parents[parent.id] = parent
            index.children.extend(split_children(parent, config.child_max_chars, embedder))
    return index


def query(index: RagIndex, text: str, k: int, embedder=DEFAULT_EMBEDDER) -> list[RetrievalHit]:
    """Exhaustive scan: best child cosine per parent, (score desc, id asc)."""
    if k < 1:
        raise RagError("k must be >= 1")
    if not index.children:
        return []
    query_vec = embedder.embed(text)
    best: dict[str, tuple[float, str]] = {}
    for child in index.children:
        score = round(sum(a * b for a, b in zip(query_vec, child.embedding)), _SCORE_DECIMALS)
        held = best.get(child.parent_id)
        if held is None or score > held[0]:
            best[child.parent_id] = (score, child.id)
    hits = [
        RetrievalHit(parent=index.parents[parent_id], score=score, best_child_id=child_id)
        for parent_id, (score, child_id) in best.items()
    ]
    hits.sort(key=lambda h: (-h.score, h.parent.id))
    return hits[:k]


def save_index(index: RagIndex, path: str | pathlib.Path) -> None:
    doc: dict[str, Any] = {
        "schema": INDEX_SCHEMA,
        "config": {
            "parent_max_chars": index.config.parent_max_chars,
            "child_max_chars": index.config.child_max_chars,
        },
        "parents": [
            {"id": p.id, "doc_id": p.doc_id, "text": p.text, "span": list(p.span)}
            for p in index.parents.values()
        ],
        "children": [
            {"id": c.id, "parent_id": c.parent_id, "text": c.text, "embedding": list(c.embedding)}
            for c in index.children
        ],
    }
    pathlib.Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def load_index(path: str | pathlib.Path) -> RagIndex:
    doc = json.loads(pathlib.Path(path).read_text(encoding="utf-8"))
    if doc.get("schema") != INDEX_SCHEMA:
        raise RagError(f"not a {INDEX_SCHEMA} file: schema={doc.get('schema')!r}")
    config = ChunkConfig(**doc["config"])
    index = RagIndex(config=config)
    for p in doc["parents"]:
        parent = ParentChunk(id=p["id"], doc_id=p["doc_id"], text=p["text"], span=tuple(p["span"]))
        index.parents[parent.id] = parent
    for c in doc["children"]:
        index.children.append(
            ChildChunk(
                id=c["id"],
                parent_id=c["parent_id"],
                text=c["text"],
                embedding=tuple(c["embedding"]),
            )
        )
    return index
