"""Candidate generation: structured pre-visualizations with SVG previews."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..dccsim import Scene, SceneError, render_thumbnail
from .providers import Message, Provider, ProviderProtocolError, ProviderReply

DIVERSITY_HINT = "introduce more diversity"

# Candidate params that shape the preview footprint instead of becoming
# plain object params.
_FOOTPRINT = {"width": "sx", "height": "sy", "depth": "sz"}


@dataclass(frozen=True)
class Candidate:
    id: str
    params: dict[str, Any]
    descriptor: str
    thumbnail: str = field(repr=False)

    def __post_init__(self):
        if not self.id or not isinstance(self.id, str):
            raise ValueError("candidate id must be a non-empty string")
        if not self.params:
            raise ValueError(f"candidate {self.id}: params must be non-empty")
        for name, value in self.params.items():
            if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                raise ValueError(f"candidate {self.id}: param {name} must be number or string")


CandidateSet = tuple[Candidate, ...]


@dataclass(frozen=True)
class PriorRound:
    """The previous round's outcome, for selective regeneration."""

    candidates: CandidateSet
    selected_ids: frozenset[str]
    reasons: dict[str, str] = field(default_factory=dict)


def preview_scene(params: dict[str, Any]) -> Scene:
    """One-object preview whose footprint and glow follow the params."""
    scene = Scene()
    obj = scene.add_object("preview", "custom")
    for name in sorted(params):
        value = params[name]
        if name in _FOOTPRINT:
            if isinstance(value, (int, float)) and value > 0:
                obj.set_param(_FOOTPRINT[name], value)
            else:
                obj.set_param(name, value)
        elif name == "color" and isinstance(value, str) and value.startswith("#"):
            obj.set_param("emissive_color", value)
        else:
            obj.set_param(name, value)
    return scene


def candidate_thumbnail(params: dict[str, Any]) -> str:
    return render_thumbnail(preview_scene(params))


def build_candidate(spec: dict[str, Any]) -> Candidate:
    """Candidate from a provider batch entry {"id", "params", "descriptor"}."""
    for key in ("id", "params", "descriptor"):
        if key not in spec:
            raise ProviderProtocolError(f"candidate entry missing {key!r}: {spec!r}")
    try:
        thumbnail = candidate_thumbnail(spec["params"])
    except (SceneError, TypeError) as e:
        raise ProviderProtocolError(f"candidate {spec['id']}: bad params: {e}") from e
    try:
        return Candidate(
            id=spec["id"],
            params=dict(spec["params"]),
            descriptor=spec["descriptor"],
            thumbnail=thumbnail,
        )
    except ValueError as e:
        raise ProviderProtocolError(str(e)) from e


def _batch(reply: ProviderReply, needed: int) -> tuple[dict[str, Any], ...]:
    if reply.candidates is None:
        raise ProviderProtocolError("visualizer reply must be a candidate batch")
    if len(reply.candidates) != needed:
        raise ProviderProtocolError(
            f"visualizer returned {len(reply.candidates)} candidates, needed {needed}"
        )
    return reply.candidates


def visualize_candidates(
    provider: Provider,
    prompt: str,
    n: int,
    prior: PriorRound | None = None,
    want_diversity: bool = False,
) -> CandidateSet:
    """First round fills all n slots; later rounds keep every selected
    candidate in its slot and regenerate only the rejected ones."""
    if n < 1:
        raise ValueError("candidate count must be >= 1")
    context: list[Message] = [{"role": "user", "content": prompt}]

    if prior is None:
        slots: list[Candidate | None] = [None] * n
    else:
        if len(prior.candidates) != n:
            raise ValueError("prior round size does not match n")
        slots = [c if c.id in prior.selected_ids else None for c in prior.candidates]
        rejected = [c for c in prior.candidates if c.id not in prior.selected_ids]
        lines = [
            f"- {c.id} ({c.descriptor}): {prior.reasons.get(c.id, 'no reason given')}"
            for c in rejected
        ]
        context.append({"role": "user", "content": "Rejected candidates:\n" + "\n".join(lines)})

    if want_diversity:
        context.append({"role": "user", "content": DIVERSITY_HINT})

    needed = sum(slot is None for slot in slots)
    if needed == 0:
        return tuple(slots)  # everything was kept
    context.append({"role": "user", "content": f"Generate {needed} candidates."})

    batch = _batch(provider.complete("visualizer", context), needed)
    kept_ids = {slot.id for slot in slots if slot is not None}
    fresh = iter(batch)
    out: list[Candidate] = []
    for slot in slots:
        if slot is not None:
            out.append(slot)
            continue
        candidate = build_candidate(next(fresh))
        if candidate.id in kept_ids or any(candidate.id == c.id for c in out):
            raise ProviderProtocolError(f"duplicate candidate id {candidate.id!r}")
        out.append(candidate)
    return tuple(out)
