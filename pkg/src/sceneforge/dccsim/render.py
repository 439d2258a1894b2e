"""Canonical snapshots, text summaries, and deterministic SVG thumbnails.

Snapshots must be byte-stable: object and key order is sorted, numbers
are rounded to 6 fractional digits with negative zero normalized and
whole values emitted as integers. Thumbnails are 512x512 orthographic
XZ projections drawing each object's footprint as a labeled rectangle.
"""

from __future__ import annotations

import json
from typing import Any
from xml.sax.saxutils import escape

SNAPSHOT_SCHEMA = "scene/1"

THUMB_SIZE = 512
_MARGIN = 24.0

_KIND_FILLS = {
    "cube": "#8ecae6",
    "cylinder": "#ffb703",
    "plane": "#a7c957",
    "light": "#ffe066",
    "group": "#cdb4db",
    "custom": "#adb5bd",
}


def canon_number(value: float) -> int | float:
    """Round to 6 fractional digits; -0 becomes 0; whole values are ints."""
    v = round(float(value), 6)
    if v == 0:
        return 0
    return int(v) if v.is_integer() else v


def format_number(value: float) -> str:
    return str(canon_number(value))


def _canon_value(value: Any) -> Any:
    return value if isinstance(value, str) else canon_number(value)


def snapshot(scene) -> dict[str, Any]:
    """Canonical scene document (insertion order never matters)."""
    from .expr import format_expression  # local import keeps module load light

    objects = []
    for name in sorted(scene.objects):
        obj = scene.objects[name]
        entry: dict[str, Any] = {
            "name": obj.name,
            "kind": obj.kind,
            "transform": {k: canon_number(obj.transform[k]) for k in sorted(obj.transform)},
            "params": {k: _canon_value(v) for k, v in sorted(obj.params.items())},
        }
        if obj.emissive is not None:
            entry["emissive"] = {
                "color": obj.emissive["color"],
                "strength": canon_number(obj.emissive["strength"]),
            }
        objects.append(entry)
    bindings = [
        {"target": target, "expr": format_expression(scene.bindings[target])}
        for target in sorted(scene.bindings)
    ]
    return {"schema": SNAPSHOT_SCHEMA, "objects": objects, "bindings": bindings}


def snapshot_text(scene) -> str:
    return json.dumps(snapshot(scene), sort_keys=True, separators=(",", ":"))


def render_summary(scene) -> str:
    lines = [f"{len(scene.objects)} objects, {len(scene.bindings)} bindings"]
    for name in sorted(scene.objects):
        obj = scene.objects[name]
        tags = [obj.kind]
        if obj.emissive is not None:
            tags.append(f"emissive {obj.emissive['color']}")
        t = obj.transform
        lines.append(
            f"- {name} ({', '.join(tags)}) at "
            f"({format_number(t['tx'])},{format_number(t['ty'])},{format_number(t['tz'])})"
        )
    return "\n".join(lines)


def _svg_num(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".") or "0"


def render_thumbnail(scene) -> str:
    """SVG top view: x axis right, z axis up, one rectangle per object."""
    names = sorted(scene.objects)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{THUMB_SIZE}" '
        f'height="{THUMB_SIZE}" viewBox="0 0 {THUMB_SIZE} {THUMB_SIZE}">',
        f'<rect x="0" y="0" width="{THUMB_SIZE}" height="{THUMB_SIZE}" fill="#1d2430"/>',
    ]
    if names:
        # World-space extent of all footprints (unit base size, scaled).
        boxes = {}
        for name in names:
            obj = scene.objects[name]
            t = obj.transform
            half_x, half_z = t["sx"] / 2.0, t["sz"] / 2.0
            boxes[name] = (t["tx"] - half_x, t["tz"] - half_z, t["tx"] + half_x, t["tz"] + half_z)
        min_x = min(b[0] for b in boxes.values())
        min_z = min(b[1] for b in boxes.values())
        max_x = max(b[2] for b in boxes.values())
        max_z = max(b[3] for b in boxes.values())
        span = max(max_x - min_x, max_z - min_z, 1e-6)
        scale = (THUMB_SIZE - 2 * _MARGIN) / span
        # Center the scene inside the viewport.
        pad_x = (THUMB_SIZE - scale * (max_x - min_x)) / 2.0
        pad_z = (THUMB_SIZE - scale * (max_z - min_z)) / 2.0

        for name in names:
            obj = scene.objects[name]
            x0, z0, x1, z1 = boxes[name]
            px = pad_x + scale * (x0 - min_x)
            # z grows away from the viewer; SVG y grows downward.
            py = THUMB_SIZE - pad_z - scale * (z1 - min_z)
            width = scale * (x1 - x0)
            height = scale * (z1 - z0)
            if obj.emissive is not None:
                fill = obj.emissive["color"]
            else:
                fill = _KIND_FILLS.get(obj.kind, "#adb5bd")
            label = escape(name)
            parts.append(
                f'<rect x="{_svg_num(px)}" y="{_svg_num(py)}" width="{_svg_num(width)}" '
                f'height="{_svg_num(height)}" fill="{fill}" fill-opacity="0.85" '
                f'stroke="#0b0f14" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_svg_num(px + width / 2)}" y="{_svg_num(py + height / 2)}" '
                f'font-family="monospace" font-size="12" fill="#f1f5f9" '
                f'text-anchor="middle" dominant-baseline="middle">{label}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
