"""Parametric scene graph with a dependency node graph over parameters.

Objects expose one flat parameter namespace per object: nine reserved
transform parameters (tx ty tz, rx ry rz, sx sy sz), optional emissive
parameters (emissive_color, emissive_strength), and free-form params.
Bindings tie one target parameter to an expression over other params;
the binding set must stay acyclic and every bound parameter always
equals its expression's value after any mutation.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from typing import Any

from .expr import EvalError, evaluate, expr_refs, format_expression

OBJECT_KINDS = ("cube", "cylinder", "plane", "light", "group", "custom")

OBJECT_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")
PARAM_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

TRANSLATION_PARAMS = ("tx", "ty", "tz")
ROTATION_PARAMS = ("rx", "ry", "rz")
SCALE_PARAMS = ("sx", "sy", "sz")
TRANSFORM_PARAMS = TRANSLATION_PARAMS + ROTATION_PARAMS + SCALE_PARAMS
EMISSIVE_PARAMS = ("emissive_color", "emissive_strength")


class SceneError(Exception):
    """A command-level scene mutation failure; the scene is unchanged."""


@dataclass
class SceneObject:
    name: str
    kind: str
    transform: dict[str, float] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    emissive: dict[str, Any] | None = None

    def __post_init__(self):
        defaults = {p: 0.0 for p in TRANSLATION_PARAMS + ROTATION_PARAMS}
        defaults.update({p: 1.0 for p in SCALE_PARAMS})
        defaults.update(self.transform)
        self.transform = defaults

    def param_names(self) -> list[str]:
        names = list(TRANSFORM_PARAMS) + sorted(self.params)
        if self.emissive is not None:
            names += list(EMISSIVE_PARAMS)
        return names

    def get_param(self, param: str) -> Any:
        if param in TRANSFORM_PARAMS:
            return self.transform[param]
        if param in EMISSIVE_PARAMS:
            if self.emissive is None:
                raise SceneError(f"{self.name} has no emissive settings")
            return self.emissive[param.removeprefix("emissive_")]
        if param in self.params:
            return self.params[param]
        raise SceneError(f"object {self.name!r} has no parameter {param!r}")

    def has_param(self, param: str) -> bool:
        if param in TRANSFORM_PARAMS:
            return True
        if param in EMISSIVE_PARAMS:
            return self.emissive is not None
        return param in self.params

    def set_param(self, param: str, value: Any) -> None:
        """Raw write; value typing and scale positivity are enforced here."""
        if param in TRANSFORM_PARAMS:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SceneError(f"{self.name}.{param} must be a number")
            value = float(value)
            if param in SCALE_PARAMS and value <= 0:
                raise SceneError(f"{self.name}.{param} must stay > 0, got {value}")
            self.transform[param] = value
        elif param == "emissive_color":
            if not isinstance(value, str) or not value:
                raise SceneError(f"{self.name}.emissive_color must be a non-empty string")
            self._ensure_emissive()["color"] = value
        elif param == "emissive_strength":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SceneError(f"{self.name}.emissive_strength must be a number")
            self._ensure_emissive()["strength"] = float(value)
        else:
            if not PARAM_NAME_RE.match(param):
                raise SceneError(f"bad parameter name {param!r}")
            if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                raise SceneError(f"{self.name}.{param} must be a number or string")
            self.params[param] = float(value) if isinstance(value, (int, float)) else value

    def _ensure_emissive(self) -> dict[str, Any]:
        if self.emissive is None:
            self.emissive = {"color": "#ffffff", "strength": 1.0}
        return self.emissive


@dataclass
class Scene:
    """Objects plus the binding node graph. Mutating entry points live in
    commands.apply_command, which works on a copy and commits on success."""

    objects: dict[str, SceneObject] = field(default_factory=dict)
    bindings: dict[str, tuple] = field(default_factory=dict)  # "obj.param" -> AST

    def copy(self) -> "Scene":
        return copy.deepcopy(self)

    def get_object(self, name: str) -> SceneObject:
        obj = self.objects.get(name)
        if obj is None:
            raise SceneError(f"no object named {name!r}")
        return obj

    def add_object(self, name: str, kind: str) -> SceneObject:
        if not OBJECT_NAME_RE.match(name):
            raise SceneError(f"bad object name {name!r}")
        if kind not in OBJECT_KINDS:
            raise SceneError(
                f"unknown kind {kind!r}; expected one of {', '.join(OBJECT_KINDS)}"
            )
        if name in self.objects:
            raise SceneError(f"object {name!r} already exists")
        obj = SceneObject(name=name, kind=kind)
        self.objects[name] = obj
        return obj

    def delete_object(self, name: str) -> None:
        self.get_object(name)
        # Bindings on other objects that read this object's params would
        # dangle; the dependents must be unlinked (or deleted) first.
        dependents = sorted(
            target
            for target, ast in self.bindings.items()
            if target.rsplit(".", 1)[0] != name
            and any(obj == name for obj, _ in expr_refs(ast))
        )
        if dependents:
            raise SceneError(
                f"cannot delete {name!r}: bindings depend on it: {', '.join(dependents)}"
            )
        del self.objects[name]
        self.bindings = {
            target: ast
            for target, ast in self.bindings.items()
            if target.rsplit(".", 1)[0] != name
        }

    # -- bindings ----------------------------------------------------------

    def resolve_target(self, target: str) -> tuple[SceneObject, str]:
        # Object names may contain dots; the parameter is the last segment.
        obj_name, _, param = target.rpartition(".")
        if not obj_name:
            raise SceneError(f"target {target!r} must be written object.param")
        return self.get_object(obj_name), param

    def binding_order(self, bindings: dict[str, tuple] | None = None) -> list[str]:
        """Topological order of binding targets, ties broken by name.

        Raises SceneError naming the cycle members when the graph is cyclic.
        """
        bindings = self.bindings if bindings is None else bindings
        deps: dict[str, set[str]] = {}
        for target, ast in bindings.items():
            refs = {f"{obj}.{param}" for obj, param in expr_refs(ast)}
            deps[target] = {r for r in refs if r in bindings}
        order = []
        ready = sorted(t for t, d in deps.items() if not d)
        remaining = {t: set(d) for t, d in deps.items() if d}
        while ready:
            target = ready.pop(0)
            order.append(target)
            newly = []
            for t, d in remaining.items():
                d.discard(target)
                if not d:
                    newly.append(t)
            for t in newly:
                del remaining[t]
            ready = sorted(ready + newly)
        if remaining:
            raise SceneError(f"binding cycle through: {', '.join(sorted(remaining))}")
        return order

    def set_binding(self, target: str, ast: tuple) -> None:
        """Install/replace one binding after checking refs and acyclicity."""
        obj, param = self.resolve_target(target)
        for ref_obj, ref_param in sorted(expr_refs(ast)):
            ref = self.objects.get(ref_obj)
            if ref is None:
                raise SceneError(f"expression references unknown object {ref_obj!r}")
            if not ref.has_param(ref_param):
                raise SceneError(
                    f"expression references missing parameter {ref_obj}.{ref_param}"
                )
        tentative = {**self.bindings, target: ast}
        self.binding_order(tentative)  # raises on a cycle
        if not obj.has_param(param):
            obj.set_param(param, 0.0)  # linking may introduce the parameter
        self.bindings = tentative

    def evaluate_graph(self) -> None:
        """Recompute every bound parameter in dependency order."""

        def lookup(obj_name: str, param: str) -> float:
            value = self.get_object(obj_name).get_param(param)
            if isinstance(value, str):
                raise EvalError(f"{obj_name}.{param} is a string, not a number")
            return value

        for target in self.binding_order():
            ast = self.bindings[target]
            obj, param = self.resolve_target(target)
            try:
                value = evaluate(ast, lookup)
            except EvalError as e:
                raise SceneError(
                    f"binding {target} = {format_expression(ast)} failed: {e}"
                ) from e
            obj.set_param(param, value)
