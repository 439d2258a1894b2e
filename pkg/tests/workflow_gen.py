"""Seeded random single-turn workflow programs for agreement testing.

Generates valid workflow documents with a linear backbone (node i chains
to i+1) plus random branch jumps, both forward and occasionally backward,
so runs can succeed, fail at a node, hit the visit budget, or signal
session completion. Both interpreters must agree on all of it.
"""

from __future__ import annotations

import random
from typing import Any

STAGE_POOL = ["Scene Analyzer", "RAG", "Conceptualization", "Builder", "Inspector"]
NOTE_POOL = ["alpha", "beta", "gamma", ""]
TAG_POOL = [["a"], ["a", "b"], [], ["x", "y", "z"]]
ROLE_POOL = ["scene_analyzer", "builder", "inspector", "planner"]
TOOL_POOL = ["run_cmd_on_default_console", "echo", "probe"]
REF_POOL = ["input", "note", "count", "stage", "dirty_bit", "missing_thing"]


def deterministic_services():
    """Pure callback bundle shared by both interpreters under test."""

    def agent(role: str, context: list[dict[str, Any]]) -> str:
        content = "".join(m["content"] for m in context)
        if role == "inspector":
            return "pass" if len(content) % 2 == 0 else "fail"
        return f"{role}:{len(content)}"

    def retrieval(query: str, k: int) -> list[str]:
        return [f"{query[:12]}#{i}" for i in range(k)]

    def tool(name: str, args: dict[str, Any]) -> dict[str, Any]:
        body = ",".join(f"{k}={args[k]!r}" for k in sorted(args))
        return {"output": f"{name}({body})"}

    return agent, retrieval, tool


def _source(rng: random.Random, scratch_outs: list[str]) -> dict:
    roll = rng.random()
    if roll < 0.55:
        return {"value": rng.choice([0, 1, 2, "alpha", "beta", 3.5])}
    pool = REF_POOL + scratch_outs
    return {"ref": rng.choice(pool)}


def generate_workflow_doc(rng: random.Random) -> dict:
    stages = rng.sample(STAGE_POOL, rng.randint(2, 5))
    stage_num = rng.randrange(len(stages))
    max_insp = rng.randint(0, 5)
    conversation_variables = {
        "stage": stages[stage_num],
        "dirty_bit": rng.choice([0, 1]),
        "enable_increment": rng.choice([0, 1]),
        "stage_num": stage_num,
        "stages": stages,
        "max_inspection_count": max_insp,
        "remaining_inspection_count": rng.randint(0, max_insp),
        "note": rng.choice(NOTE_POOL),
        "count": rng.randint(0, 3),
        "tags": rng.choice(TAG_POOL),
    }

    body_len = rng.randint(3, 10)
    final = body_len + 1
    nodes: list[dict] = [{"id": "n0", "kind": "start"}]
    edges: list[dict] = []
    scratch_outs: list[str] = []
    forced: dict[int, dict] = {}

    for i in range(1, body_len + 1):
        nid = f"n{i}"
        if i in forced:
            nodes.append({"id": nid, "kind": "assigner", "config": forced.pop(i)})
            edges.append({"from": nid, "to": f"n{i + 1}"})
            continue
        kind = rng.choice(
            ["assigner", "function", "branch", "agent_call", "retrieval", "tool_call"]
        )
        if kind == "assigner":
            assign = []
            for _ in range(rng.randint(1, 2)):
                target = rng.choice(["note", "count", "tags", "dirty_bit", "enable_increment"])
                if rng.random() < 0.7:
                    value = {
                        "note": rng.choice(NOTE_POOL),
                        "count": rng.randint(0, 9),
                        "tags": rng.choice(TAG_POOL),
                        "dirty_bit": rng.choice([0, 1]),
                        "enable_increment": rng.choice([0, 1]),
                    }[target]
                    assign.append({"var": target, "from": {"value": value}})
                else:
                    assign.append({"var": target, "from": _source(rng, scratch_outs)})
            nodes.append({"id": nid, "kind": "assigner", "config": {"assign": assign}})
            edges.append({"from": nid, "to": f"n{i + 1}"})
        elif kind == "function":
            fn = rng.choice(
                ["to_next_stage", "set_stage", "decrement_inspection", "reset_inspection"]
            )
            out = f"f{i}"
            cfg: dict = {"fn": fn, "out": out}
            if fn == "set_stage":
                name = rng.choice(stages + ["Nonexistent"]) if rng.random() < 0.3 else rng.choice(stages)
                cfg["args"] = {"stage": {"value": name}}
            nodes.append({"id": nid, "kind": "function", "config": cfg})
            edges.append({"from": nid, "to": f"n{i + 1}"})
            scratch_outs.append(out)
            if i + 1 <= body_len and rng.random() < 0.8:
                if fn in ("to_next_stage", "set_stage"):
                    forced[i + 1] = {
                        "assign": [
                            {"var": "stage_num", "from": {"ref": f"{out}.stage_num"}},
                            {"var": "stage", "from": {"ref": f"{out}.stage"}},
                            {"var": "dirty_bit", "from": {"ref": f"{out}.dirty_bit"}},
                        ]
                    }
                else:
                    forced[i + 1] = {
                        "assign": [
                            {
                                "var": "remaining_inspection_count",
                                "from": {"ref": f"{out}.remaining_inspection_count"},
                            }
                        ]
                    }
        elif kind == "branch":
            subject = rng.choice(
                [{"ref": rng.choice(REF_POOL + scratch_outs)}, {"ref": "stage"}]
            )
            pool: list[Any] = [0, 1, 2, "alpha", "pass", "fail"] + stages
            n_cases = rng.randint(1, 3)
            cases: list[Any] = []
            for c in rng.sample(pool, n_cases * 2):
                if all(repr(c) != repr(x) for x in cases):
                    cases.append(c)
                if len(cases) == n_cases:
                    break
            cfg = {"on": subject, "cases": cases}
            if rng.random() < 0.3:
                cfg["strict"] = True
            nodes.append({"id": nid, "kind": "branch", "config": cfg})
            edges.append({"from": nid, "to": f"n{i + 1}"})  # default keeps the chain
            for c in cases:
                if rng.random() < 0.12 and i > 1:
                    target = rng.randint(1, i - 1)  # backward jump, may cycle
                else:
                    target = rng.randint(i + 1, final)
                edges.append({"from": nid, "case": c, "to": f"n{target}"})
        elif kind == "agent_call":
            out = f"a{i}"
            nodes.append(
                {
                    "id": nid,
                    "kind": "agent_call",
                    "config": {
                        "role": rng.choice(ROLE_POOL),
                        "prompt": {"ref": rng.choice(["input", "note"])},
                        "out": out,
                    },
                }
            )
            edges.append({"from": nid, "to": f"n{i + 1}"})
            scratch_outs.append(out)
        elif kind == "retrieval":
            out = f"r{i}"
            nodes.append(
                {
                    "id": nid,
                    "kind": "retrieval",
                    "config": {"query": {"ref": "input"}, "k": rng.randint(1, 4), "out": out},
                }
            )
            edges.append({"from": nid, "to": f"n{i + 1}"})
            scratch_outs.append(out)
        else:
            out = f"t{i}"
            nodes.append(
                {
                    "id": nid,
                    "kind": "tool_call",
                    "config": {
                        "tool": rng.choice(TOOL_POOL),
                        "args": {"x": _source(rng, scratch_outs)},
                        "out": out,
                    },
                }
            )
            edges.append({"from": nid, "to": f"n{i + 1}"})
            scratch_outs.append(out)

    template = rng.choice(
        [
            "done",
            "stage={{stage}} num={{stage_num}}",
            "echo {{input}}",
            "note={{note}} count={{count}}",
        ]
    )
    nodes.append({"id": f"n{final}", "kind": "answer", "config": {"template": template}})
    edges.insert(0, {"from": "n0", "to": "n1"})
    return {
        "start": "n0",
        "conversation_variables": conversation_variables,
        "nodes": nodes,
        "edges": edges,
    }
