"""Single-turn workflow interpreter.

Executes nodes from the start node until an answer node fires. Everything
computed during the turn lives in a scratch namespace that is thrown away
at turn end; only conversation-variable writes performed by assigner
nodes survive into the returned state. Service callbacks (retrieval,
agent, tool) are injected so the engine stays deterministic under test.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable

from . import state as ops
from .state import ChatflowError, ConversationState, SessionComplete
from .workflow import DEFAULT, Node, Workflow, case_label

DEFAULT_NODE_BUDGET = 1000

_TEMPLATE_RE = re.compile(r"\{\{\s*([A-Za-z_][A-Za-z0-9_.]*)\s*\}\}")


class TurnError(ChatflowError):
    """A node failed during the turn; carries the node id."""

    def __init__(self, node_id: str, message: str):
        super().__init__(f"node {node_id!r}: {message}")
        self.node_id = node_id


class BudgetExceeded(TurnError):
    """The per-turn node-visit budget was exhausted (runaway loop)."""


@dataclass
class ServiceBundle:
    """Callbacks a workflow may invoke during a turn.

    retrieval(query, k) -> list of hit texts
    agent(role, context) -> reply text
    tool(name, args) -> result value
    """

    retrieval: Callable[[str, int], list[str]] | None = None
    agent: Callable[[str, list[dict[str, Any]]], str] | None = None
    tool: Callable[[str, dict[str, Any]], Any] | None = None


@dataclass
class TurnResult:
    output_text: str
    new_state: ConversationState
    trace: list[str] = field(default_factory=list)


def _resolve(source: dict[str, Any], scratch: dict[str, Any], state: ConversationState) -> Any:
    """Resolve a {"ref"}/{"value"} source against scratch then state."""
    if "value" in source:
        return source["value"]
    ref = source["ref"]
    head, _, rest = ref.partition(".")
    if head in scratch:
        value = scratch[head]
    elif state.has_var(head):
        value = state.get_var(head)
    else:
        raise KeyError(ref)
    for part in rest.split(".") if rest else ():
        if isinstance(value, dict) and part in value:
            value = value[part]
        else:
            raise KeyError(ref)
    return value


def _render_template(template: str, scratch: dict[str, Any], state: ConversationState) -> str:
    def sub(m: re.Match) -> str:
        value = _resolve({"ref": m.group(1)}, scratch, state)
        return value if isinstance(value, str) else str(value)

    return _TEMPLATE_RE.sub(sub, template)


def _run_function(node: Node, state: ConversationState, args: dict[str, Any]) -> dict[str, Any]:
    fn = node.config["fn"]
    if fn == "to_next_stage":
        new = ops.to_next_stage(state)
        return {"stage_num": new.stage_num, "stage": new.stage, "dirty_bit": new.dirty_bit}
    if fn == "set_stage":
        new = ops.set_stage(state, args["stage"])
        return {"stage_num": new.stage_num, "stage": new.stage, "dirty_bit": new.dirty_bit}
    if fn == "decrement_inspection":
        new, at_budget = ops.decrement_inspection(state)
        return {
            "remaining_inspection_count": new.remaining_inspection_count,
            "at_budget": at_budget,
        }
    if fn == "reset_inspection":
        new = ops.reset_inspection(state)
        return {"remaining_inspection_count": new.remaining_inspection_count}
    raise AssertionError(f"unreachable function {fn!r}")


def run_turn(
    workflow: Workflow,
    state: ConversationState,
    user_input: str,
    services: ServiceBundle | None = None,
    max_visits: int = DEFAULT_NODE_BUDGET,
) -> TurnResult:
    """Execute one turn and return its answer text, new state, and trace.

    Raises BudgetExceeded on runaway intra-turn loops, TurnError when a
    node or service callback fails, and lets SessionComplete propagate
    unchanged (it is a control signal for the session pipeline, raised
    when to_next_stage runs past the final stage).
    """
    state.validate()
    services = services or ServiceBundle()
    scratch: dict[str, Any] = {}
    working = state
    trace: list[str] = []
    current = workflow.start_node
    visits = 0

    while True:
        visits += 1
        if visits > max_visits:
            raise BudgetExceeded(current, f"node-visit budget of {max_visits} exceeded")
        node = workflow.nodes[current]
        trace.append(current)

        if node.kind == "start":
            scratch[node.config.get("out", "input")] = user_input
            current = workflow.out_edge(current)
        elif node.kind == "answer":
            try:
                output = _render_template(node.config["template"], scratch, working)
            except KeyError as e:
                raise TurnError(current, f"template references unknown value {e}") from e
            try:
                working.validate()
            except ChatflowError as e:
                raise TurnError(current, f"final state invalid: {e}") from e
            return TurnResult(output_text=output, new_state=working, trace=trace)
        elif node.kind == "assigner":
            for item in node.config["assign"]:
                try:
                    value = _resolve(item["from"], scratch, working)
                except KeyError as e:
                    raise TurnError(current, f"assign source missing: {e}") from e
                try:
                    working = working.with_var(item["var"], value)
                except ChatflowError as e:
                    raise TurnError(current, str(e)) from e
            current = workflow.out_edge(current)
        elif node.kind == "function":
            try:
                args = {
                    k: _resolve(v, scratch, working)
                    for k, v in node.config.get("args", {}).items()
                }
                scratch[node.config["out"]] = _run_function(node, working, args)
            except SessionComplete:
                raise
            except KeyError as e:
                raise TurnError(current, f"function argument missing: {e}") from e
            except ChatflowError as e:
                raise TurnError(current, str(e)) from e
            current = workflow.out_edge(current)
        elif node.kind == "branch":
            try:
                value = _resolve(node.config["on"], scratch, working)
            except KeyError as e:
                raise TurnError(current, f"branch subject missing: {e}") from e
            label = case_label(node, value)
            if label is None:
                if node.config.get("strict", False):
                    raise TurnError(
                        current,
                        f"value {value!r} matches no case "
                        f"{node.config['cases']!r} on a strict branch",
                    )
                label = DEFAULT
            current = workflow.edges[(node.id, label)]
        elif node.kind == "retrieval":
            if services.retrieval is None:
                raise TurnError(current, "no retrieval service configured")
            try:
                query = _resolve(node.config["query"], scratch, working)
                hits = services.retrieval(str(query), node.config.get("k", 3))
            except KeyError as e:
                raise TurnError(current, f"query source missing: {e}") from e
            except Exception as e:
                raise TurnError(current, f"retrieval failed: {e}") from e
            scratch[node.config["out"]] = list(hits)
            current = workflow.out_edge(current)
        elif node.kind == "agent_call":
            if services.agent is None:
                raise TurnError(current, "no agent service configured")
            try:
                prompt = _resolve(node.config["prompt"], scratch, working)
                context = [{"role": "user", "content": str(prompt)}]
                reply = services.agent(node.config["role"], context)
            except KeyError as e:
                raise TurnError(current, f"prompt source missing: {e}") from e
            except Exception as e:
                raise TurnError(current, f"agent call failed: {e}") from e
            scratch[node.config["out"]] = reply
            current = workflow.out_edge(current)
        elif node.kind == "tool_call":
            if services.tool is None:
                raise TurnError(current, "no tool service configured")
            try:
                args = {
                    k: _resolve(v, scratch, working)
                    for k, v in node.config.get("args", {}).items()
                }
                result = services.tool(node.config["tool"], args)
            except KeyError as e:
                raise TurnError(current, f"tool argument missing: {e}") from e
            except Exception as e:
                raise TurnError(current, f"tool call failed: {e}") from e
            scratch[node.config["out"]] = result
            current = workflow.out_edge(current)
        else:
            raise AssertionError(f"unreachable node kind {node.kind!r}")
