"""Prints one PASS/FAIL line per release criterion after a run that
includes test_acceptance.py."""

ACCEPTANCE_FILE = "test_acceptance.py"

CRITERIA = {
    "test_chatflow_agreement": (
        "chatflow: 200 randomized workflows match the reference interpreter, "
        "turn-isolated, in under 10s"
    ),
    "test_stage_machine": (
        "stage machine: exhaustive (position, dirty, enable) truth table; "
        "to_next_stage always clears the dirty bit"
    ),
    "test_inspection_budget": (
        "loop budget: always-failing inspector spends exactly its budget "
        "for max_inspection_count in 0..10"
    ),
    "test_mcp_conformance": (
        "mcp: 100+ request golden transcript byte-identical across runs; "
        "decode survives 100k fuzzed lines"
    ),
    "test_scene_graph": (
        "scene graph: 100 random binding sets match the fixed-point oracle; "
        "wall/roof propagation; cycles rejected without mutation"
    ),
    "test_feedback_loop": (
        "feedback loop: every monotone selection sequence for n in 1..6 ends "
        "within n rounds with selections bit-preserved"
    ),
    "test_planner_scopes_and_budget": (
        "planner: scopes equal independent min/max and contain the selection; "
        "retry budget formula holds over complexity 0..100"
    ),
    "test_rag_retrieval": (
        "rag: 1000-chunk corpus, 50 queries identical to the brute-force "
        "scorer; exact child text scores 1.0 at rank 1"
    ),
    "test_end_to_end_replay": (
        "end to end: cli replay scenarios/pc-demo exits 0 with golden "
        "snapshots in under 30s"
    ),
}

_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _outcomes[name] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in CRITERIA.items():
        outcome = _outcomes.get(name)
        status = {"passed": "PASS", "failed": "FAIL", None: "NOT RUN"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"[{status}] {label}")
