"""Stage machine and conversation-state invariants."""

import pytest

from sceneforge.chatflow import (
    ConversationState,
    SessionComplete,
    StateError,
    UnknownStageError,
    decrement_inspection,
    reset_inspection,
    set_stage,
    to_next_stage,
)

STAGES = ["Scene Analyzer", "RAG", "Conceptualization", "Builder", "Inspector"]

# Hand-written truth table for to_next_stage over the five-stage list:
# (stage_num, dirty_bit, enable_increment) -> (new_stage_num, new_dirty_bit)
# or "complete". Advancing happens only on dirty=0/enable=1; dirty is
# always consumed.
NEXT_STAGE_TABLE = [
    ((0, 0, 0), (0, 0)),
    ((0, 0, 1), (1, 0)),
    ((0, 1, 0), (0, 0)),
    ((0, 1, 1), (0, 0)),
    ((1, 0, 0), (1, 0)),
    ((1, 0, 1), (2, 0)),
    ((1, 1, 0), (1, 0)),
    ((1, 1, 1), (1, 0)),
    ((2, 0, 0), (2, 0)),
    ((2, 0, 1), (3, 0)),
    ((2, 1, 0), (2, 0)),
    ((2, 1, 1), (2, 0)),
    ((3, 0, 0), (3, 0)),
    ((3, 0, 1), (4, 0)),
    ((3, 1, 0), (3, 0)),
    ((3, 1, 1), (3, 0)),
    ((4, 0, 0), (4, 0)),
    ((4, 0, 1), "complete"),
    ((4, 1, 0), (4, 0)),
    ((4, 1, 1), (4, 0)),
]


def make_state(stage_num=0, dirty=0, enable=1, max_insp=5, remaining=5, **user):
    return ConversationState(
        stage=STAGES[stage_num],
        dirty_bit=dirty,
        enable_increment=enable,
        stage_num=stage_num,
        stages=tuple(STAGES),
        max_inspection_count=max_insp,
        remaining_inspection_count=remaining,
        user_vars=dict(user),
    ).validate()


@pytest.mark.parametrize("inputs,expected", NEXT_STAGE_TABLE)
def test_to_next_stage_truth_table(inputs, expected):
    pos, dirty, enable = inputs
    state = make_state(stage_num=pos, dirty=dirty, enable=enable)
    if expected == "complete":
        with pytest.raises(SessionComplete):
            to_next_stage(state)
        return
    new = to_next_stage(state)
    assert (new.stage_num, new.dirty_bit) == expected
    assert new.stage == STAGES[new.stage_num]
    assert new.enable_increment == enable  # untouched by the transition


def test_to_next_stage_always_clears_dirty_bit():
    for pos, dirty, enable in [(p, d, e) for p in range(4) for d in (0, 1) for e in (0, 1)]:
        new = to_next_stage(make_state(stage_num=pos, dirty=dirty, enable=enable))
        assert new.dirty_bit == 0


def test_builder_advances_to_inspector():
    # The canonical dispatch example: stage_num 3 (Builder) with a clean
    # dirty bit moves to stage_num 4 (Inspector).
    state = make_state(stage_num=3, dirty=0, enable=1)
    assert state.stage == "Builder"
    new = to_next_stage(state)
    assert new.stage_num == 4
    assert new.stage == "Inspector"


def test_set_stage_jumps_and_marks_dirty():
    state = make_state(stage_num=4, dirty=0)
    new = set_stage(state, "Builder")
    assert new.stage == "Builder"
    assert new.stage_num == 3
    assert new.dirty_bit == 1
    # The very next auto-advance consumes the dirty bit and stays put.
    after = to_next_stage(new)
    assert after.stage == "Builder"
    assert after.dirty_bit == 0


def test_set_stage_unknown_name():
    state = make_state()
    with pytest.raises(UnknownStageError) as err:
        set_stage(state, "Texture Painter")
    assert "Texture Painter" in str(err.value)
    for name in STAGES:
        assert name in str(err.value)


def test_decrement_inspection_counts_down_and_flags_budget():
    state = make_state(max_insp=3, remaining=3)
    seen = []
    for _ in range(5):
        state, at_budget = decrement_inspection(state)
        seen.append((state.remaining_inspection_count, at_budget))
    assert seen == [(2, False), (1, False), (0, True), (0, True), (0, True)]


@pytest.mark.parametrize("max_insp", range(11))
def test_decrement_reset_round_trip(max_insp):
    state = make_state(max_insp=max_insp, remaining=max_insp)
    for expected in range(max_insp - 1, -1, -1):
        state, at_budget = decrement_inspection(state)
        assert state.remaining_inspection_count == expected
        assert at_budget == (expected == 0)
    state, at_budget = decrement_inspection(state)  # no-op at zero
    assert state.remaining_inspection_count == 0
    assert at_budget
    assert reset_inspection(state).remaining_inspection_count == max_insp


def test_operations_do_not_mutate_input():
    state = make_state(stage_num=1, dirty=0, remaining=2, max_insp=5)
    to_next_stage(state)
    set_stage(state, "RAG")
    decrement_inspection(state)
    reset_inspection(state)
    assert state.stage_num == 1
    assert state.remaining_inspection_count == 2


def test_validate_rejects_inconsistent_states():
    good = make_state()
    import dataclasses

    for bad in [
        dataclasses.replace(good, stages=()),
        dataclasses.replace(good, stage_num=7),
        dataclasses.replace(good, stage_num=-1),
        dataclasses.replace(good, stage="RAG"),  # != stages[0]
        dataclasses.replace(good, dirty_bit=2),
        dataclasses.replace(good, enable_increment=-1),
        dataclasses.replace(good, max_inspection_count=-1),
        dataclasses.replace(good, remaining_inspection_count=9),
        dataclasses.replace(good, user_vars={"x": object()}),
    ]:
        with pytest.raises(StateError):
            bad.validate()


def test_with_var_type_rules():
    state = make_state()
    assert state.with_var("note", "hi").get_var("note") == "hi"
    assert state.with_var("count", 4).get_var("count") == 4
    assert state.with_var("ratio", 0.5).get_var("ratio") == 0.5
    assert state.with_var("tags", ["a", "b"]).get_var("tags") == ["a", "b"]
    assert state.with_var("dirty_bit", 1).dirty_bit == 1
    assert state.with_var("stage_num", 2.0).stage_num == 2
    with pytest.raises(StateError):
        state.with_var("note", {"nested": 1})
    with pytest.raises(StateError):
        state.with_var("flag", True)  # booleans are not conversation values
    with pytest.raises(StateError):
        state.with_var("dirty_bit", 2)
    with pytest.raises(StateError):
        state.with_var("stages", ["ok", 3])
    with pytest.raises(StateError):
        state.with_var("stage", 9)


def test_from_vars_round_trip():
    state = ConversationState.from_vars(
        {
            "stage": "RAG",
            "dirty_bit": 1,
            "enable_increment": 0,
            "stage_num": 1,
            "stages": STAGES,
            "max_inspection_count": 4,
            "remaining_inspection_count": 2,
            "note": "hello",
            "tags": ["x"],
        }
    )
    d = state.to_dict()
    assert d["stage"] == "RAG"
    assert d["stages"] == STAGES
    assert d["user_vars"] == {"note": "hello", "tags": ["x"]}
    # stage may be omitted; it defaults from the stage list.
    state2 = ConversationState.from_vars({"stages": STAGES, "stage_num": 2})
    assert state2.stage == "Conceptualization"
    with pytest.raises(StateError):
        ConversationState.from_vars({"stage_num": 0})  # stages is mandatory


def test_get_var_copies_lists():
    state = make_state(tags=["a"])
    state.get_var("stages").append("Mutant")
    assert list(state.stages) == STAGES
