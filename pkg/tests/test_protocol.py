import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from circlegather.angles import HALF_TURN, QUARTER_TURN
from circlegather.configuration import (
    Configuration,
    Snapshot,
    VisiblePoint,
    take_snapshot,
)
from circlegather.errors import ContractViolation
from circlegather.protocol import (
    CCW,
    CW,
    LEGAL_TRANSITIONS,
    Memory,
    MoveCommand,
    NONE,
    STAY,
    decide,
)

FIXTURES = Path(__file__).parent / "fixtures"


def F(s):
    return Fraction(s)


def snap(*entries, self_mult=False):
    return Snapshot(
        tuple(VisiblePoint(F(o), m) for o, m in entries), self_mult
    )


def load_fixture(name):
    with open(FIXTURES / f"{name}.json") as fh:
        return Configuration.from_json(json.load(fh))


def test_move_command_validation():
    with pytest.raises(ContractViolation):
        MoveCommand(CW, 0)
    with pytest.raises(ContractViolation):
        MoveCommand(NONE, F("1/4"))
    with pytest.raises(ContractViolation):
        MoveCommand(CW, 1)
    assert not STAY.is_move
    assert MoveCommand(CW, F("1/4")).is_move


def test_empty_view_moves_quarter_turn():
    for state in Memory:
        new_state, cmd = decide(Snapshot(()), state)
        assert new_state is state
        assert cmd == MoveCommand(CW, QUARTER_TURN)


def test_own_multiplicity_walks_to_close_second_point():
    # Second multiplicity at clockwise distance 1/5 < 1/4.
    s = snap(("1/5", True), ("3/5", False), self_mult=True)
    for state in Memory:
        new_state, cmd = decide(s, state)
        assert new_state is state
        assert cmd.direction == CW and cmd.amount == F("1/5")


def test_own_multiplicity_threshold_default_and_wide():
    s = snap(("3/10", True), self_mult=True)
    _, cmd = decide(s, Memory.OFF)
    assert cmd == STAY
    _, cmd = decide(s, Memory.OFF, multiplicity_threshold=HALF_TURN)
    assert cmd.direction == CW and cmd.amount == F("3/10")


def test_own_multiplicity_stays_without_second_point():
    s = snap(("1/5", False), self_mult=True)
    assert decide(s, Memory.OFF) == (Memory.OFF, STAY)


def test_neighbor_multiplicity_clockwise():
    s = snap(("1/10", True), ("2/5", False))
    state, cmd = decide(s, Memory.TERMINATE)
    assert state is Memory.TERMINATE
    assert cmd.direction == CW and cmd.amount == F("1/10")


def test_neighbor_multiplicity_counterclockwise_shorter_arc():
    s = snap(("2/5", False), ("9/10", True))
    _, cmd = decide(s, Memory.OFF)
    assert cmd.direction == CCW and cmd.amount == F("1/10")


def test_neighbor_multiplicity_tie_breaks_clockwise():
    s = snap(("1/10", True), ("9/10", True))
    _, cmd = decide(s, Memory.OFF)
    assert cmd.direction == CW and cmd.amount == F("1/10")


def test_distant_multiplicity_is_not_chased():
    # The multiplicity is visible but is neither the first clockwise nor the
    # first counter-clockwise neighbor.
    s = snap(("1/10", False), ("2/5", True), ("9/10", False))
    assert decide(s, Memory.OFF) == (Memory.OFF, STAY)


def test_follower_stays():
    cfg = load_fixture("worked_example")
    for rid in ("r1", "r2", "r3"):
        assert decide(take_snapshot(cfg, rid), Memory.OFF) == (Memory.OFF, STAY)


def test_sure_leader_moves_to_neighbor():
    cfg = load_fixture("class_A_sure")
    # True leader of this fixture is r0 at 1/40 with its neighbor at 1/20.
    state, cmd = decide(take_snapshot(cfg, "r0"), Memory.OFF)
    assert state is Memory.OFF
    assert cmd.direction == CW and cmd.amount == F("1/40")
    assert cmd.target_kind == "neighbor-position"


def test_confused_safe_leader_moves_to_neighbor():
    cfg = load_fixture("worked_example")
    state, cmd = decide(take_snapshot(cfg, "r0"), Memory.OFF)
    assert state is Memory.OFF
    assert cmd.direction == CW and cmd.amount == F("1/10")


def test_confused_unsafe_leader_starts_the_dance():
    cfg = load_fixture("class_C")
    from circlegather.analysis import expected_leaders

    (rid, _), = expected_leaders(cfg)
    s = take_snapshot(cfg, rid)
    leading = min(s.offsets)
    state, cmd = decide(s, Memory.OFF)
    assert state is Memory.MOVE_HALF
    assert cmd.direction == CW and cmd.amount == leading / 2


def test_confused_unsafe_with_confused_peer_stays():
    cfg = load_fixture("class_BII")
    from circlegather.analysis import LeaderTag, classify, is_safe_neighbor

    moved = []
    for r in cfg.robots:
        s = take_snapshot(cfg, r.robot_id)
        if classify(s).tag is LeaderTag.CONFUSED_LEADER and not is_safe_neighbor(s):
            moved.append(decide(s, Memory.OFF))
    assert moved, "fixture must contain an unsafe confused leader"
    assert any(out == (Memory.OFF, STAY) for out in moved)


def test_move_half_terminates_when_neighbor_is_not_antipodal():
    s = snap(("1/20", False), ("3/10", False))
    assert decide(s, Memory.MOVE_HALF) == (Memory.TERMINATE, STAY)


def test_move_half_advances_when_probe_arc_is_empty():
    s = snap(("1/20", False), ("11/20", False))
    state, cmd = decide(s, Memory.MOVE_HALF)
    assert state is Memory.MOVE_MORE
    assert cmd.direction == CW and cmd.amount == F("1/40")


def test_move_half_counters_when_probe_arc_is_occupied():
    s = snap(("1/20", False), ("19/40", False), ("11/20", False))
    state, cmd = decide(s, Memory.MOVE_HALF)
    assert state is Memory.TERMINATE
    assert cmd.direction == CCW and cmd.amount == F("1/20")


def test_move_more_terminates_when_neighbor_is_not_antipodal():
    s = snap(("1/40", False), ("3/10", False))
    assert decide(s, Memory.MOVE_MORE) == (Memory.TERMINATE, STAY)


def test_move_more_walks_onto_neighbor_when_probe_arc_is_empty():
    s = snap(("1/40", False), ("21/40", False))
    state, cmd = decide(s, Memory.MOVE_MORE)
    assert state is Memory.OFF
    assert cmd.direction == CW and cmd.amount == F("1/40")
    assert cmd.target_kind == "neighbor-position"


def test_move_more_counters_when_probe_arc_is_occupied():
    s = snap(("1/40", False), ("9/20", False), ("21/40", False))
    state, cmd = decide(s, Memory.MOVE_MORE)
    assert state is Memory.TERMINATE
    assert cmd.direction == CCW and cmd.amount == F("3/40")


def test_countermoves_cancel_exactly():
    """Walking the dance forward then countering restores the start point."""
    start = F("1/4")
    theta = F("1/10")
    # off -> moveHalf: advance theta/2.
    after_half = (start + theta / 2) % 1
    # Reading the leading angle as theta/2, the counter is that same amount.
    assert (after_half - theta / 2) % 1 == start
    # moveHalf -> moveMore: advance another theta/4, counter is 3*theta/4.
    after_more = (after_half + theta / 4) % 1
    assert (after_more - 3 * theta / 4) % 1 == start


def test_terminate_state_is_inert_without_multiplicity():
    s = snap(("1/10", False), ("2/5", False))
    assert decide(s, Memory.TERMINATE) == (Memory.TERMINATE, STAY)


offset_sets = st.lists(
    st.builds(Fraction, st.integers(min_value=1, max_value=39), st.just(40)).filter(
        lambda f: f != HALF_TURN
    ),
    min_size=0,
    max_size=6,
    unique=True,
)


@given(offset_sets, st.sampled_from(list(Memory)), st.booleans())
def test_decide_is_total_legal_and_bounded(offsets, state, flag_first):
    entries = tuple(
        VisiblePoint(o, flag_first and i == 0) for i, o in enumerate(sorted(offsets))
    )
    s = Snapshot(entries)
    try:
        new_state, cmd = decide(s, state)
    except Exception as exc:  # classification aborts on symmetric views
        from circlegather.errors import CircleGatherError

        assert isinstance(exc, CircleGatherError)
        return
    assert (state, new_state) in LEGAL_TRANSITIONS
    assert 0 <= cmd.amount < HALF_TURN or (not offsets and cmd.amount == QUARTER_TURN)
    # Deterministic: the same inputs always produce the same decision.
    assert decide(s, state) == (new_state, cmd)
