"""The robot's compute step: a pure map from (view, state) to (state, move).

State is the whole persistent memory: one of four values, no angles and no
counters. The decision tree routes on multiplicity first, then on state.
Robots at or next to a multiplicity point move regardless of state; the
staged half/quarter approach below only runs while no multiplicity is
visible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .angles import HALF_TURN, QUARTER_TURN, Arc
from .analysis import (
    LeaderTag,
    classify,
    detect_confused_peer_in_c0,
    is_safe_neighbor,
)
from .configuration import Snapshot
from .errors import ContractViolation, InvariantViolation


class Memory(enum.Enum):
    OFF = "off"
    MOVE_HALF = "moveHalf"
    MOVE_MORE = "moveMore"
    TERMINATE = "terminate"


#: Transitions the state machine may ever take (multiplicity-phase moves and
#: self-loops keep the state unchanged).
LEGAL_TRANSITIONS = {
    (Memory.OFF, Memory.OFF),
    (Memory.OFF, Memory.MOVE_HALF),
    (Memory.MOVE_HALF, Memory.TERMINATE),
    (Memory.MOVE_HALF, Memory.MOVE_MORE),
    (Memory.MOVE_MORE, Memory.TERMINATE),
    (Memory.MOVE_MORE, Memory.OFF),
    (Memory.MOVE_HALF, Memory.MOVE_HALF),
    (Memory.MOVE_MORE, Memory.MOVE_MORE),
    (Memory.TERMINATE, Memory.TERMINATE),
}

CW = "clockwise"
CCW = "counterclockwise"
NONE = "none"


@dataclass(frozen=True)
class MoveCommand:
    direction: str
    amount: Fraction
    target_kind: str = "relative-angle"

    def __post_init__(self):
        object.__setattr__(self, "amount", Fraction(self.amount))
        if (self.direction == NONE) != (self.amount == 0):
            raise ContractViolation("amount must be positive iff the robot moves")
        if not 0 <= self.amount < 1:
            raise ContractViolation("no full-circle moves")

    @property
    def is_move(self) -> bool:
        return self.direction != NONE

    def to_json(self) -> dict:
        from .angles import format_angle

        return {
            "direction": self.direction,
            "amount": format_angle(self.amount),
            "target_kind": self.target_kind,
        }


STAY = MoveCommand(NONE, 0)


def decide(
    snapshot: Snapshot,
    memory: Memory,
    multiplicity_threshold: Fraction = QUARTER_TURN,
) -> Tuple[Memory, MoveCommand]:
    """One compute step. Total over legal snapshots and deterministic.

    ``multiplicity_threshold`` bounds the clockwise distance at which a robot
    already sitting on a multiplicity point walks to another one; 1/4 by
    default, 1/2 selectable.
    """
    if snapshot.self_is_multiplicity:
        return memory, _from_own_multiplicity(snapshot, multiplicity_threshold)
    if any(v.is_multiplicity for v in snapshot.visible):
        return memory, _toward_neighbor_multiplicity(snapshot)
    if not snapshot.visible:
        # Nothing visible at all: quarter turn clockwise, state unchanged.
        return memory, MoveCommand(CW, QUARTER_TURN)
    if memory is Memory.OFF:
        return _decide_off(snapshot)
    if memory is Memory.MOVE_HALF:
        return _decide_staged(snapshot, Memory.MOVE_HALF)
    if memory is Memory.MOVE_MORE:
        return _decide_staged(snapshot, Memory.MOVE_MORE)
    return Memory.TERMINATE, STAY


def _from_own_multiplicity(snapshot: Snapshot, threshold: Fraction) -> MoveCommand:
    """Observer sits on a multiplicity point; maybe walk to a nearby second one."""
    candidates = [
        v.offset
        for v in snapshot.visible
        if v.is_multiplicity and v.offset < threshold
    ]
    if not candidates:
        return STAY
    return MoveCommand(CW, min(candidates), "multiplicity-position")


def _toward_neighbor_multiplicity(snapshot: Snapshot) -> MoveCommand:
    """Observer is off every multiplicity point; join one if it is a direct neighbor.

    Movement follows the shorter arc, which stays below a half turn because
    the point is visible. Equal distances break clockwise.
    """
    first_cw = min(snapshot.visible, key=lambda v: v.offset)
    first_ccw = max(snapshot.visible, key=lambda v: v.offset)
    options = []
    if first_cw.is_multiplicity:
        off = first_cw.offset
        if off < HALF_TURN:
            options.append((off, MoveCommand(CW, off, "multiplicity-position")))
        else:
            options.append((1 - off, MoveCommand(CCW, 1 - off, "multiplicity-position")))
    if first_ccw.is_multiplicity and first_ccw is not first_cw:
        off = first_ccw.offset
        if off < HALF_TURN:
            options.append((off, MoveCommand(CW, off, "multiplicity-position")))
        else:
            options.append((1 - off, MoveCommand(CCW, 1 - off, "multiplicity-position")))
    if not options:
        return STAY
    options.sort(key=lambda o: (o[0], o[1].direction != CW))
    return options[0][1]


def _decide_off(snapshot: Snapshot) -> Tuple[Memory, MoveCommand]:
    cls = classify(snapshot)
    if cls.tag is LeaderTag.FOLLOWER:
        return Memory.OFF, STAY
    leading = min(snapshot.offsets)
    if cls.tag is LeaderTag.SURE_LEADER:
        return Memory.OFF, _checked_step(CW, leading, "neighbor-position")
    if is_safe_neighbor(snapshot):
        return Memory.OFF, _checked_step(CW, leading, "neighbor-position")
    if detect_confused_peer_in_c0(snapshot):
        return Memory.OFF, STAY
    return Memory.MOVE_HALF, _checked_step(CW, leading / 2)


def _decide_staged(snapshot: Snapshot, memory: Memory) -> Tuple[Memory, MoveCommand]:
    """The staged approach toward an ambiguity-breaking position.

    The first clockwise neighbor counts as antipodal when its own antipode is
    occupied by a visible robot; only then does the dance continue. The arc
    probed for interference is centered on the observer's (invisible)
    antipodal point, so it sits at offset 1/2 in the view frame.
    """
    leading = min(snapshot.offsets)
    neighbor_antipode_occupied = ((leading + HALF_TURN) % 1) in set(snapshot.offsets)
    if not neighbor_antipode_occupied:
        return Memory.TERMINATE, STAY
    if memory is Memory.MOVE_HALF:
        # Current leading angle is half the original step budget.
        half = leading
        arc = Arc(HALF_TURN - half, 2 * half, "[)")
        if any(off in arc for off in snapshot.offsets):
            return Memory.TERMINATE, _checked_step(CCW, half)
        return Memory.MOVE_MORE, _checked_step(CW, half / 2)
    quarter = leading
    # An extent of a full turn or more always contains the neighbor itself.
    arc = Arc(HALF_TURN - 3 * quarter, min(4 * quarter, Fraction(1)), "[)")
    if any(off in arc for off in snapshot.offsets):
        return Memory.TERMINATE, _checked_step(CCW, 3 * quarter)
    return Memory.OFF, _checked_step(CW, quarter, "neighbor-position")


def _checked_step(direction: str, amount: Fraction, kind: str = "relative-angle") -> MoveCommand:
    if amount >= HALF_TURN:
        raise InvariantViolation(
            f"leader or staged move of {amount} exceeds the visibility bound"
        )
    return MoveCommand(direction, amount, kind)
