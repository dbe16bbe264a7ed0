"""Configurations of robots on the circle and per-robot snapshots.

A configuration is a multiset of positions with opaque robot identities.
Identities exist only for the simulator and tests; none of the analysis
operations read them. Snapshots are what a single robot actually sees:
clockwise offsets of occupied points strictly closer than a half turn,
with weak multiplicity flags (a flag, never a count).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from .angles import HALF_TURN, cw_angle, format_angle, norm, parse_angle
from .errors import (
    ContractViolation,
    LengthMismatch,
    MultiplicityPresent,
    ParseError,
    SymmetricConfiguration,
    UnknownRobot,
)

AngleSeq = Tuple[Fraction, ...]


@dataclass(frozen=True)
class Robot:
    robot_id: str
    pos: Fraction


@dataclass(frozen=True)
class Configuration:
    robots: Tuple[Robot, ...]

    def __post_init__(self):
        ids = [r.robot_id for r in self.robots]
        if len(set(ids)) != len(ids):
            raise ContractViolation("robot ids must be unique")

    @classmethod
    def from_points(cls, points: Iterable, prefix: str = "r") -> "Configuration":
        pts = [norm(p) for p in points]
        return cls(tuple(Robot(f"{prefix}{i}", p) for i, p in enumerate(pts)))

    @classmethod
    def from_json(cls, obj) -> "Configuration":
        try:
            entries = obj["robots"]
        except (TypeError, KeyError):
            raise ParseError("configuration document must have a 'robots' list")
        if not isinstance(entries, list) or not entries:
            raise ParseError("'robots' must be a non-empty list")
        robots = []
        for e in entries:
            try:
                rid, pos = e["id"], e["pos"]
            except (TypeError, KeyError):
                raise ParseError("each robot needs 'id' and 'pos' fields")
            if not isinstance(rid, str):
                raise ParseError("robot 'id' must be a string")
            robots.append(Robot(rid, parse_angle(pos)))
        return cls(tuple(robots))

    def to_json(self) -> dict:
        return {
            "robots": [
                {"id": r.robot_id, "pos": format_angle(r.pos)} for r in self.robots
            ]
        }

    @property
    def positions(self) -> Tuple[Fraction, ...]:
        return tuple(r.pos for r in self.robots)

    @property
    def position_counts(self) -> Dict[Fraction, int]:
        return Counter(self.positions)

    @property
    def has_multiplicity(self) -> bool:
        counts = self.position_counts
        return any(c >= 2 for c in counts.values())

    def robot(self, robot_id: str) -> Robot:
        for r in self.robots:
            if r.robot_id == robot_id:
                return r
        raise UnknownRobot(f"no robot with id {robot_id!r}")


@dataclass(frozen=True)
class VisiblePoint:
    """One occupied point in a snapshot, as a clockwise offset from the observer."""

    offset: Fraction
    is_multiplicity: bool

    def __post_init__(self):
        if not 0 < self.offset < 1 or self.offset == HALF_TURN:
            raise ContractViolation(
                f"visible offset must be in (0,1) and never 1/2, got {self.offset}"
            )


@dataclass(frozen=True)
class Snapshot:
    """What one robot sees: visible occupied points plus its own-point flag."""

    visible: Tuple[VisiblePoint, ...]
    self_is_multiplicity: bool = False

    def __post_init__(self):
        offsets = [v.offset for v in self.visible]
        if len(set(offsets)) != len(offsets):
            raise ContractViolation("visible offsets must be pairwise distinct")
        object.__setattr__(
            self, "visible", tuple(sorted(self.visible, key=lambda v: v.offset))
        )

    @property
    def offsets(self) -> Tuple[Fraction, ...]:
        return tuple(v.offset for v in self.visible)

    @property
    def has_multiplicity(self) -> bool:
        return self.self_is_multiplicity or any(v.is_multiplicity for v in self.visible)

    def to_json(self) -> dict:
        return {
            "visible": [
                {"offset": format_angle(v.offset), "multiplicity": v.is_multiplicity}
                for v in self.visible
            ],
            "self_multiplicity": self.self_is_multiplicity,
        }


def _require_distinct(positions: Sequence[Fraction]) -> None:
    if len(set(positions)) != len(positions):
        raise MultiplicityPresent("operation undefined with a multiplicity point")


def gap_sequence(positions: Sequence[Fraction]) -> AngleSeq:
    """Clockwise gaps between consecutive occupied points, from the smallest position."""
    _require_distinct(positions)
    pts = sorted(norm(p) for p in positions)
    n = len(pts)
    if n == 1:
        return (Fraction(1),)
    return tuple(cw_angle(pts[i], pts[(i + 1) % n]) for i in range(n))


def angle_sequence(config: Configuration, r: Fraction) -> AngleSeq:
    """The clockwise gap sequence starting at the robot at position ``r``.

    Only defined for multiplicity-free configurations; its length equals the
    robot count and its entries sum to exactly one turn.
    """
    positions = config.positions
    _require_distinct(positions)
    r = norm(r)
    if r not in positions:
        raise UnknownRobot(f"no robot at position {format_angle(r)}")
    return sequence_from(positions, r)


def sequence_from(positions: Sequence[Fraction], r: Fraction) -> AngleSeq:
    """Gap sequence of distinct ``positions`` starting at ``r`` (assumed present)."""
    ordered = [r] + sorted(
        (p for p in positions if p != r), key=lambda p: cw_angle(r, p)
    )
    n = len(ordered)
    return tuple(cw_angle(ordered[i], ordered[(i + 1) % n]) for i in range(n))


def lex_compare(a: AngleSeq, b: AngleSeq) -> int:
    """-1, 0 or 1 as ``a`` is lexicographically smaller, equal or greater."""
    if len(a) != len(b):
        raise LengthMismatch(f"cannot compare sequences of lengths {len(a)} and {len(b)}")
    ta, tb = tuple(a), tuple(b)
    if ta == tb:
        return 0
    return -1 if ta < tb else 1


def is_rotationally_symmetric(config) -> bool:
    """True iff some nontrivial rotation maps the configuration onto itself."""
    positions = config.positions if isinstance(config, Configuration) else tuple(config)
    gaps = gap_sequence(positions)
    return _gaps_have_period(gaps)


def _gaps_have_period(gaps: AngleSeq) -> bool:
    n = len(gaps)
    doubled = gaps + gaps
    return any(doubled[k : k + n] == gaps for k in range(1, n))


def true_leader(config) -> Fraction:
    """Position of the robot with the strictly smallest gap sequence."""
    positions = config.positions if isinstance(config, Configuration) else tuple(config)
    _require_distinct(positions)
    if is_rotationally_symmetric(positions):
        raise SymmetricConfiguration("no unique leader in a symmetric configuration")
    return leader_of_positions(positions)


def leader_of_positions(positions: Sequence[Fraction]) -> Fraction:
    """Leader election over distinct positions, assuming asymmetry was checked."""
    best_pos = None
    best_seq = None
    for p in positions:
        seq = sequence_from(positions, p)
        if best_seq is None or seq < best_seq:
            best_pos, best_seq = p, seq
    return best_pos


def take_snapshot(config: Configuration, observer: str) -> Snapshot:
    """Build the observer's view: occupied points strictly closer than a half turn.

    The antipodal point is excluded even if occupied. Coincident robots
    collapse to one visible point with a multiplicity flag; the observer's
    own point only contributes ``self_is_multiplicity``.
    """
    me = config.robot(observer)
    counts = config.position_counts
    visible = []
    for pos, count in counts.items():
        if pos == me.pos:
            continue
        off = cw_angle(me.pos, pos)
        if off == HALF_TURN:
            continue
        visible.append(VisiblePoint(off, count >= 2))
    return Snapshot(tuple(visible), counts[me.pos] >= 2)


def snapshot_of_positions(positions: Sequence[Fraction], observer_pos: Fraction) -> Snapshot:
    """Snapshot seen from ``observer_pos`` in a raw multiset of positions."""
    counts = Counter(norm(p) for p in positions)
    me = norm(observer_pos)
    if me not in counts:
        raise UnknownRobot(f"no robot at position {format_angle(me)}")
    visible = []
    for pos, count in counts.items():
        if pos == me:
            continue
        off = cw_angle(me, pos)
        if off == HALF_TURN:
            continue
        visible.append(VisiblePoint(off, count >= 2))
    return Snapshot(tuple(visible), counts[me] >= 2)


def require_legal_initial(config: Configuration) -> None:
    """Reject configurations that are not legal starting points for a run."""
    positions = config.positions
    _require_distinct(positions)
    if len(positions) > 1 and is_rotationally_symmetric(positions):
        raise SymmetricConfiguration("initial configuration must be asymmetric")
