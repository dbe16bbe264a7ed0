"""Exact angular arithmetic on the unit circle.

Angles are rational numbers of turns, normalised to [0, 1). One turn is 1,
so the half turn is exactly 1/2 and every derived quantity (half and
quarter steps, arc endpoints) stays closed under rational arithmetic.
Nothing in here touches floating point: antipodality, coincidence and
symmetry must be decidable exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Union

from .errors import ParseError

Rational = Union[Fraction, int, str]

HALF_TURN = Fraction(1, 2)
QUARTER_TURN = Fraction(1, 4)

#: Allowed closure markers for :class:`Arc`, clockwise from ``start``.
CLOSURES = ("[]", "[)", "()", "(]")

_ANGLE_RE = re.compile(r"^\s*(\d+)\s*/\s*([1-9]\d*)\s*$")


def norm(x: Rational) -> Fraction:
    """Canonical representative of ``x`` in [0, 1)."""
    return Fraction(x) % 1


def cw_angle(a: Rational, b: Rational) -> Fraction:
    """Angular distance travelled clockwise from ``a`` to ``b``."""
    return (Fraction(b) - Fraction(a)) % 1


def ccw_angle(a: Rational, b: Rational) -> Fraction:
    """Angular distance travelled counter-clockwise from ``a`` to ``b``."""
    return (Fraction(a) - Fraction(b)) % 1


def angular_distance(a: Rational, b: Rational) -> Fraction:
    """Length of the shorter arc between ``a`` and ``b``; at most 1/2."""
    d = cw_angle(a, b)
    return d if d <= HALF_TURN else 1 - d


def antipode(a: Rational) -> Fraction:
    """The point diametrically opposite ``a``; an involution."""
    return (Fraction(a) + HALF_TURN) % 1


@dataclass(frozen=True)
class Arc:
    """A circular arc of clockwise ``extent`` starting at ``start``.

    ``closure`` states whether each endpoint belongs to the arc, clockwise
    from ``start``: ``"[)"`` includes the start and excludes the end. An
    extent of exactly 1 with ``"[)"`` covers the whole circle once.
    """

    start: Fraction
    extent: Fraction
    closure: str = "[)"

    def __post_init__(self):
        object.__setattr__(self, "start", norm(self.start))
        object.__setattr__(self, "extent", Fraction(self.extent))
        if not 0 < self.extent <= 1:
            raise ValueError(f"arc extent must be in (0, 1], got {self.extent}")
        if self.closure not in CLOSURES:
            raise ValueError(f"unknown closure {self.closure!r}")

    def __contains__(self, x: Rational) -> bool:
        d = cw_angle(self.start, x)
        lower_ok = d > 0 or self.closure[0] == "["
        upper_ok = d < self.extent or (d == self.extent and self.closure[1] == "]")
        return lower_ok and upper_ok


def in_arc(x: Rational, arc: Arc) -> bool:
    """Exact arc membership respecting endpoint closure."""
    return x in arc


def sort_cw_from(origin: Rational, points: Iterable[Rational]) -> List[Fraction]:
    """Points ordered by increasing clockwise angle from ``origin``.

    Points equal to ``origin`` are excluded; exact duplicates keep their
    input order.
    """
    o = norm(origin)
    kept = [norm(p) for p in points]
    kept = [p for p in kept if p != o]
    return sorted(kept, key=lambda p: cw_angle(o, p))


def format_angle(a: Rational) -> str:
    """Serialise an angle as ``"p/q"`` in lowest terms with 0 <= p < q."""
    f = norm(a)
    return f"{f.numerator}/{f.denominator}"


def parse_angle(text: str) -> Fraction:
    """Parse a ``"p/q"`` angle literal; anything else is a :class:`ParseError`."""
    m = _ANGLE_RE.match(text) if isinstance(text, str) else None
    if m is None:
        raise ParseError(f"expected an angle of the form 'p/q', got {text!r}")
    return norm(Fraction(int(m.group(1)), int(m.group(2))))
