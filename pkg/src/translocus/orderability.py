"""Surgery-slope lines against the locus, and the resulting orderability verdicts.

The filling along ``r = p/q`` is orderable (given irreducibility) when the line
``y = -r x`` meets the locus at a nonzero point coming from elliptic
representations.  Witnesses are looked for on the traced arcs only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .locus import LocusDiagram
from .presentation import TwistedTorusKnot

# Witnesses closer than this to the origin or to a parabolic endpoint are
# dropped: those points are excluded, and the line equation alone cannot
# tell a crossing from a near miss at that scale.
EXCLUSION_RADIUS = 1e-6
ON_LINE_TOL = 1e-8
ENDPOINT_X_TOL = 1e-6
IRREDUCIBLE_ASSUMPTION = "filling assumed irreducible"


class NoParabolicEndpoint(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    point: tuple[float, float]
    arc: int  # index into the diagram's arc list
    segment: int  # samples[segment] .. samples[segment + 1]


@dataclass(frozen=True)
class OrderableInterval:
    """The open interval ``(-inf, upper)``."""

    upper: float

    def __contains__(self, r) -> bool:
        return float(r) < self.upper

    def __str__(self) -> str:
        u = self.upper
        shown = str(int(round(u))) if abs(u - round(u)) < 1e-6 else f"{u:.6g}"
        return f"(-inf, {shown})"


@dataclass(frozen=True)
class SurgeryVerdict:
    slope: Fraction
    outcome: str  # "Orderable", "NoWitness" or "CaveatReducibleFilling"
    witness: Witness | None = None
    assumptions: tuple[str, ...] = field(default_factory=tuple)


def parse_slope(text) -> Fraction:
    """``"5"``, ``"-1/2"`` or a number; zero denominators are rejected."""
    if isinstance(text, Fraction):
        return text
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational slope: {text!r}") from exc


def _excluded(x: float, y: float, avoid: list[tuple[float, float]]) -> bool:
    return any(math.hypot(x - ax, y - ay) < EXCLUSION_RADIUS for ax, ay in avoid)


def line_locus_intersection(d: LocusDiagram, r) -> list[Witness]:
    """Crossings of ``y = -r x`` with the arc polylines, excluding special points."""
    r = float(parse_slope(r))
    avoid = [(0.0, 0.0)] + d.parabolic_endpoints()
    found = []
    for ai, arc in enumerate(d.arcs):
        pts = arc.samples
        f = [s.y + r * s.x for s in pts]
        for i in range(len(pts) - 1):
            f0, f1 = f[i], f[i + 1]
            if f0 == 0.0:
                lam = 0.0
            elif f1 == 0.0:
                # counted as the start of the next segment, unless it is the last vertex
                if i + 1 < len(pts) - 1:
                    continue
                lam = 1.0
            elif (f0 < 0) != (f1 < 0):
                lam = f0 / (f0 - f1)
            else:
                continue
            a, b = pts[i], pts[i + 1]
            x = a.x + lam * (b.x - a.x)
            y = a.y + lam * (b.y - a.y)
            if _excluded(x, y, avoid):
                continue
            # re-project onto the line so the witness satisfies it to round-off
            y_line = -r * x + 0.0  # no negative zero at r = 0
            if abs(y - y_line) > ON_LINE_TOL:
                raise ArithmeticError(f"segment crossing is off the line by {abs(y - y_line):.3g}")
            found.append(Witness((x, y_line), ai, i))
    return found


def orderable_range(d: LocusDiagram) -> OrderableInterval:
    """``(-inf, h)`` with ``h`` the greatest parabolic endpoint height on ``x = 0``."""
    heights = [y for x, y in d.parabolic_endpoints() if abs(x) < ENDPOINT_X_TOL]
    if not heights:
        raise NoParabolicEndpoint("no parabolic endpoint on the vertical axis")
    return OrderableInterval(max(heights))


def verdict(knot: TwistedTorusKnot, r, d: LocusDiagram, exceptional=None) -> SurgeryVerdict:
    """Orderability verdict for the ``r`` filling.

    With an exceptional-slope list a witness gives ``Orderable`` unless ``r``
    is on the list (``CaveatReducibleFilling``).  Without a list the verdict
    carries the irreducibility assumption.
    """
    r = parse_slope(r)
    hits = line_locus_intersection(d, r)
    if not hits:
        return SurgeryVerdict(r, "NoWitness")
    if exceptional is None:
        return SurgeryVerdict(r, "Orderable", hits[0], (IRREDUCIBLE_ASSUMPTION,))
    if r in {parse_slope(e) for e in exceptional}:
        return SurgeryVerdict(r, "CaveatReducibleFilling", hits[0], ("slope listed as exceptional",))
    return SurgeryVerdict(r, "Orderable", hits[0])


def load_exceptional(path, knot: TwistedTorusKnot | None = None) -> list[Fraction]:
    """Read ``{"k": 1, "m": 1, "exceptional": ["16", ...]}``; only the shape is checked."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or set(data) != {"k", "m", "exceptional"}:
        raise ValueError("exceptional-slope file needs exactly the keys k, m, exceptional")
    if not all(isinstance(data[key], int) for key in ("k", "m")):
        raise ValueError("k and m must be integers")
    if not isinstance(data["exceptional"], list) or not all(isinstance(v, str) for v in data["exceptional"]):
        raise ValueError("exceptional must be a list of strings")
    if knot is not None and (data["k"], data["m"]) != (knot.k, knot.m):
        raise ValueError(f"file is for k={data['k']}, m={data['m']}, not k={knot.k}, m={knot.m}")
    return [parse_slope(v) for v in data["exceptional"]]
