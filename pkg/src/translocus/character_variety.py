"""Reducible and irreducible SL2 characters of T^1_{3,3k+2} and their meeting points.

Irreducible characters satisfy, for ``w_j = omega_j(s)``::

    t - 1/t = -w_{k-1} + w_k^2 / w_{k+1}
    r       = t w_k / w_{k+1} - w_k / w_{k+1}^2

which at ``k = 1`` reads ``s = t / (t^2 - 1)``, ``r = 1 - 1/t^2``.

Reducible characters come from ``mu -> diag(z, 1/z)`` with ``z^2 = zeta``; an
Alexander root ``zeta = e^{i theta}`` gives ``z = e^{i theta / 2}`` and the
traces ``2 cos((3k+2) theta/2)``, ``2 cos(3 theta/2)``, ``2 cos((3k+5) theta/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core_algebra import TraceTriple, omega
from .presentation import TwistedTorusKnot, alexander

CONSTRAINT_TOL = 1e-8
SINGULAR_MARGIN = 1e-9
ROOT_GRID = 10_000
SEED_PROBE = 1e-4


class ConstraintError(ValueError):
    """A trace triple is off the irreducible character curve."""


@dataclass(frozen=True)
class UnitCircleRoot:
    theta: float
    multiplicity: int = 1

    @property
    def zeta(self) -> complex:
        return complex(np.exp(1j * self.theta))

    def conjugate(self) -> "UnitCircleRoot":
        return UnitCircleRoot(2 * math.pi - self.theta, self.multiplicity)


@dataclass(frozen=True)
class DeformationSeed:
    """A reducible character on the irreducible curve, with the SU(1,1) direction.

    ``param`` is ``t`` for ``k = 1`` and ``s`` otherwise; ``branch`` picks the
    root of ``t^2 - c(s) t - 1 = 0`` (0 for the ``+`` sign) and is unused at
    ``k = 1``.  ``direction`` is the sign of the parameter step entering the
    SU(1,1) side, or 0 when neither side realizes in SU(1,1).
    """

    knot: TwistedTorusKnot
    root: UnitCircleRoot
    seed_traces: TraceTriple
    seed_angles: tuple[float, float]
    side: str
    param: float
    direction: int
    branch: int = 0
    gauge: str = "A"
    orientation: int = 1

    @property
    def param_name(self) -> str:
        return "t" if self.knot.k == 1 else "s"


# --- reducible characters ---------------------------------------------------


def reducible_traces(knot: TwistedTorusKnot, theta: float) -> TraceTriple:
    """Traces of the reducible representation at the Alexander-root argument ``theta``."""
    half = theta / 2
    k = knot.k
    return TraceTriple(
        2 * math.cos((3 * k + 2) * half),
        2 * math.cos(3 * half),
        2 * math.cos((3 * k + 5) * half),
    )


def reducible_angles(knot: TwistedTorusKnot, theta: float) -> tuple[float, float]:
    """Diagonal angles ``(alpha, beta)`` of ``A`` and ``B`` at the reducible point, in [0, 2pi)."""
    half = theta / 2
    return ((3 * knot.k + 2) * half) % (2 * math.pi), (3 * half) % (2 * math.pi)


# --- irreducible characters -------------------------------------------------


def irreducible_constraints_k1(t: float) -> TraceTriple:
    if min(abs(t), abs(t - 1), abs(t + 1)) < SINGULAR_MARGIN:
        raise ValueError(f"t = {t} is a pole of the k = 1 constraints")
    s = t / (t * t - 1)
    r = 1 - 1 / (t * t)
    q = t * t * s - t * r - s
    residuals = (q * t - 1, (r * s - t) * s + 1, r * s - q)
    if max(abs(e) for e in residuals) > 1e-10 * max(1.0, abs(s) ** 3, abs(t) ** 3):
        raise ArithmeticError(f"relation system not satisfied at t = {t}: {residuals}")
    return TraceTriple(t, s, r)


def _c_of_s(k: int, s: float) -> tuple[float, float, float, float]:
    wkm1, wk, wkp1 = omega(k - 1, s), omega(k, s), omega(k + 1, s)
    if abs(wkp1) < SINGULAR_MARGIN:
        raise ValueError(f"omega_{k + 1}({s}) vanishes")
    return -wkm1 + wk * wk / wkp1, wkm1, wk, wkp1


def irreducible_constraints_general(k: int, s: float) -> list[TraceTriple]:
    """Both irreducible triples over ``s``; their ``t`` values multiply to -1."""
    c, _, wk, wkp1 = _c_of_s(k, s)
    root = math.sqrt(c * c + 4)
    # the two roots computed without cancellation
    big = (c + math.copysign(root, c)) / 2 if c != 0 else 1.0
    ts = sorted([big, -1 / big], reverse=True)
    return [TraceTriple(t, s, t * wk / wkp1 - wk / wkp1**2) for t in ts]


def curve_point(knot: TwistedTorusKnot, param: float, branch: int = 0) -> TraceTriple:
    """Irreducible triple at curve parameter ``param`` (``t`` if k = 1, else ``s``)."""
    if knot.k == 1:
        return irreducible_constraints_k1(param)
    return irreducible_constraints_general(knot.k, param)[branch]


def constraint_residual(tt: TraceTriple, k: int) -> float:
    t, s, r = tt
    if k == 1:
        return max(abs(s * (t * t - 1) - t), abs((r - 1) * t * t + 1))
    c, _, wk, wkp1 = _c_of_s(k, s)
    return max(abs(t - 1 / t - c), abs(r - (t * wk / wkp1 - wk / wkp1**2)))


def _require_on_curve(tt: TraceTriple, k: int) -> None:
    res = constraint_residual(tt, k)
    if not res <= CONSTRAINT_TOL:
        raise ConstraintError(f"constraint residual {res:.3g} exceeds {CONSTRAINT_TOL}")


# --- peripheral traces ------------------------------------------------------


def m_k1(t: float) -> float:
    """Meridian trace along the k = 1 curve."""
    return t**3 / (t * t - 1) ** 2 - 1 / t - t


def ell_k1(t: float) -> float:
    """Surface-longitude trace along the k = 1 curve."""
    return 2 / t - t / (t * t - 1) - 1 / t**3 - t


def tr_a2_b_minus_k(tt: TraceTriple, k: int) -> float:
    t, s, r = tt
    wk, wkp1 = omega(k, s), omega(k + 1, s)
    # (tA - I)(w_{k+1} I - w_k B)
    return t * t * wkp1 - t * wk * r - 2 * wkp1 + wk * s


def meridian_trace(tt: TraceTriple, k: int) -> float:
    """``tr rho(mu)`` for ``mu = a^-1 b^(k+1)``."""
    _require_on_curve(tt, k)
    t, s, r = tt
    wk, wkp1 = omega(k, s), omega(k + 1, s)
    general = t * (s * wkp1 - 2 * wk) + wk / wkp1
    if k == 1:
        raw = t * s * s - s * r - t
        closed = m_k1(t)
        if max(abs(raw - closed), abs(general - closed)) > 1e-10 * max(1.0, abs(closed)):
            raise ArithmeticError(f"k = 1 meridian forms disagree at t = {t}")
        return closed
    return general


def sigma_trace(tt: TraceTriple, k: int) -> float:
    """``tr rho(sigma)`` for ``sigma = a b^-k a^2 b^-k a^2``."""
    _require_on_curve(tt, k)
    t, s, r = tt
    if abs(tr_a2_b_minus_k(tt, k) - 1 / t) > CONSTRAINT_TOL * max(1.0, abs(1 / t)):
        raise ConstraintError("tr(A^2 B^-k) differs from 1/t")
    wkm1, wk, wkp1 = omega(k - 1, s), omega(k, s), omega(k + 1, s)
    general = ((wkp1 * t - wk * r) * (t * t - 2) - (wk * r - wkm1 * t)) / t - t
    if k == 1:
        closed = ell_k1(t)
        if abs(general - closed) > 1e-9 * max(1.0, abs(closed)):
            raise ArithmeticError(f"k = 1 sigma forms disagree at t = {t}")
        return closed
    return general


def parabolic_parameter_k1(t0: float) -> float:
    """The ``t_1`` in ``(t_0, 1)`` with ``m(t_1) = 2``."""
    lo, hi = t0 + SINGULAR_MARGIN, 1 - SINGULAR_MARGIN
    return brentq(lambda t: m_k1(t) - 2, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


# --- Alexander roots and seeds ----------------------------------------------


def _trig_form(knot: TwistedTorusKnot):
    coeffs = alexander(knot).cosine_coefficients()
    j = np.arange(1, len(coeffs))

    def f(theta):
        theta = np.asarray(theta, dtype=float)
        return coeffs[0] + 2 * np.cos(np.multiply.outer(theta, j)) @ coeffs[1:]

    return f


def alexander_roots_unit_circle(
    knot: TwistedTorusKnot, include_conjugates: bool = False
) -> list[UnitCircleRoot]:
    """Roots ``e^{i theta}`` of the Alexander polynomial with ``theta`` in ``(0, pi)``.

    Sign changes of the real form ``Delta(e^{i theta})`` on a uniform grid
    are refined by bracketing; with ``include_conjugates`` the mirror roots
    ``2 pi - theta`` follow in increasing order.
    """
    f = _trig_form(knot)
    grid = np.linspace(0.0, math.pi, ROOT_GRID + 1)
    vals = f(grid)
    delta = alexander(knot)
    found = []
    for i in range(ROOT_GRID):
        a, b = vals[i], vals[i + 1]
        if a == 0.0 and 0 < i:
            theta = float(grid[i])
        elif a * b < 0:
            theta = brentq(lambda th: float(f(th)), grid[i], grid[i + 1], xtol=1e-14)
        else:
            continue
        if abs(delta(np.exp(1j * theta))) >= 1e-10:
            raise ArithmeticError(f"root refinement failed near theta = {theta}")
        found.append(UnitCircleRoot(float(theta), _multiplicity(f, theta)))
    if include_conjugates:
        found += [r.conjugate() for r in reversed(found)]
    return found


def _multiplicity(f, theta: float, h: float = 1e-4) -> int:
    # odd multiplicity is all a sign change can detect; test for a triple root
    d1 = (f(theta + h) - f(theta - h)) / (2 * h)
    return 1 if abs(d1) > 1e-6 else 3


def seed_side(
    knot: TwistedTorusKnot, param: float, branch: int, orientation: int, gauge: str
) -> dict[int, str]:
    """Realization side one probe step either way from a seed parameter."""
    from .representation import realize

    sides = {}
    for direction in (1, -1):
        tt = curve_point(knot, param + direction * SEED_PROBE, branch)
        sides[direction] = realize(tt, knot, orientation=orientation, gauge=gauge).side
    return sides


def seed_for_root(knot: TwistedTorusKnot, root: UnitCircleRoot) -> DeformationSeed:
    """Seed at the reducible character of ``root``, oriented toward SU(1,1)."""
    from .representation import preferred_gauge

    if knot.m != 1:
        raise ValueError("deformation seeds are only available for m = 1")
    tt = reducible_traces(knot, root.theta)
    alpha, beta = reducible_angles(knot, root.theta)
    if knot.k == 1:
        param, branch = tt.t, 0
    else:
        param = tt.s
        pair = irreducible_constraints_general(knot.k, param)
        branch = int(np.argmin([abs(p.t - tt.t) for p in pair]))
    on_curve = curve_point(knot, param, branch)
    if max(abs(a - b) for a, b in zip(on_curve, tt)) > CONSTRAINT_TOL:
        raise ArithmeticError(f"reducible point at theta = {root.theta} is off the irreducible curve")
    gauge = preferred_gauge(tt)
    orientation = 1 if math.sin(alpha if gauge == "A" else beta) >= 0 else -1
    sides = seed_side(knot, param, branch, orientation, gauge)
    direction = next((d for d in (1, -1) if sides[d] == "SU11"), 0)
    return DeformationSeed(
        knot=knot,
        root=root,
        seed_traces=tt,
        seed_angles=(alpha, beta),
        side="SU11" if direction else "SU2",
        param=param,
        direction=direction,
        branch=branch,
        gauge=gauge,
        orientation=orientation,
    )


def deformation_seeds(knot: TwistedTorusKnot) -> list[DeformationSeed]:
    """One seed per Alexander root in ``(0, pi)``."""
    if knot.m != 1:
        raise ValueError("deformation seeds are only available for m = 1")
    return [seed_for_root(knot, root) for root in alexander_roots_unit_circle(knot)]
