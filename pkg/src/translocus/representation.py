"""Explicit SU(1,1) / SU(2) matrices realizing an irreducible character.

One generator is conjugated to ``diag(e^{i alpha}, e^{-i alpha})``; the other
then has the form::

    [[sqrt(1+R^2) e^{i beta}, R], [R, sqrt(1+R^2) e^{-i beta}]]

with ``R`` real (SU(1,1)) or purely imaginary (SU(2)).  Writing
``P = sqrt(1+R^2) cos(beta)`` and ``Q = sqrt(1+R^2) sin(beta)``, the trace
equations give ``P = s/2`` and ``Q = (cos(alpha) s/2 - r/2) / sin(alpha)``,
so ``beta = atan2(Q, P)`` and ``R^2 = P^2 + Q^2 - 1``.

Normally ``A`` is diagonal ("gauge A").  Where ``A`` stops being elliptic
the roles of ``A`` and ``B`` are exchanged ("gauge B"); ``tr AB = tr BA`` so
the same formulas apply with ``t`` and ``s`` swapped.  ``orientation`` is the
sign of ``sin(alpha)`` and selects between a representation and its mirror.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .character_variety import _require_on_curve
from .core_algebra import (
    ETA,
    I2,
    TraceTriple,
    is_irreducible,
    mat,
    trace,
)
from .presentation import TwistedTorusKnot, evaluate_word, peripheral, relator

BOUNDARY_TOL = 1e-10
RELATOR_TOL = 1e-8
COMMUTATOR_TOL = 1e-8
TRACE_TOL = 1e-9


class RealizationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RepPoint:
    traces: TraceTriple
    alpha: float
    beta: float
    R_squared: float
    side: str
    A: np.ndarray
    B: np.ndarray
    gauge: str = "A"
    orientation: int = 1

    @property
    def irreducible(self) -> bool:
        return is_irreducible(self.A, self.B)


def preferred_gauge(tt: TraceTriple) -> str:
    """Diagonalize whichever of A, B is further inside the elliptic range."""
    return "A" if abs(tt.t) <= abs(tt.s) else "B"


def realize(
    tt: TraceTriple,
    knot: TwistedTorusKnot,
    orientation: int = 1,
    gauge: str | None = None,
    check: bool = True,
) -> RepPoint:
    if gauge is None:
        gauge = preferred_gauge(tt)
    if gauge not in ("A", "B"):
        raise ValueError(f"unknown gauge {gauge!r}")
    if check:
        if knot.m != 1:
            raise ValueError("irreducibility constraints are only known for m = 1")
        _require_on_curve(tt, knot.k)
    diag_tr, other_tr = (tt.t, tt.s) if gauge == "A" else (tt.s, tt.t)
    if not abs(diag_tr) < 2:
        raise RealizationError(f"diagonal generator has |tr| = {abs(diag_tr)} >= 2")

    cos_a = diag_tr / 2
    sin_a = math.copysign(math.sqrt(1 - cos_a * cos_a), orientation)
    if sin_a == 0.0:
        raise RealizationError("sin(alpha) vanishes")
    alpha = math.atan2(sin_a, cos_a) % (2 * math.pi)
    P = other_tr / 2
    Q = (cos_a * other_tr / 2 - tt.r / 2) / sin_a
    beta = math.atan2(Q, P) % (2 * math.pi)
    R2 = P * P + Q * Q - 1

    if R2 > BOUNDARY_TOL:
        side = "SU11"
    elif R2 < -BOUNDARY_TOL:
        side = "SU2"
    else:
        side = "Boundary"
    off = math.sqrt(R2) if R2 >= 0 else 1j * math.sqrt(-R2)
    n = math.sqrt(1 + R2)
    D = mat(np.exp(1j * alpha), 0, 0, np.exp(-1j * alpha))
    O = mat(n * np.exp(1j * beta), off, off, n * np.exp(-1j * beta))
    A, B = (D, O) if gauge == "A" else (O, D)

    rp = RepPoint(tt, alpha, beta, R2, side, A, B, gauge, 1 if orientation >= 0 else -1)
    if check:
        _check_invariants(rp, knot)
    return rp


def _check_invariants(rp: RepPoint, knot: TwistedTorusKnot) -> None:
    A, B = rp.A, rp.B
    for name, got, want in (
        ("tr A", trace(A), rp.traces.t),
        ("tr B", trace(B), rp.traces.s),
        ("tr AB", trace(A @ B), rp.traces.r),
    ):
        if abs(got - want) > TRACE_TOL * max(1.0, abs(want)):
            raise RealizationError(f"{name} = {got}, expected {want}")
    for X in (A, B):
        if abs(np.linalg.det(X) - 1) > 1e-10 * max(1.0, np.linalg.norm(X) ** 2):
            raise RealizationError("non-unimodular generator")
    if rp.side == "SU11" and not np.allclose(B.conj().T @ ETA @ B, ETA, atol=1e-8):
        raise RealizationError("generator is not in SU(1,1)")
    if rp.side == "SU2" and not np.allclose(B.conj().T @ B, I2, atol=1e-8):
        raise RealizationError("generator is not in SU(2)")
    res = verify_relation(rp, knot)
    if res > RELATOR_TOL:
        raise RealizationError(f"relator residual {res:.3g}")


def verify_relation(rp: RepPoint, knot: TwistedTorusKnot) -> float:
    """Frobenius norm of ``rho(lhs) - rho(rhs)`` for the defining relation."""
    lhs, rhs = relator(knot)
    return float(np.linalg.norm(evaluate_word(lhs, rp.A, rp.B) - evaluate_word(rhs, rp.A, rp.B)))


def peripheral_images(rp: RepPoint, knot: TwistedTorusKnot) -> tuple[np.ndarray, np.ndarray]:
    """``(rho(mu), rho(sigma))``; these must commute."""
    per = peripheral(knot)
    M = evaluate_word(per.meridian, rp.A, rp.B)
    S = evaluate_word(per.sigma, rp.A, rp.B)
    comm = np.linalg.norm(M @ S - S @ M)
    if comm > COMMUTATOR_TOL:
        raise RealizationError(f"peripheral images fail to commute: {comm:.3g}")
    return M, S


def commutator_norm(rp: RepPoint, knot: TwistedTorusKnot) -> float:
    per = peripheral(knot)
    M = evaluate_word(per.meridian, rp.A, rp.B)
    S = evaluate_word(per.sigma, rp.A, rp.B)
    return float(np.linalg.norm(M @ S - S @ M))
