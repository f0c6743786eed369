"""2x2 matrix arithmetic, the omega polynomials and element classification.

Matrices are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype complex.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

DET_TOL = 1e-9
PARABOLIC_BAND = 1e-8
POWER_TOL = 1e-9
RANK_TOL = 1e-8

I2 = np.eye(2, dtype=complex)
ETA = np.diag([1.0, -1.0]).astype(complex)


class DeterminantError(ValueError):
    """A matrix expected in SL2 has determinant away from 1."""


class ConvergenceError(ArithmeticError):
    pass


class TraceTriple(NamedTuple):
    """Character coordinates ``(tr A, tr B, tr AB)``."""

    t: float
    s: float
    r: float


class ElementClass(enum.Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"
    IDENTITY = "Identity"

    def __str__(self) -> str:
        return self.value


def mat(a11, a12, a21, a22) -> np.ndarray:
    return np.array([[a11, a12], [a21, a22]], dtype=complex)


def check_det(X: np.ndarray, tol: float = DET_TOL) -> None:
    d = np.linalg.det(X)
    if not abs(d - 1.0) <= tol * max(1.0, np.linalg.norm(X) ** 2):
        raise DeterminantError(f"det = {d!r}, expected 1")


def trace(X: np.ndarray) -> float:
    return float(np.trace(X).real)


def omega(k: int, x):
    """Evaluate ``omega_k`` at ``x`` (scalar or array).

    ``omega_0 = 0``, ``omega_1 = 1``, ``omega_{j+1} = x omega_j - omega_{j-1}``
    and ``omega_{-k} = -omega_k``.  These are Chebyshev polynomials of the
    second kind in ``x/2``, shifted by one index.
    """
    if k < 0:
        return -omega(-k, x)
    x = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    prev, cur = 0.0 * x, 0.0 * x + 1.0
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, x * cur - prev
    return cur


def inverse(X: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular matrix, ``tr(X) I - X``."""
    return np.trace(X) * I2 - X


def _power_by_products(X: np.ndarray, k: int) -> np.ndarray:
    base = X if k >= 0 else inverse(X)
    out = I2.copy()
    for _ in range(abs(k)):
        out = out @ base
    return out


def matrix_power(X: np.ndarray, k: int, *, check: bool = True) -> np.ndarray:
    """``X**k`` for ``det X = 1`` via ``X^k = omega_k(tr X) X - omega_{k-1}(tr X) I``.

    The result is compared against repeated multiplication; a mismatch
    beyond ``POWER_TOL`` (relative to the size of the result) raises.
    """
    if check:
        check_det(X)
    tr = np.trace(X)
    via_omega = _omega_complex(k, tr) * X - _omega_complex(k - 1, tr) * I2
    direct = _power_by_products(X, k)
    scale = max(1.0, float(np.linalg.norm(direct)))
    if np.linalg.norm(via_omega - direct) > POWER_TOL * scale:
        raise ArithmeticError(f"omega identity disagrees with X^{k}")
    return via_omega


def _omega_complex(k: int, x: complex) -> complex:
    # omega() with complex argument; traces of SU(1,1)/SU(2) elements are
    # real but carry round-off imaginary parts.
    if k < 0:
        return -_omega_complex(-k, x)
    prev, cur = 0j, 1 + 0j
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, x * cur - prev
    return cur


def classify(X: np.ndarray, tol: float = PARABOLIC_BAND) -> ElementClass:
    """Elliptic / parabolic / hyperbolic by ``|tr X|`` against 2.

    ``|tr X|`` inside ``[2 - tol, 2 + tol]`` counts as parabolic, and ``X``
    within ``tol`` of ``+-I`` as the identity.
    """
    check_det(X)
    if min(np.linalg.norm(X - I2), np.linalg.norm(X + I2)) < tol:
        return ElementClass.IDENTITY
    a = abs(np.trace(X).real)
    if abs(a - 2.0) <= tol:
        return ElementClass.PARABOLIC
    return ElementClass.ELLIPTIC if a < 2.0 else ElementClass.HYPERBOLIC


def is_su11(X: np.ndarray, tol: float = 1e-8) -> bool:
    return bool(np.linalg.norm(X.conj().T @ ETA @ X - ETA) < tol * max(1.0, np.linalg.norm(X) ** 2))


def is_su2(X: np.ndarray, tol: float = 1e-8) -> bool:
    return bool(np.linalg.norm(X.conj().T @ X - I2) < tol)


def irreducibility_margin(A: np.ndarray, B: np.ndarray) -> float:
    """Smallest singular value of the 4x4 matrix with rows I, A, B, AB.

    ``A`` and ``B`` share no eigenvector exactly when the four matrices are
    linearly independent, i.e. when this margin is nonzero.
    """
    rows = np.array([I2.ravel(), A.ravel(), B.ravel(), (A @ B).ravel()])
    return float(np.linalg.svd(rows, compute_uv=False)[-1])


def is_irreducible(A: np.ndarray, B: np.ndarray, tol: float = RANK_TOL) -> bool:
    return irreducibility_margin(A, B) > tol


def rotation_angle(X: np.ndarray) -> float:
    """Signed rotation parameter of an elliptic element of SU(1,1).

    Returns ``phi`` in ``(-pi, pi]`` with ``X`` conjugate inside SU(1,1) to
    ``diag(e^{i phi}, e^{-i phi})``.  The eigenvalue attached to the
    eigenvector of positive ``diag(1, -1)`` norm is ``e^{i phi}``; this sign
    is invisible to the trace.
    """
    w, v = np.linalg.eig(X)
    norms = np.abs(v[0]) ** 2 - np.abs(v[1]) ** 2
    return float(np.angle(w[int(np.argmax(norms))]))


def boundary_action(X: np.ndarray, x):
    """Image of ``e^{2 pi i x}`` under the Mobius map of ``X``, as an angle / 2pi."""
    w = np.exp(2j * np.pi * np.asarray(x, dtype=float))
    image = (X[0, 0] * w + X[0, 1]) / (X[1, 0] * w + X[1, 1])
    return np.angle(image) / (2 * np.pi)


def translation_number_oracle(
    X: np.ndarray, lift_hint: float = 0.0, n_iter: int = 10_000, grid: int = 4096
) -> float:
    """Translation number of a lift of the boundary action of ``X`` in SU(1,1).

    The lift is the one whose displacement at 0 lies in
    ``(lift_hint - 1/2, lift_hint + 1/2]``.  The estimate is
    ``(F^n(0) - 0) / n`` for the lifted map ``F``; a test oracle only.
    """
    check_det(X)
    if not is_su11(X):
        raise ValueError("matrix does not preserve the unit disk")
    if n_iter < 100:
        raise ValueError("n_iter must be at least 100")

    # Displacement on a grid, unwrapped from the hinted value at 0, serves as
    # the reference branch when lifting displacements at arbitrary points.
    xs = np.arange(grid) / grid
    raw = boundary_action(X, xs) - xs
    raw[0] += np.floor(lift_hint + 0.5 - raw[0])
    table = np.unwrap(raw, period=1.0)

    def displacement(x: float) -> float:
        frac = x - np.floor(x)
        ref = table[int(round(frac * grid)) % grid]
        d = float(boundary_action(X, frac)) - frac
        return d + round(ref - d)

    x = 0.0
    half = None
    for i in range(1, n_iter + 1):
        x += displacement(x)
        if i == n_iter // 2:
            half = x / i
    est = x / n_iter
    if abs(est - half) > 1e-2:
        raise ConvergenceError(f"translation estimate unstable: {half} vs {est}")
    return est
