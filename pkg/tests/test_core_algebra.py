import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from translocus.core_algebra import (
    I2,
    DeterminantError,
    ElementClass,
    classify,
    inverse,
    irreducibility_margin,
    is_irreducible,
    mat,
    matrix_power,
    omega,
    rotation_angle,
    translation_number_oracle,
)

finite = st.floats(-3, 3, allow_nan=False)
entries = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def rot(phi):
    return mat(np.exp(1j * phi), 0, 0, np.exp(-1j * phi))


def unimodular(a, b, c):
    """A random SL2(C) matrix built from three entries; None when degenerate."""
    if abs(a) < 0.1:
        return None
    return mat(a, b, c, (1 + b * c) / a)


# --- omega -------------------------------------------------------------------


def test_omega_base_cases():
    assert omega(0, 1.7) == 0
    assert omega(1, -3.2) == 1


def test_omega_small_values():
    assert omega(3, 2.0) == pytest.approx(3.0)
    assert omega(-2, 0.5) == pytest.approx(-0.5)


def test_omega_accepts_arrays():
    xs = np.linspace(-2, 2, 5)
    np.testing.assert_allclose(omega(3, xs), xs**2 - 1)


def test_omega_recurrence_on_grid():
    xs = np.linspace(-3, 3, 61)
    for k in range(-10, 11):
        res = omega(k + 1, xs) - xs * omega(k, xs) + omega(k - 1, xs)
        assert np.max(np.abs(res)) < 1e-12


@given(finite)
def test_omega_is_chebyshev_second_kind(x):
    # omega_k(2 cos u) = sin(k u) / sin(u)
    u = math.acos(max(-1, min(1, x / 2)))
    if abs(math.sin(u)) > 1e-3 and abs(x) <= 2:
        assert omega(6, 2 * math.cos(u)) == pytest.approx(math.sin(6 * u) / math.sin(u), abs=1e-9)


# --- matrix power ---------------------------------------------------------------


def test_matrix_power_identity():
    np.testing.assert_allclose(matrix_power(I2, 5), I2)


def test_matrix_power_inverse():
    X = mat(2, 1, 3, 2)
    np.testing.assert_allclose(matrix_power(X, -1), np.trace(X) * I2 - X)
    np.testing.assert_allclose(matrix_power(X, -1) @ X, I2, atol=1e-12)


def test_matrix_power_diagonal():
    th = 0.37
    np.testing.assert_allclose(matrix_power(rot(th), 3), rot(3 * th), atol=1e-12)


def test_matrix_power_rejects_non_unimodular():
    with pytest.raises(DeterminantError):
        matrix_power(mat(2, 0, 0, 2), 3)


@settings(max_examples=60)
@given(entries, entries, entries, st.integers(-8, 8))
def test_matrix_power_matches_repeated_products(a, b, c, k):
    X = unimodular(a, b, c)
    if X is None:
        return
    direct = I2.copy()
    base = X if k >= 0 else np.linalg.inv(X)
    for _ in range(abs(k)):
        direct = direct @ base
    scale = max(1.0, np.linalg.norm(direct))
    assert np.linalg.norm(matrix_power(X, k) - direct) < 1e-9 * scale


# --- trace identities --------------------------------------------------------------


@settings(max_examples=60)
@given(entries, entries, entries, entries, entries, entries)
def test_xyx_identity(a, b, c, d, e, f):
    X, Y = unimodular(a, b, c), unimodular(d, e, f)
    if X is None or Y is None:
        return
    lhs = X @ Y @ X
    rhs = np.trace(X @ Y) * X - inverse(Y)
    assert np.linalg.norm(lhs - rhs) < 1e-9 * max(1.0, np.linalg.norm(lhs))


@settings(max_examples=60)
@given(entries, entries, entries, entries, entries, entries)
def test_trace_symmetries(a, b, c, d, e, f):
    X, Y = unimodular(a, b, c), unimodular(d, e, f)
    if X is None or Y is None:
        return
    scale = max(1.0, abs(np.trace(X @ Y)))
    assert abs(np.trace(X @ Y) - np.trace(Y @ X)) < 1e-12 * scale * 10
    assert abs(np.trace(inverse(X)) - np.trace(X)) < 1e-12 * max(1.0, abs(np.trace(X)))


# --- classification -------------------------------------------------------------------


def test_classify_examples():
    assert classify(I2, 1e-9) is ElementClass.IDENTITY
    assert classify(-I2, 1e-9) is ElementClass.IDENTITY
    assert classify(rot(1.0), 1e-9) is ElementClass.ELLIPTIC
    hyper = np.diag([2.0, 0.5]).astype(complex)
    assert np.trace(hyper).real == pytest.approx(2.5)
    assert classify(hyper, 1e-9) is ElementClass.HYPERBOLIC
    assert classify(mat(1, 1, 0, 1)) is ElementClass.PARABOLIC


def test_classify_band_around_two():
    # |tr| within the band of 2 but away from +-I counts as parabolic
    near = mat(1, 1, 0, 1) @ rot(math.acos(1 - 2e-9))
    assert abs(2 - np.trace(near).real) < 1e-8
    assert classify(near, 1e-8) is ElementClass.PARABOLIC
    assert classify(rot(math.acos(1 - 1e-6)), 1e-8) is ElementClass.ELLIPTIC


# --- irreducibility and rotation angle ---------------------------------------------------


def test_irreducibility_margin():
    assert not is_irreducible(I2, I2)
    assert not is_irreducible(rot(0.3), rot(1.1))  # common eigenvectors
    assert is_irreducible(rot(0.3), mat(1, 1, 1, 2))
    assert irreducibility_margin(rot(0.3), mat(1, 1, 1, 2)) > 1e-3


@given(st.floats(-3.0, 3.0))
def test_rotation_angle_of_rotation(phi):
    if abs(abs(phi) - math.pi) < 1e-6 or abs(phi) < 1e-6:
        return
    got = rotation_angle(rot(phi))
    assert math.remainder(got - phi, 2 * math.pi) == pytest.approx(0, abs=1e-12)


# --- translation-number oracle -----------------------------------------------------------------


def test_oracle_rotation():
    assert translation_number_oracle(rot(0.7), lift_hint=0) == pytest.approx(0.7 / math.pi, abs=1e-3)


def test_oracle_random_rotations():
    rng = np.random.default_rng(7)
    for phi in rng.uniform(0, math.pi, 20):
        est = translation_number_oracle(rot(phi), lift_hint=phi / math.pi)
        assert est == pytest.approx(phi / math.pi, abs=1e-3)


@pytest.mark.parametrize("hint", [-2.3, 0.0, 0.4, 3.6])
def test_oracle_identity_gives_nearest_integer(hint):
    assert translation_number_oracle(I2, lift_hint=hint) == round(hint)


def test_oracle_parabolic_is_zero():
    P = mat(1 + 1j, 1, 1, 1 - 1j)
    assert np.trace(P).real == pytest.approx(2)
    assert translation_number_oracle(P, lift_hint=0) == pytest.approx(0, abs=1e-3)


def test_oracle_conjugation_invariant():
    # translation number is a conjugacy invariant inside SU(1,1)
    g = mat(math.cosh(0.8), math.sinh(0.8) * 1j, -math.sinh(0.8) * 1j, math.cosh(0.8))
    X = g @ rot(1.1) @ np.linalg.inv(g)
    assert translation_number_oracle(X, lift_hint=0.35) == pytest.approx(1.1 / math.pi, abs=1e-3)


def test_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        translation_number_oracle(mat(1, 0.5, 0, 1), 0)  # SL2(R) but not SU(1,1)
    with pytest.raises(ValueError):
        translation_number_oracle(rot(0.2), 0, n_iter=50)
