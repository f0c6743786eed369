"""Two-generator presentations of the twisted torus knots T^m_{3,3k+2}.

The group is ``<a, b | a^2 (b^-k a)^m a = b^(2k+1) (b^-k a)^m b^(k+1)>`` with
meridian ``mu = a^-1 b^(k+1)``, surface longitude
``sigma = a (b^-k a)^m a (b^-k a)^m a`` and homological longitude
``lambda = mu^-c sigma`` where ``c = 3(3k+2) + 4m``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .core_algebra import I2, check_det, matrix_power

GENERATORS = ("a", "b")


@dataclass(frozen=True)
class TwistedTorusKnot:
    k: int
    m: int = 1

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")

    @property
    def c(self) -> int:
        """Exponent relating the surface and homological longitudes."""
        return 3 * (3 * self.k + 2) + 4 * self.m

    @property
    def degree_a(self) -> int:
        # [a] = [mu]^(3k+2) in H_1
        return 3 * self.k + 2

    @property
    def degree_b(self) -> int:
        return 3

    @property
    def genus(self) -> int:
        return self.degree_a

    def __str__(self) -> str:
        return f"T^{self.m}_(3,{3 * self.k + 2})"


def _reduce(letters: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[list] = []
    for gen, exp in letters:
        if gen not in GENERATORS:
            raise ValueError(f"unknown generator {gen!r}")
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, int(exp)])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word in ``a, b`` stored as ``(generator, exponent)`` pairs."""

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse ``"a^2 b^-1 a^2"``-style text; an empty string is the identity."""
        letters = []
        for tok in text.split():
            gen, _, exp = tok.partition("^")
            letters.append((gen, int(exp) if exp else 1))
        return cls(tuple(letters))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        return GroupWord(self.letters * n)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def exponent_sum(self, gen: str) -> int:
        return sum(e for g, e in self.letters if g == gen)

    def abelianized_degree(self, degrees: Mapping[str, int]) -> int:
        return sum(degrees[g] * e for g, e in self.letters)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)


def letter(gen: str, exp: int = 1) -> GroupWord:
    return GroupWord(((gen, exp),))


@dataclass(frozen=True)
class PeripheralSystem:
    """Meridian and surface longitude; ``lambda = mu^(-c) sigma`` is never expanded."""

    meridian: GroupWord
    sigma: GroupWord
    c: int

    @property
    def longitude(self) -> tuple[int, GroupWord]:
        return (-self.c, self.sigma)


def relator(knot: TwistedTorusKnot) -> tuple[GroupWord, GroupWord]:
    """Left and right sides of the defining relation."""
    k, m = knot.k, knot.m
    twist = (letter("b", -k) * letter("a")) ** m
    lhs = letter("a", 2) * twist * letter("a")
    rhs = letter("b", 2 * k + 1) * twist * letter("b", k + 1)
    return lhs, rhs


def peripheral(knot: TwistedTorusKnot) -> PeripheralSystem:
    k, m = knot.k, knot.m
    twist = (letter("b", -k) * letter("a")) ** m
    mu = letter("a", -1) * letter("b", k + 1)
    sigma = letter("a") * twist * letter("a") * twist * letter("a")
    return PeripheralSystem(mu, sigma, knot.c)


def evaluate_word(w: GroupWord, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    check_det(A)
    check_det(B)
    images = {"a": A, "b": B}
    out = I2.copy()
    for gen, exp in w.letters:
        out = out @ matrix_power(images[gen], exp, check=False)
    return out


# --- Laurent polynomials and Fox calculus -----------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial in ``x``; zero coefficients are dropped."""

    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(e): int(c) for e, c in dict(self.coeffs).items() if c != 0}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def from_list(cls, coeffs: Iterable[int], low: int = 0) -> "LaurentPoly":
        return cls({low + i: c for i, c in enumerate(coeffs)})

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def low(self) -> int:
        return min(self.coeffs)

    @property
    def high(self) -> int:
        return max(self.coeffs)

    @property
    def span(self) -> int:
        return self.high - self.low

    def as_list(self) -> list[int]:
        return [self.coeffs.get(e, 0) for e in range(self.low, self.high + 1)]

    def shift(self, n: int) -> "LaurentPoly":
        return LaurentPoly({e + n: c for e, c in self.coeffs.items()})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = defaultdict(int, self.coeffs)
        for e, c in other.coeffs.items():
            out[e] += c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()})
        out = defaultdict(int)
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] += c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; the divisor's extreme coefficients must be +-1."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = other.coeffs[other.high]
        if abs(lead) != 1:
            raise ValueError("divisor must have unit leading coefficient")
        if self.is_zero():
            return LaurentPoly()
        rem = dict(self.coeffs)
        quot: dict[int, int] = {}
        lowest_shift = self.low - other.low
        while rem and max(rem) - other.high >= lowest_shift:
            top = max(rem)
            q = rem[top] * lead
            shift = top - other.high
            quot[shift] = q
            for e, c in other.coeffs.items():
                rem[e + shift] = rem.get(e + shift, 0) - q * c
                if rem[e + shift] == 0:
                    del rem[e + shift]
        if rem:
            raise ArithmeticError("division is not exact")
        return LaurentPoly(quot)

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        return sum(c * x**e for e, c in self.coeffs.items())

    def symmetrized(self) -> "LaurentPoly":
        """Shift so the exponents are centred on 0 and fix the sign so P(1) > 0."""
        if self.is_zero():
            raise ValueError("cannot symmetrize the zero polynomial")
        if self.span % 2:
            raise ValueError("odd span; no symmetric normalization")
        p = self.shift(-(self.low + self.high) // 2)
        return -p if sum(p.coeffs.values()) < 0 else p

    def is_palindromic(self) -> bool:
        return all(self.coeffs.get(-e) == c for e, c in self.coeffs.items())

    def cosine_coefficients(self) -> np.ndarray:
        """For a palindromic P, the ``c_j`` with ``P(e^{i theta}) = c_0 + sum 2 c_j cos(j theta)``."""
        if not self.is_palindromic():
            raise ValueError("polynomial is not palindromic")
        return np.array([self.coeffs.get(j, 0) for j in range(self.high + 1)], dtype=float)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs.items():
            mono = "1" if e == 0 else ("x" if e == 1 else f"x^{e}")
            mag = abs(c)
            body = mono if (mag == 1 and e != 0) else (f"{mag}" if e == 0 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


X_MINUS_ONE = LaurentPoly({1: 1, 0: -1})


def fox_derivative(w: GroupWord, gen: str, degrees: Mapping[str, int]) -> LaurentPoly:
    """Abelianized Fox derivative of ``w`` with respect to ``gen``.

    ``degrees`` sends each generator to its exponent of ``x`` under the
    abelianization; the image of every prefix is a monomial.
    """
    out: dict[int, int] = defaultdict(int)
    pos = 0
    for g, e in w.letters:
        d = degrees[g]
        if g == gen:
            if e > 0:
                for i in range(e):
                    out[pos + i * d] += 1
            else:
                for i in range(1, -e + 1):
                    out[pos - i * d] -= 1
        pos += d * e
    return LaurentPoly(out)


def relator_fox_derivative(knot: TwistedTorusKnot, gen: str) -> LaurentPoly:
    """Abelianized Fox derivative of ``lhs * rhs^-1``.

    Since both sides have the same abelian image, the derivative of the
    relator is the difference of the two sides' derivatives.
    """
    degrees = {"a": knot.degree_a, "b": knot.degree_b}
    lhs, rhs = relator(knot)
    if lhs.abelianized_degree(degrees) != rhs.abelianized_degree(degrees):
        raise ArithmeticError("relator is not in the commutator subgroup")
    return fox_derivative(lhs, gen, degrees) - fox_derivative(rhs, gen, degrees)


def alexander(knot: TwistedTorusKnot) -> LaurentPoly:
    """Symmetrized Alexander polynomial, normalized so ``Delta(1) = 1``.

    For a one-relator presentation ``Delta = d_a (x - 1) / (x^deg(b) - 1)``
    where ``d_a`` is the abelianized Fox derivative in ``a``.
    """
    d_a = relator_fox_derivative(knot, "a")
    if d_a.is_zero():
        raise ArithmeticError("zero Fox derivative")
    denom = LaurentPoly({knot.degree_b: 1, 0: -1})
    delta = (d_a * X_MINUS_ONE).exact_div(denom).symmetrized()
    if sum(delta.coeffs.values()) != 1:
        raise ArithmeticError(f"Delta(1) = {sum(delta.coeffs.values())}, expected 1")
    return delta
