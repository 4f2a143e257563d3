"""Difference tables and Newton's nth-difference identity for polynomials.

Orientation convention used throughout the package::

    binomial_nth_difference(P, x, k, n) = sum_i C(n, i) (-1)**i P(x - k*i)

which is the forward nth difference (step k) of the grid *ending* at x, i.e.
the table entry ``rows[n][m]`` for samples ``u_j = P(j*k)`` with ``x = (m+n)*k``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import OrderTooLargeError, SpecParseError, ZeroStepError

Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def binomial_row(n: int) -> Tuple[int, ...]:
    """C(n, 0..n) built by Pascal's recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return (1,)
    prev = binomial_row(n - 1)
    return (1,) + tuple(prev[i] + prev[i + 1] for i in range(n - 1)) + (1,)


@dataclass(frozen=True)
class Polynomial:
    """Exact rational polynomial, coefficients leading-first (a0 x^n + ... + an)."""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while len(coeffs) > 1 and coeffs[0] == 0:
            coeffs.pop(0)
        if not coeffs:
            coeffs = [Fraction(0)]
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "Polynomial":
        return cls((coeff,) + (0,) * degree)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[0]

    def is_zero(self) -> bool:
        return self.coefficients == (0,)

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def _ascending(self) -> List[Fraction]:
        return list(reversed(self.coefficients))

    @classmethod
    def _from_ascending(cls, coeffs: Sequence[Number]) -> "Polynomial":
        return cls(tuple(reversed(list(coeffs))))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self._ascending(), other._ascending()
        size = max(len(a), len(b))
        a += [Fraction(0)] * (size - len(a))
        b += [Fraction(0)] * (size - len(b))
        return self._from_ascending([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            a, b = self._ascending(), other._ascending()
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] += x * y
            return self._from_ascending(out)
        other = Fraction(other)
        return Polynomial(tuple(c * other for c in self.coefficients))

    __rmul__ = __mul__

    def derivative(self, order: int = 1) -> "Polynomial":
        asc = self._ascending()
        for _ in range(order):
            asc = [i * c for i, c in enumerate(asc)][1:] or [Fraction(0)]
        return self._from_ascending(asc)

    def __str__(self) -> str:
        terms = []
        for power, c in zip(range(self.degree, -1, -1), self.coefficients):
            if c == 0 and self.degree > 0:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                body = "" if mag == 1 else f"{mag}*"
                body += "x" if power == 1 else f"x^{power}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Parse expressions like ``"2x^3 + 7x - 1"`` or ``"x**2 - 3/2*x"``."""
        src = text.replace(" ", "").replace("**", "^")
        if not src:
            raise SpecParseError("empty polynomial")
        if src[0] not in "+-":
            src = "+" + src
        term_re = re.compile(r"([+-])(\d+(?:/\d+)?(?:\.\d+)?)?\*?(x(?:\^(\d+))?)?")
        pos = 0
        terms = {}
        while pos < len(src):
            m = term_re.match(src, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise SpecParseError(f"cannot parse polynomial near {src[pos:]!r}")
            sign, coeff, var, power = m.groups()
            c = Fraction(coeff) if coeff else Fraction(1)
            if sign == "-":
                c = -c
            deg = 0 if var is None else int(power) if power else 1
            terms[deg] = terms.get(deg, Fraction(0)) + c
            pos = m.end()
        top = max(terms)
        return cls(tuple(terms.get(d, 0) for d in range(top, -1, -1)))


@dataclass(frozen=True)
class DifferenceTable:
    """rows[0] is the input sequence, rows[m] its mth forward differences."""

    rows: Tuple[Tuple[Fraction, ...], ...]
    step: Fraction = Fraction(1)

    @property
    def max_order(self) -> int:
        return len(self.rows) - 1

    def row(self, m: int) -> Tuple[Fraction, ...]:
        return self.rows[m]

    @property
    def bottom(self) -> Tuple[Fraction, ...]:
        """Highest-order row (the top of the triangle as usually drawn)."""
        return self.rows[-1]


def difference_table(seq: Sequence[Number], max_order: int, step: Number = 1) -> DifferenceTable:
    """Rows 0..max_order of the forward difference triangle of ``seq``.

    >>> difference_table([0, 1, 4, 9, 16], 2).bottom
    (Fraction(2, 1), Fraction(2, 1), Fraction(2, 1))
    """
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    if max_order >= len(seq):
        raise OrderTooLargeError(
            f"order {max_order} needs at least {max_order + 1} samples, got {len(seq)}")
    row = tuple(Fraction(u) for u in seq)
    rows = [row]
    for _ in range(max_order):
        row = tuple(row[j + 1] - row[j] for j in range(len(row) - 1))
        rows.append(row)
    return DifferenceTable(tuple(rows), Fraction(step))


def polynomial_table(P: Polynomial, count: int, max_order: int,
                     k: Number = 1, start: Number = 0) -> DifferenceTable:
    """Difference table of ``P(start + j*k)`` for j = 0..count-1."""
    k = Fraction(k)
    if k == 0:
        raise ZeroStepError("step k must be nonzero")
    start = Fraction(start)
    return difference_table([P(start + j * k) for j in range(count)], max_order, k)


def binomial_nth_difference(P: Polynomial, x: Number, k: Number, n: int) -> Fraction:
    """Exact ``sum_{i=0}^n C(n,i) (-1)^i P(x - k i)``."""
    k = Fraction(k)
    if k == 0:
        raise ZeroStepError("step k must be nonzero")
    if n < 1:
        raise ValueError("difference order n must be >= 1")
    x = Fraction(x)
    total = Fraction(0)
    for i, c in enumerate(binomial_row(n)):
        term = c * P(x - k * i)
        total += -term if i % 2 else term
    return total


def newton_constant(P: Polynomial, k: Number) -> Fraction:
    """a0 * k^n * n! for a degree-n polynomial."""
    n = P.degree
    return P.leading * Fraction(k) ** n * factorial(n)


@dataclass(frozen=True)
class NewtonSample:
    x: Fraction
    value: Fraction
    passed: bool


@dataclass(frozen=True)
class NewtonReport:
    polynomial: Polynomial
    k: Fraction
    expected: Fraction
    samples: Tuple[NewtonSample, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.samples)

    @property
    def failures(self) -> List[NewtonSample]:
        return [s for s in self.samples if not s.passed]


def verify_newton_theorem(P: Polynomial, k: Number, x_samples: Iterable[Number]) -> NewtonReport:
    """Check that the nth difference of degree-n ``P`` is a0 k^n n! at every sample."""
    n = P.degree
    if n < 1 or P.is_zero():
        raise ValueError("Newton's identity needs a polynomial of degree >= 1")
    k = Fraction(k)
    expected = newton_constant(P, k)
    samples = []
    for x in x_samples:
        value = binomial_nth_difference(P, x, k, n)
        samples.append(NewtonSample(Fraction(x), value, value == expected))
    return NewtonReport(P, k, expected, tuple(samples))
