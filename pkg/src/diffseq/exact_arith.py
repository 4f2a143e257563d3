"""Exact integer roots and outward-rounded dyadic interval arithmetic.

Every irrational quantity in the package (nth roots, their differences and
reciprocals) is carried as a :class:`RealInterval` whose endpoints are dyadic
rationals ``m * 2**e``.  Endpoints are rounded outward after each operation, so
the exact real value always lies inside.  Strict inequalities between such
values are decided by :func:`compare`, which refines precision until the
enclosures separate.  Equality is never inferred from overlapping intervals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

from .errors import DomainError, StraddlesIntegerError

DEFAULT_BITS = 64
DEFAULT_MAX_BITS = 4096
# extra mantissa bits kept beyond the nominal precision
_GUARD = 8

Rational = Union[int, Fraction]


def _floor_root(N: int, n: int) -> int:
    """floor(N ** (1/n)) for N >= 0, n >= 1."""
    if N < 2 or n == 1:
        return N
    if n == 2:
        return math.isqrt(N)
    bl = N.bit_length()
    if bl <= n:
        return 1
    # float seed from the top ~64 bits, pushed above the true root
    shift = max(0, bl - 64)
    shift -= shift % n
    approx = (N >> shift) ** (1.0 / n)
    x = (int(approx * (1 + 2.0 ** -40)) + 2) << (shift // n)
    # Newton from above decreases monotonically to the floor root
    while True:
        y = ((n - 1) * x + N // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x ** n > N:
        x -= 1
    while (x + 1) ** n <= N:
        x += 1
    return x


def integer_nth_root(N: int, n: int) -> Tuple[int, bool]:
    """Return ``(floor(N**(1/n)), exact)`` where exact means root**n == N.

    >>> integer_nth_root(841, 2)
    (29, True)
    """
    if n < 1:
        raise DomainError(f"root degree must be >= 1, got {n}")
    if N < 0:
        raise DomainError(f"cannot take an integer root of negative {N}")
    r = _floor_root(N, n)
    return r, r ** n == N


def is_perfect_power(N: int, n: int) -> bool:
    return integer_nth_root(N, n)[1]


def _cmp_dyadic(m1: int, e1: int, m2: int, e2: int) -> int:
    if e1 >= e2:
        a, b = m1 << (e1 - e2), m2
    else:
        a, b = m1, m2 << (e2 - e1)
    return (a > b) - (a < b)


def _rational_bounds(a: int, b: int, bits: int) -> Tuple[int, int, int]:
    """Dyadic bracket (lo_m, hi_m, e) of a/b with b > 0."""
    if a == 0:
        return 0, 0, 0
    if b & (b - 1) == 0:
        return a, a, -(b.bit_length() - 1)
    e = abs(a).bit_length() - b.bit_length() - bits - _GUARD
    if e <= 0:
        num, den = a << -e, b
    else:
        num, den = a, b << e
    lo = num // den
    hi = -((-num) // den)
    return lo, hi, e


def _root_bounds(a: int, b: int, n: int, bits: int) -> Tuple[int, int, int]:
    """Dyadic bracket (lo_r, hi_r, f) of (a/b)**(1/n) for a >= 0, b > 0."""
    if a == 0:
        return 0, 0, 0
    est = (a.bit_length() - b.bit_length()) // n
    f = est - bits - 2
    s = -n * f
    if s >= 0:
        num, den = a << s, b
    else:
        num, den = a, b << -s
    q, rem = divmod(num, den)
    r = _floor_root(q, n)
    exact = rem == 0 and r ** n == q
    return r, (r if exact else r + 1), f


def _dyadic_as_ratio(m: int, e: int) -> Tuple[int, int]:
    return (m << e, 1) if e >= 0 else (m, 1 << -e)


def _make(lo_m: int, lo_e: int, hi_m: int, hi_e: int, bits: int) -> "RealInterval":
    """Align two dyadic endpoints and round outward to ``bits`` (+guard) bits."""
    e = min(lo_e, hi_e)
    lo_m <<= lo_e - e
    hi_m <<= hi_e - e
    size = max(abs(lo_m), abs(hi_m)).bit_length()
    s = size - bits - _GUARD
    if s > 0:
        lo_m >>= s
        hi_m = -((-hi_m) >> s)
        e += s
    return RealInterval(lo_m, hi_m, e, bits)


@dataclass(frozen=True)
class RealInterval:
    """Closed interval ``[lo_m * 2**exp, hi_m * 2**exp]`` enclosing one real."""

    lo_m: int
    hi_m: int
    exp: int
    precision_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if self.lo_m > self.hi_m:
            raise ValueError("interval lower endpoint exceeds upper endpoint")
        if self.precision_bits < 1:
            raise ValueError("precision_bits must be positive")

    # construction -------------------------------------------------------

    @classmethod
    def from_rational(cls, q: Rational, bits: int = DEFAULT_BITS) -> "RealInterval":
        """Tightest dyadic enclosure of ``q`` at the given precision."""
        q = Fraction(q)
        lo, hi, e = _rational_bounds(q.numerator, q.denominator, bits)
        return _make(lo, e, hi, e, bits)

    @classmethod
    def from_bounds(cls, lo: Rational, hi: Rational, bits: int = DEFAULT_BITS) -> "RealInterval":
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("lo > hi")
        l_lo, _, l_e = _rational_bounds(lo.numerator, lo.denominator, bits)
        _, h_hi, h_e = _rational_bounds(hi.numerator, hi.denominator, bits)
        return _make(l_lo, l_e, h_hi, h_e, bits)

    # inspection ---------------------------------------------------------

    @property
    def lo(self) -> Fraction:
        return Fraction(*_dyadic_as_ratio(self.lo_m, self.exp))

    @property
    def hi(self) -> Fraction:
        return Fraction(*_dyadic_as_ratio(self.hi_m, self.exp))

    @property
    def width(self) -> Fraction:
        return Fraction(*_dyadic_as_ratio(self.hi_m - self.lo_m, self.exp))

    @property
    def midpoint(self) -> Fraction:
        return Fraction(*_dyadic_as_ratio(self.lo_m + self.hi_m, self.exp - 1))

    @property
    def is_point(self) -> bool:
        return self.lo_m == self.hi_m

    def contains(self, q: Rational) -> bool:
        return self.lo <= q <= self.hi

    def floor_bounds(self) -> Tuple[int, int]:
        """(floor(lo), floor(hi))."""
        if self.exp >= 0:
            return self.lo_m << self.exp, self.hi_m << self.exp
        return self.lo_m >> -self.exp, self.hi_m >> -self.exp

    def __float__(self) -> float:
        return float(self.midpoint)

    def __repr__(self) -> str:
        return f"RealInterval([{float(self.lo)!r}, {float(self.hi)!r}], bits={self.precision_bits})"

    def with_bits(self, bits: int) -> "RealInterval":
        return _make(self.lo_m, self.exp, self.hi_m, self.exp, bits)

    def intersect(self, other: "RealInterval") -> "RealInterval":
        bits = max(self.precision_bits, other.precision_bits)
        if _cmp_dyadic(self.lo_m, self.exp, other.lo_m, other.exp) >= 0:
            lo = (self.lo_m, self.exp)
        else:
            lo = (other.lo_m, other.exp)
        if _cmp_dyadic(self.hi_m, self.exp, other.hi_m, other.exp) <= 0:
            hi = (self.hi_m, self.exp)
        else:
            hi = (other.hi_m, other.exp)
        if _cmp_dyadic(lo[0], lo[1], hi[0], hi[1]) > 0:
            raise ValueError("intervals are disjoint")
        return _make(lo[0], lo[1], hi[0], hi[1], bits)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RealInterval.from_rational(other, self.precision_bits)
        return NotImplemented

    def __neg__(self) -> "RealInterval":
        return RealInterval(-self.hi_m, -self.lo_m, self.exp, self.precision_bits)

    def __add__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bits = max(self.precision_bits, other.precision_bits)
        e = min(self.exp, other.exp)
        a, b = self.exp - e, other.exp - e
        return _make((self.lo_m << a) + (other.lo_m << b), e,
                     (self.hi_m << a) + (other.hi_m << b), e, bits)

    __radd__ = __add__

    def __sub__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RealInterval":
        return (-self) + other

    def __mul__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bits = max(self.precision_bits, other.precision_bits)
        prods = (self.lo_m * other.lo_m, self.lo_m * other.hi_m,
                 self.hi_m * other.lo_m, self.hi_m * other.hi_m)
        e = self.exp + other.exp
        return _make(min(prods), e, max(prods), e, bits)

    __rmul__ = __mul__

    def reciprocal(self) -> "RealInterval":
        if self.lo_m <= 0 <= self.hi_m:
            raise ZeroDivisionError("interval contains zero")
        return RealInterval.from_bounds(1 / self.hi, 1 / self.lo, self.precision_bits)

    def __truediv__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "RealInterval":
        return self.reciprocal() * other

    def __pow__(self, k: int) -> "RealInterval":
        if not isinstance(k, int) or k < 0:
            raise DomainError("only nonnegative integer powers are supported")
        if k == 0:
            return RealInterval(1, 1, 0, self.precision_bits)
        if k % 2 == 0 and self.lo_m < 0 < self.hi_m:
            top = max(-self.lo_m, self.hi_m) ** k
            return _make(0, 0, top, self.exp * k, self.precision_bits)
        a, b = self.lo_m ** k, self.hi_m ** k
        return _make(min(a, b), self.exp * k, max(a, b), self.exp * k, self.precision_bits)

    def nth_root(self, n: int) -> "RealInterval":
        if n < 1:
            raise DomainError("root degree must be >= 1")
        if self.lo_m < 0:
            raise DomainError("nth root of an interval with negative part")
        bits = self.precision_bits
        lo, _, f_lo = _root_bounds(*_dyadic_as_ratio(self.lo_m, self.exp), n, bits)
        _, hi, f_hi = _root_bounds(*_dyadic_as_ratio(self.hi_m, self.exp), n, bits)
        return _make(lo, f_lo, hi, f_hi, bits)


def nth_root_interval(N: Rational, n: int, precision_bits: int = DEFAULT_BITS) -> RealInterval:
    """Enclosure of the real ``N ** (1/n)`` with relative width about 2**-precision_bits.

    Exact roots of integers and rationals come back as point intervals.
    """
    if n < 1:
        raise DomainError("root degree must be >= 1")
    N = Fraction(N)
    if N < 0:
        raise DomainError("nth_root_interval needs N >= 0")
    lo, hi, f = _root_bounds(N.numerator, N.denominator, n, precision_bits)
    return _make(lo, f, hi, f, precision_bits)


class Verdict(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    UNDECIDED = "undecided"


def _separate(a: RealInterval, b: RealInterval) -> Optional[Verdict]:
    if _cmp_dyadic(a.hi_m, a.exp, b.lo_m, b.exp) < 0:
        return Verdict.LESS
    if _cmp_dyadic(a.lo_m, a.exp, b.hi_m, b.exp) > 0:
        return Verdict.GREATER
    # point intervals are exact values, so coincidence is a real equality
    if a.is_point and b.is_point:
        return Verdict.EQUAL
    return None


def compare(a: RealInterval, b: RealInterval,
            escalate: Optional[Callable[[int], Tuple[RealInterval, RealInterval]]] = None,
            max_bits: int = DEFAULT_MAX_BITS) -> Verdict:
    """Certified order of the reals enclosed by ``a`` and ``b``.

    ``escalate(bits)`` must recompute both operands at the requested precision.
    Precision doubles until the intervals separate or ``max_bits`` is reached,
    in which case ``Verdict.UNDECIDED`` is returned.
    """
    bits = max(a.precision_bits, b.precision_bits)
    while True:
        v = _separate(a, b)
        if v is not None:
            return v
        if escalate is None or bits >= max_bits:
            return Verdict.UNDECIDED
        bits = min(2 * bits, max_bits)
        a, b = escalate(bits)


def decide(make: Callable[[int], Tuple[RealInterval, RealInterval]],
           bits: int = DEFAULT_BITS, max_bits: int = DEFAULT_MAX_BITS) -> Verdict:
    """Shorthand for ``compare(*make(bits), escalate=make, max_bits=max_bits)``."""
    a, b = make(bits)
    return compare(a, b, make, max_bits)


def fractional_part_interval(a: RealInterval) -> Tuple[RealInterval, int]:
    """Split ``a`` into (enclosure of x - floor(x), floor(x)).

    Raises StraddlesIntegerError when the enclosure crosses an integer, since
    the floor is then undetermined (x may itself be that integer).
    """
    f_lo, f_hi = a.floor_bounds()
    if f_lo != f_hi:
        raise StraddlesIntegerError(f"interval {a!r} contains the integer {f_hi}")
    return a - f_lo, f_lo
