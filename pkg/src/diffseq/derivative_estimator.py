"""nth-derivative estimates from a difference sequence with a Lagrange remainder bound.

For samples ``f(x + i k)``, i = 0..n, the quantity

    D = sum_i C(n, i) (-1)^i f(x + i k) / (-k)^n

estimates ``f^(n)(x0)``; the grid may start at any ``x``, not only at ``x0``.
The error is bounded by

    M / ((n+1)! |k|^n) * sum_i C(n, i) |x - x0 + i k|^(n+1)

whenever ``M >= sup |f^(n+1)|`` over the hull of the nodes and ``x0``.  ``M`` is
always supplied by the caller; nothing here guesses it.

Arithmetic is exact (``Fraction``) when every input is rational, and uses
``mpmath`` at ``WORK_DPS`` decimal digits otherwise (relative rounding well
below 2**-50).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath

from .diffseq_core import Polynomial, binomial_row
from .errors import DomainError, SpecParseError, ZeroStepError

WORK_DPS = 50

Real = Union[int, Fraction, float, mpmath.mpf]


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _mpf(v) -> mpmath.mpf:
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


@dataclass(frozen=True)
class SampleGrid:
    x: Real
    x0: Real
    k: Real
    n: int
    values: Tuple[Real, ...]
    domain: Optional[Tuple[Real, Real]] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k == 0:
            raise ZeroStepError("step k must be nonzero")
        if len(self.values) != self.n + 1:
            raise ValueError(f"need n + 1 = {self.n + 1} samples, got {len(self.values)}")
        if self.domain is not None:
            a, b = self.domain
            lo, hi = self.hull()
            # open interval (a, b) must contain every node and x0
            if not (a < lo and hi < b):
                raise DomainError(f"hull [{lo}, {hi}] is not inside the domain ({a}, {b})")

    @property
    def nodes(self) -> List[Real]:
        return [self.x + i * self.k for i in range(self.n + 1)]

    def hull(self) -> Tuple[Real, Real]:
        pts = self.nodes + [self.x0]
        return min(pts), max(pts)

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for v in (self.x, self.x0, self.k, *self.values))


@dataclass(frozen=True)
class DerivativeEstimate:
    value: Real
    error_bound: Real
    n: int


def sample_grid(f: Callable, x: Real, x0: Real, k: Real, n: int,
                domain: Optional[Tuple[Real, Real]] = None) -> SampleGrid:
    """Evaluate ``f`` on x, x+k, ..., x+nk.

    A Polynomial on rational nodes gives an exact grid; anything else is
    evaluated under mpmath.
    """
    if k == 0:
        raise ZeroStepError("step k must be nonzero")
    if isinstance(f, Polynomial) and all(_is_exact(v) for v in (x, x0, k)):
        vals = [f(Fraction(x) + i * Fraction(k)) for i in range(n + 1)]
    else:
        with mpmath.workdps(WORK_DPS):
            xm, km = _mpf(x), _mpf(k)
            vals = [f(xm + i * km) for i in range(n + 1)]
    return SampleGrid(x, x0, k, n, tuple(vals), domain)


def estimate_nth_derivative(grid: SampleGrid) -> Real:
    """Difference-sequence estimate of f^(n)(x0)."""
    coeffs = binomial_row(grid.n)
    if grid.exact:
        s = sum((c * Fraction(v) if i % 2 == 0 else -c * Fraction(v))
                for i, (c, v) in enumerate(zip(coeffs, grid.values)))
        return s / (-Fraction(grid.k)) ** grid.n
    with mpmath.workdps(WORK_DPS):
        s = mpmath.fsum((c if i % 2 == 0 else -c) * _mpf(v)
                        for i, (c, v) in enumerate(zip(coeffs, grid.values)))
        return s / (-_mpf(grid.k)) ** grid.n


def remainder_bound(grid: SampleGrid, M: Real) -> Real:
    """Worst-case |estimate - f^(n)(x0)| given M >= sup |f^(n+1)| on the hull.

    For x == x0 the i = 0 term is zero, so only i = 1..n contribute.
    """
    if M < 0:
        raise ValueError("M must be nonnegative")
    n = grid.n
    coeffs = binomial_row(n)
    if grid.exact and _is_exact(M):
        k, d = Fraction(grid.k), Fraction(grid.x) - Fraction(grid.x0)
        s = sum(c * abs(d + i * k) ** (n + 1) for i, c in enumerate(coeffs))
        return Fraction(M) * s / (factorial(n + 1) * abs(k) ** n)
    with mpmath.workdps(WORK_DPS):
        k, d = _mpf(grid.k), _mpf(grid.x) - _mpf(grid.x0)
        s = mpmath.fsum(c * abs(d + i * k) ** (n + 1) for i, c in enumerate(coeffs))
        return _mpf(M) * s / (factorial(n + 1) * abs(k) ** n)


def estimate(grid: SampleGrid, M: Real) -> DerivativeEstimate:
    return DerivativeEstimate(estimate_nth_derivative(grid), remainder_bound(grid, M), grid.n)


@dataclass(frozen=True)
class ConvergenceRow:
    k: Real
    estimate: Real
    bound: Optional[Real]


def convergence_study(f: Callable, x0: Real, n: int, k_schedule: Sequence[Real],
                      x: Optional[Real] = None,
                      M: Union[None, Real, Callable[[Real, Real], Real]] = None,
                      domain: Optional[Tuple[Real, Real]] = None) -> List[ConvergenceRow]:
    """One (k, estimate, bound) row per step size.

    ``M`` may be a constant or a callable ``M(lo, hi)`` giving the declared
    sup of |f^(n+1)| over the hull of each grid.  The grid starts at ``x``
    (default ``x0``).
    """
    start = x0 if x is None else x
    rows = []
    for k in k_schedule:
        grid = sample_grid(f, start, x0, k, n, domain)
        value = estimate_nth_derivative(grid)
        if M is None:
            bound = None
        else:
            m = M(*grid.hull()) if callable(M) else M
            bound = remainder_bound(grid, m)
        rows.append(ConvergenceRow(k, value, bound))
    return rows


# Functions accepted by the CLI.  M is still declared by the caller.
BUILTIN_FUNCTIONS = {"exp": mpmath.exp, "sin": mpmath.sin, "cos": mpmath.cos}


def resolve_function(spec: str) -> Callable:
    """Map ``exp``, ``sin``, ``cos`` or ``poly:<polynomial>`` to a callable."""
    spec = spec.strip()
    if spec in BUILTIN_FUNCTIONS:
        return BUILTIN_FUNCTIONS[spec]
    if spec.startswith("poly:"):
        return Polynomial.parse(spec[5:])
    raise SpecParseError(f"unknown function {spec!r}; use exp, sin, cos or poly:<expr>")
