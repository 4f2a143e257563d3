"""Branches z^n = A (x'+p)^n + p^n of the equation z^n = A x^n + y^n.

A branch fixes the leg difference x' = x - y and sweeps p (playing the role
of y).  Along it the real root z_p = (A (x'+p)^n + p^n)^(1/n) advances by

    Step(p) = z_{p+1} - z_p,

which for A = 1 lies strictly between 1 and 2^(1/n).  Consequently two
integer points on a branch are at least ceil(1 / (2^(1/n) - 1)) indices apart.
For A > 1 the analogous upper bound (A+1)^(1/n) is only checked empirically,
and reports carry ``CONJECTURE`` to say so.

Integrality is always decided with exact integer roots; intervals are used
only for strict inequalities.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, factorial
from typing import Iterator, List, Optional, Sequence, Tuple

from .diffseq_core import binomial_row
from .errors import (BudgetExceeded, DiffseqError, DomainError, HypothesisViolation,
                     PrecisionExhausted, StraddlesIntegerError)
from .exact_arith import (DEFAULT_BITS, DEFAULT_MAX_BITS, RealInterval, Verdict, compare,
                          decide, fractional_part_interval, integer_nth_root,
                          nth_root_interval)

LEMMA = "lemma-confirmed"
CONJECTURE = "empirical (conjecture)"

DEFAULT_BUDGET = 10 ** 8
CHUNK = 10_000

_ONE = RealInterval(1, 1, 0)


@dataclass(frozen=True)
class Branch:
    x_prime: int
    n: int
    A: int = 1

    def __post_init__(self):
        if self.x_prime < 1:
            raise DomainError("x' must be >= 1 (x > y)")
        if self.n < 2:
            raise DomainError("power n must be >= 2")
        if self.A < 1:
            raise DomainError("coefficient A must be >= 1")

    @property
    def grade(self) -> str:
        return LEMMA if self.A == 1 else CONJECTURE

    def zn(self, p: int) -> int:
        if p < 0:
            raise DomainError("branch index p must be >= 0")
        return self.A * (self.x_prime + p) ** self.n + p ** self.n

    def z(self, p: int, bits: int = DEFAULT_BITS) -> RealInterval:
        return nth_root_interval(self.zn(p), self.n, bits)

    def step_ceiling(self, bits: int = DEFAULT_BITS) -> RealInterval:
        """Enclosure of (A+1)^(1/n)."""
        return nth_root_interval(self.A + 1, self.n, bits)


@dataclass(frozen=True)
class BranchPoint:
    p: int
    zn: int
    z_floor: int
    is_integer: bool
    z: RealInterval


def branch_point(branch: Branch, p: int, bits: int = DEFAULT_BITS) -> BranchPoint:
    zn = branch.zn(p)
    root, exact = integer_nth_root(zn, branch.n)
    z = RealInterval(root, root, 0, bits) if exact else nth_root_interval(zn, branch.n, bits)
    return BranchPoint(p, zn, root, exact, z)


@dataclass(frozen=True)
class IdentityCheck:
    branch: Branch
    y: int
    total: int
    expected: int

    @property
    def residual(self) -> int:
        return self.total - self.expected

    @property
    def passed(self) -> bool:
        return self.residual == 0


def verify_branch_identity(branch: Branch, y: int) -> IdentityCheck:
    """Exact check of sum_i C(n,i) (-1)^(n-i) z^n_{y+i} = (A+1) n!."""
    if y < 0:
        raise DomainError("y must be >= 0")
    n = branch.n
    total = 0
    for i, c in enumerate(binomial_row(n)):
        term = c * branch.zn(y + i)
        total += term if (n - i) % 2 == 0 else -term
    return IdentityCheck(branch, y, total, (branch.A + 1) * factorial(n))


# --- Step values -----------------------------------------------------------

@dataclass(frozen=True)
class StepValue:
    p: int
    interval: RealInterval
    frac: Optional[RealInterval]
    floor: Optional[int]


def step_interval(branch: Branch, p: int, bits: int = DEFAULT_BITS) -> RealInterval:
    return branch.z(p + 1, bits) - branch.z(p, bits)


def step(branch: Branch, p: int, precision: int = DEFAULT_BITS,
         max_bits: int = DEFAULT_MAX_BITS) -> StepValue:
    """Enclosure of Step(p) and, when its floor is decidable, of {Step(p)}.

    Precision is raised until the floor separates or ``max_bits`` is hit, in
    which case ``frac`` and ``floor`` are None.
    """
    bits = precision
    while True:
        iv = step_interval(branch, p, bits)
        try:
            frac, fl = fractional_part_interval(iv)
            return StepValue(p, iv, frac, fl)
        except StraddlesIntegerError:
            if bits >= max_bits:
                return StepValue(p, iv, None, None)
            bits = min(2 * bits, max_bits)


def step_limit(alpha, n: int, bits: int = DEFAULT_BITS) -> RealInterval:
    """Enclosure of (1 + (1/(1+alpha))^n)^(1/n) for 0 < alpha <= 1."""
    alpha = Fraction(alpha)
    if n < 2:
        raise DomainError("n must be >= 2")
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1]")
    return nth_root_interval(1 + (1 / (1 + alpha)) ** n, n, bits)


def step_asymptote(alpha, n: int, bits: int = DEFAULT_BITS) -> RealInterval:
    """Limit of Step(x', p, n) as p -> infinity with x'/p -> alpha (alpha >= 0).

    This is the derivative of z along p at direction (1, 1):
    ((1+alpha)^(n-1) + 1) / ((1+alpha)^n + 1)^((n-1)/n).
    """
    alpha = Fraction(alpha)
    if n < 2:
        raise DomainError("n must be >= 2")
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    s = 1 + alpha
    root = nth_root_interval(s ** n + 1, n, bits + 16)
    return (RealInterval.from_rational(s ** (n - 1) + 1, bits + 16) / root ** (n - 1)).with_bits(bits)


# --- streaming certification ------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    """One scanned branch index: exact z^n, integrality and certified verdicts.

    ``lower`` is compare(Step, 1), ``upper`` is compare(Step, (A+1)^(1/n)) and
    ``monotone`` is compare(Step(p), Step(p-1)); the bounds hold when they read
    GREATER, LESS and GREATER respectively.
    """

    x_prime: int
    n: int
    A: int
    p: int
    zn: int
    is_integer: bool
    step_lo: Fraction
    step_hi: Fraction
    lower: Verdict
    upper: Verdict
    monotone: Optional[Verdict]
    bits: int

    @property
    def verdicts(self) -> Tuple[Optional[Verdict], ...]:
        return (self.lower, self.upper, self.monotone)

    @property
    def undecided(self) -> bool:
        return Verdict.UNDECIDED in self.verdicts

    @property
    def bounds_ok(self) -> bool:
        return self.lower is Verdict.GREATER and self.upper is Verdict.LESS

    @property
    def violation(self) -> bool:
        """A decided verdict that contradicts the expected inequality."""
        bad_lower = self.lower in (Verdict.LESS, Verdict.EQUAL)
        bad_upper = self.upper in (Verdict.GREATER, Verdict.EQUAL)
        bad_mono = self.monotone in (Verdict.LESS, Verdict.EQUAL)
        return bad_lower or bad_upper or bad_mono


def scan_branch(branch: Branch, start: int, stop: int, bits: int = DEFAULT_BITS,
                max_bits: int = DEFAULT_MAX_BITS, check_monotone: bool = True) -> Iterator[StepRecord]:
    """Stream StepRecords for p in [start, stop) in constant memory."""
    if start < 0 or stop < start:
        raise DomainError("need 0 <= start <= stop")
    n, A = branch.n, branch.A
    ceiling = branch.step_ceiling(bits)
    z_p = branch.z(start, bits)
    prev = step_interval(branch, start - 1, bits) if (check_monotone and start > 0) else None
    for p in range(start, stop):
        z_next = branch.z(p + 1, bits)
        st = z_next - z_p
        used = [bits]

        def refine_lower(b, p=p):
            used.append(b)
            return step_interval(branch, p, b), _ONE

        def refine_upper(b, p=p):
            used.append(b)
            return step_interval(branch, p, b), branch.step_ceiling(b)

        def refine_mono(b, p=p):
            used.append(b)
            return step_interval(branch, p, b), step_interval(branch, p - 1, b)

        lower = compare(st, _ONE, refine_lower, max_bits)
        upper = compare(st, ceiling, refine_upper, max_bits)
        mono = compare(st, prev, refine_mono, max_bits) if prev is not None else None
        zn = branch.zn(p)
        yield StepRecord(branch.x_prime, n, A, p, zn, integer_nth_root(zn, n)[1],
                         st.lo, st.hi, lower, upper, mono, max(used))
        z_p = z_next
        if check_monotone:
            prev = st


def _scan_chunk(args) -> List[StepRecord]:
    branch, start, stop, bits, max_bits, check_monotone = args
    return list(scan_branch(branch, start, stop, bits, max_bits, check_monotone))


def scan_branch_parallel(branch: Branch, start: int, stop: int, bits: int = DEFAULT_BITS,
                         max_bits: int = DEFAULT_MAX_BITS, threads: int = 1,
                         check_monotone: bool = True, chunk: int = CHUNK) -> Iterator[StepRecord]:
    """Like scan_branch, split over worker processes; output stays ordered by p."""
    if threads <= 1 or stop - start <= chunk:
        yield from scan_branch(branch, start, stop, bits, max_bits, check_monotone)
        return
    jobs = [(branch, a, min(a + chunk, stop), bits, max_bits, check_monotone)
            for a in range(start, stop, chunk)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for records in pool.map(_scan_chunk, jobs):
            yield from records


@dataclass(frozen=True)
class StepBoundsReport:
    branch: Branch
    p_range: range
    grade: str
    certified: int
    violations: Tuple[int, ...]
    undecided: Tuple[Tuple[int, int], ...]  # (p, bits at which refinement stopped)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.undecided


def certify_step_bounds(branch: Branch, p_range: range, bits: int = DEFAULT_BITS,
                        max_bits: int = DEFAULT_MAX_BITS, threads: int = 1) -> StepBoundsReport:
    """Certify 1 < Step(p) < (A+1)^(1/n) for every p in ``p_range``."""
    if p_range.step != 1:
        raise ValueError("p_range must be contiguous")
    certified, violations, undecided = 0, [], []
    for rec in scan_branch_parallel(branch, p_range.start, p_range.stop, bits, max_bits,
                                    threads, check_monotone=False):
        if rec.bounds_ok:
            certified += 1
        elif rec.lower is Verdict.UNDECIDED or rec.upper is Verdict.UNDECIDED:
            undecided.append((rec.p, rec.bits))
        else:
            violations.append(rec.p)
    return StepBoundsReport(branch, p_range, branch.grade, certified,
                            tuple(violations), tuple(undecided))


@dataclass(frozen=True)
class MonotoneReport:
    branch: Branch
    p_range: range
    certified_pairs: int
    violations: Tuple[int, ...]
    undecided: Tuple[Tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.undecided


def certify_step_monotone(branch: Branch, p_range: range, bits: int = DEFAULT_BITS,
                          max_bits: int = DEFAULT_MAX_BITS) -> MonotoneReport:
    """Certify Step(p) > Step(p-1) for consecutive p inside ``p_range``.

    Holds only over the scanned range; nothing global is claimed.
    """
    if branch.A != 1:
        raise DomainError("monotonicity certification is defined for A = 1")
    certified, violations, undecided = 0, [], []
    if len(p_range) > 1:
        for rec in scan_branch(branch, p_range.start + 1, p_range.stop, bits, max_bits):
            if rec.monotone is Verdict.GREATER:
                certified += 1
            elif rec.monotone is Verdict.UNDECIDED:
                undecided.append((rec.p, rec.bits))
            else:
                violations.append(rec.p)
    return MonotoneReport(branch, p_range, certified, tuple(violations), tuple(undecided))


# --- gap bounds ---------------------------------------------------------------

def gap_threshold(n: int, A: int = 1, bits: int = DEFAULT_BITS) -> RealInterval:
    """Enclosure of 1 / ((A+1)^(1/n) - 1)."""
    return (nth_root_interval(A + 1, n, bits) - 1).reciprocal()


def min_gap(n: int, A: int = 1, bits: int = DEFAULT_BITS,
            max_bits: int = DEFAULT_MAX_BITS) -> int:
    """ceil(1 / ((A+1)^(1/n) - 1)), the least index distance between integer points."""
    if n < 2:
        raise DomainError("n must be >= 2")
    if A < 1:
        raise DomainError("A must be >= 1")
    r, exact = integer_nth_root(A + 1, n)
    if exact:
        return ceil(Fraction(1, r - 1))
    # (A+1)^(1/n) irrational, so the threshold is never an integer
    while True:
        lo, hi = gap_threshold(n, A, bits).floor_bounds()
        if lo == hi:
            return lo + 1
        if bits >= max_bits:
            raise PrecisionExhausted(f"ceiling undecided at {bits} bits", bits)
        bits = min(2 * bits, max_bits)


def fermat_y_bound(n: int, bits: int = DEFAULT_BITS, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Largest integer y with y < 1 / (2^(1/n) - 1)."""
    if n < 3:
        raise DomainError("n must be >= 3")
    while True:
        lo, hi = gap_threshold(n, 1, bits).floor_bounds()
        if lo == hi:
            # threshold is irrational, so floor is the largest integer below it
            return lo
        if bits >= max_bits:
            raise PrecisionExhausted(f"floor undecided at {bits} bits", bits)
        bits = min(2 * bits, max_bits)


def conditional_gap_bound(n: int, j: int, bits: int = DEFAULT_BITS,
                          max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Least admissible index distance to the next integer point when the
    current fractional part is below (2^(1/n) - 1) * j.

    Raises HypothesisViolation unless (2^(1/n) - 1) * j < 1.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if j < 1:
        raise DomainError("j must be >= 1")
    v = decide(lambda b: ((nth_root_interval(2, n, b) - 1) * j, _ONE), bits, max_bits)
    if v is Verdict.UNDECIDED:
        raise PrecisionExhausted("hypothesis check undecided", max_bits)
    if v is not Verdict.LESS:
        raise HypothesisViolation(f"(2^(1/{n}) - 1) * {j} >= 1")
    return min_gap(n, 1, bits, max_bits) - j


# --- fractional accumulation ------------------------------------------------------

@dataclass(frozen=True)
class FracAccumulation:
    branch: Branch
    entries: Tuple[Tuple[int, RealInterval], ...]  # (p, enclosure of sum_{k<p} {Step(k)})
    floors: Tuple[int, ...]
    first_crossing: Optional[int]


def frac_accumulation(branch: Branch, p_max: int, bits: int = DEFAULT_BITS,
                      max_bits: int = DEFAULT_MAX_BITS) -> FracAccumulation:
    """Running sums of {Step(k)}, k < p, for p = 1..p_max, and the first p
    at which the sum reaches 1.

    Each running sum is also computed in telescoped form z_p - x' - sum floor(Step);
    the two enclosures must overlap and their intersection is kept.  At exact
    integer points the telescoped form is an exact integer.
    """
    if branch.A != 1:
        raise DomainError("fractional accumulation is defined for A = 1")
    if p_max < 1:
        raise DomainError("p_max must be >= 1")
    x = branch.x_prime
    running = RealInterval(0, 0, 0, bits)
    floor_sum = 0
    entries, floors = [], []
    first = None
    for k in range(p_max):
        sv = step(branch, k, bits, max_bits)
        if sv.frac is None:
            raise PrecisionExhausted(f"floor of Step({k}) undecided", max_bits)
        floor_sum += sv.floor
        floors.append(sv.floor)
        m = k + 1
        bp = branch_point(branch, m, bits)
        offset = x + floor_sum

        def telescoped(b, zn=bp.zn, offset=offset):
            return nth_root_interval(zn, branch.n, b) - offset

        tele = bp.z - offset
        try:
            running = (running + sv.frac).intersect(tele)
        except ValueError:
            raise DiffseqError(f"telescoping cross-check failed at p={m}") from None
        if first is None:
            v = compare(running, _ONE, lambda b: (telescoped(b), _ONE), max_bits)
            if v is Verdict.UNDECIDED:
                raise PrecisionExhausted(f"running sum at p={m} straddles 1", max_bits)
            if v is not Verdict.LESS:
                first = m
        entries.append((m, running))
    return FracAccumulation(branch, tuple(entries), tuple(floors), first)


# --- exact integer-point scans ------------------------------------------------------

@dataclass(frozen=True)
class GapAuditReport:
    branch: Branch
    p_max: int
    integer_points: Tuple[int, ...]
    gaps: Tuple[int, ...]
    min_gap_required: int
    violations: Tuple[int, ...] = field(default=())
    grade: str = LEMMA

    @property
    def ok(self) -> bool:
        return not self.violations


def integer_points(branch: Branch, p_max: int, p_min: int = 0) -> List[int]:
    """All p in [p_min, p_max] with z^n_p a perfect nth power (exact)."""
    A, n, x = branch.A, branch.n, branch.x_prime
    out = []
    for p in range(p_min, p_max + 1):
        zn = A * (x + p) ** n + p ** n
        if integer_nth_root(zn, n)[1]:
            out.append(p)
    return out


def gap_audit(branch: Branch, p_max: int) -> GapAuditReport:
    """Every consecutive pair of integer points must be >= min_gap(n, A) apart."""
    if p_max < 0:
        raise DomainError("p_max must be >= 0")
    pts = integer_points(branch, p_max)
    gaps = tuple(b - a for a, b in zip(pts, pts[1:]))
    need = min_gap(branch.n, branch.A)
    return GapAuditReport(branch, p_max, tuple(pts), gaps, need,
                          tuple(g for g in gaps if g < need), branch.grade)


def brute_force_solutions(n: int, A: int, x_prime_max: int, p_max: int,
                          budget: int = DEFAULT_BUDGET,
                          x_prime_min: int = 1) -> List[Tuple[int, int, int]]:
    """Every (x', p, z) with z^n = A (x'+p)^n + p^n in the given box.

    Root-free: z is advanced monotonically alongside p and each candidate is
    tested by exponentiation, so it shares no code path with integer_nth_root.
    """
    if n < 2 or A < 1 or x_prime_min < 1 or x_prime_max < x_prime_min or p_max < 0:
        raise DomainError("invalid search box")
    work = (x_prime_max - x_prime_min + 1) * (p_max + 1)
    if work > budget:
        raise BudgetExceeded(f"{work} candidates exceed budget {budget}")
    out = []
    for xp in range(x_prime_min, x_prime_max + 1):
        z, zpow = 0, 0
        for p in range(p_max + 1):
            target = A * (xp + p) ** n + p ** n
            while zpow < target:
                z += 1
                zpow = z ** n
            if zpow == target:
                out.append((xp, p, z))
    return out
