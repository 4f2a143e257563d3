import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given, strategies as st

from diffseq.errors import DomainError, StraddlesIntegerError
from diffseq.exact_arith import (RealInterval, Verdict, compare, decide,
                                 fractional_part_interval, integer_nth_root, nth_root_interval)

rationals = st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 6)
positive_rationals = st.fractions(min_value=0, max_value=10 ** 9, max_denominator=10 ** 6)


@pytest.mark.parametrize("N, n, expected", [
    (25, 2, (5, True)),
    (26, 2, (5, False)),
    (841, 2, (29, True)),
    (0, 3, (0, True)),
    (1, 7, (1, True)),
    (7, 1, (7, True)),
])
def test_integer_nth_root_examples(N, n, expected):
    assert integer_nth_root(N, n) == expected


def test_integer_nth_root_841_by_squaring():
    # brute force: walk r upward until r*r passes 841
    r = 0
    while (r + 1) * (r + 1) <= 841:
        r += 1
    assert integer_nth_root(841, 2) == (r, r * r == 841)


@pytest.mark.parametrize("n", range(2, 11))
def test_integer_nth_root_exhaustive_to_1e6(n):
    # walk N upward once, advancing the expected root whenever (r+1)^n is reached
    r, nxt = 0, 1
    for N in range(10 ** 6 + 1):
        while nxt <= N:
            r += 1
            nxt = (r + 1) ** n
        got, exact = integer_nth_root(N, n)
        assert got == r
        assert exact == (r ** n == N)


@given(st.integers(min_value=0, max_value=2 ** 3000), st.integers(min_value=1, max_value=40))
def test_integer_nth_root_matches_gmpy2(N, n):
    root, exact = gmpy2.iroot(N, n)
    assert integer_nth_root(N, n) == (int(root), bool(exact))


@given(st.integers(min_value=2, max_value=10 ** 40), st.integers(min_value=2, max_value=12))
def test_perfect_powers_detected(r, n):
    assert integer_nth_root(r ** n, n) == (r, True)
    assert integer_nth_root(r ** n - 1, n) == (r - 1, False)


def test_integer_nth_root_domain():
    with pytest.raises(DomainError):
        integer_nth_root(-1, 2)
    with pytest.raises(DomainError):
        integer_nth_root(4, 0)


def test_nth_root_interval_sqrt2():
    iv = nth_root_interval(2, 2, 30)
    assert iv.lo ** 2 <= 2 <= iv.hi ** 2
    assert iv.width <= Fraction(2) ** (1 - 30) * max(1, iv.hi)


@pytest.mark.parametrize("N, n, bits, value", [(1, 5, 7, 1), (8, 3, 10, 2), (1, 5, 300, 1)])
def test_nth_root_interval_exact_cases(N, n, bits, value):
    iv = nth_root_interval(N, n, bits)
    assert iv.is_point and iv.lo == value


@given(positive_rationals, st.integers(min_value=1, max_value=12), st.integers(min_value=8, max_value=400))
def test_nth_root_interval_contract(q, n, bits):
    iv = nth_root_interval(q, n, bits)
    assert iv.lo ** n <= q <= iv.hi ** n
    assert iv.width <= Fraction(2) ** (1 - bits) * max(1, iv.hi)


@given(st.integers(min_value=2, max_value=10 ** 30), st.integers(min_value=2, max_value=10),
       st.integers(min_value=8, max_value=512))
def test_widths_shrink_with_precision(N, n, bits):
    assert nth_root_interval(N, n, bits + 8).width <= nth_root_interval(N, n, bits).width


@given(rationals, rationals, st.integers(min_value=4, max_value=200))
def test_enclosure_soundness(a, b, bits):
    A, B = RealInterval.from_rational(a, bits), RealInterval.from_rational(b, bits)
    assert A.contains(a) and B.contains(b)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    assert (-A).contains(-a)
    if b != 0:
        assert (A / B).contains(a / b)
    assert (A ** 3).contains(a ** 3)
    assert (A ** 2).contains(a ** 2)


@given(positive_rationals, st.integers(min_value=1, max_value=9), st.integers(min_value=4, max_value=200))
def test_nth_root_of_interval_encloses(q, n, bits):
    iv = RealInterval.from_rational(q, bits).nth_root(n)
    assert iv.lo ** n <= q <= iv.hi ** n


def test_interval_ops_mix_with_rationals():
    iv = RealInterval.from_rational(Fraction(1, 3))
    assert (iv + 1).contains(Fraction(4, 3))
    assert (1 - iv).contains(Fraction(2, 3))
    assert (2 * iv).contains(Fraction(2, 3))
    assert (1 / iv).contains(3)


def test_reciprocal_of_zero_straddle():
    with pytest.raises(ZeroDivisionError):
        RealInterval.from_bounds(-1, 1).reciprocal()


def test_compare_disjoint_at_entry():
    one = RealInterval.from_rational(1)
    other = RealInterval.from_bounds(Fraction(13, 10), Fraction(14, 10))
    assert compare(one, other) is Verdict.LESS
    assert compare(other, one) is Verdict.GREATER


def test_compare_identical_irrationals_undecided():
    make = lambda b: (nth_root_interval(5, 2, b), nth_root_interval(5, 2, b))
    assert compare(*make(64), make, max_bits=512) is Verdict.UNDECIDED


def test_compare_points_equal():
    assert compare(nth_root_interval(9, 2), RealInterval.from_rational(3)) is Verdict.EQUAL


def test_compare_sqrt13_minus_sqrt5_below_sqrt2():
    with mpmath.workdps(40):
        assert mpmath.sqrt(13) - mpmath.sqrt(5) < mpmath.sqrt(2)
    make = lambda b: (nth_root_interval(13, 2, b) - nth_root_interval(5, 2, b), nth_root_interval(2, 2, b))
    assert decide(make) is Verdict.LESS


def test_compare_escalates_to_separate_close_values():
    # 10^-30 apart: needs about 100 bits
    a = lambda b: nth_root_interval(2, 2, b)
    c = lambda b: nth_root_interval(2, 2, b) + Fraction(1, 10 ** 30)
    assert decide(lambda b: (a(b), c(b)), bits=16) is Verdict.LESS
    assert decide(lambda b: (a(b), c(b)), bits=16, max_bits=64) is Verdict.UNDECIDED


def test_compare_random_rational_pairs():
    rng = random.Random(1)
    for _ in range(1000):
        a = Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6))
        b = Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6))
        if rng.random() < 0.1:
            b = a + Fraction(1, 10 ** 15)
        bits = rng.choice([8, 16, 64])
        make = lambda p, a=a, b=b: (RealInterval.from_rational(a, p), RealInterval.from_rational(b, p))
        v = decide(make, bits=bits)
        if a < b:
            assert v is Verdict.LESS
        elif a > b:
            assert v is Verdict.GREATER
        else:
            assert v in (Verdict.EQUAL, Verdict.UNDECIDED)


def test_fractional_part_exact_dyadic():
    frac, fl = fractional_part_interval(RealInterval.from_rational(Fraction(9, 4)))
    assert fl == 2 and frac.is_point and frac.lo == Fraction(1, 4)


def test_fractional_part_sqrt5():
    frac, fl = fractional_part_interval(nth_root_interval(5, 2, 128))
    with mpmath.workdps(50):
        expected = mpmath.sqrt(5) - 2
        got = mpmath.mpf(frac.midpoint.numerator) / frac.midpoint.denominator
        assert abs(got - expected) < mpmath.mpf(10) ** -30
    assert fl == 2
    assert 0 <= frac.lo and frac.hi < 1


def test_fractional_part_straddling_integer():
    with pytest.raises(StraddlesIntegerError):
        fractional_part_interval(RealInterval.from_bounds(Fraction(2999, 1000), Fraction(3001, 1000)))
    # an exact point is fine
    assert fractional_part_interval(nth_root_interval(27, 3))[1] == 3
