from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from diffseq.diffseq_core import (Polynomial, binomial_nth_difference, binomial_row,
                                  difference_table, polynomial_table, verify_newton_theorem)
from diffseq.errors import OrderTooLargeError, SpecParseError, ZeroStepError

small_fracs = st.fractions(min_value=-50, max_value=50, max_denominator=20)
nonzero_fracs = small_fracs.filter(lambda q: q != 0)


@st.composite
def polynomials(draw, min_degree=0, max_degree=6):
    deg = draw(st.integers(min_value=min_degree, max_value=max_degree))
    lead = draw(nonzero_fracs)
    rest = draw(st.lists(small_fracs, min_size=deg, max_size=deg))
    return Polynomial((lead, *rest))


# difference tables of u_k = k, k^2, k^3
POWER_TABLES = [
    ([0, 1, 2, 3, 4, 5, 6], 1, [1, 1, 1, 1, 1, 1]),
    ([0, 1, 4, 9, 16, 25, 36], 2, [2, 2, 2, 2, 2]),
    ([0, 1, 8, 27, 64, 125, 216], 3, [6, 6, 6, 6]),
]


@pytest.mark.parametrize("seq, order, bottom", POWER_TABLES)
def test_power_tables(seq, order, bottom):
    table = difference_table(seq, order)
    assert list(table.bottom) == bottom
    assert list(table.row(0)) == seq


def test_cube_table_intermediate_rows():
    table = difference_table([0, 1, 8, 27, 64, 125, 216], 3)
    assert list(table.row(1)) == [1, 7, 19, 37, 61, 91]
    assert list(table.row(2)) == [6, 12, 18, 24, 30]


def test_constant_sequence():
    assert list(difference_table([7, 7, 7], 1).bottom) == [0, 0]


def test_order_too_large():
    with pytest.raises(OrderTooLargeError):
        difference_table([1, 2, 3], 3)


def test_input_not_modified():
    seq = [Fraction(1), Fraction(4), Fraction(9)]
    difference_table(seq, 2)
    assert seq == [1, 4, 9]


@given(st.lists(small_fracs, min_size=1, max_size=12), st.data())
def test_triangle_recurrence(seq, data):
    order = data.draw(st.integers(min_value=0, max_value=len(seq) - 1))
    table = difference_table(seq, order)
    for m in range(order):
        assert len(table.rows[m]) == len(seq) - m
        for j in range(len(table.rows[m + 1])):
            assert table.rows[m + 1][j] == table.rows[m][j + 1] - table.rows[m][j]


def test_binomial_row_matches_math_comb():
    for n in range(40):
        assert binomial_row(n) == tuple(comb(n, i) for i in range(n + 1))


def test_cube_third_difference():
    assert binomial_nth_difference(Polynomial.monomial(3), 5, 1, 3) == 6


def test_lower_degree_vanishes():
    P = Polynomial.monomial(2)
    for x in (-3, 0, Fraction(7, 2)):
        assert binomial_nth_difference(P, x, 1, 3) == 0


def test_mixed_cubic_direct_sum():
    P = Polynomial((2, 0, 7, -1))
    x, k = Fraction(-4), Fraction(3, 2)
    f = lambda t: 2 * t ** 3 + 7 * t - 1
    direct = f(x) - 3 * f(x - k) + 3 * f(x - 2 * k) - f(x - 3 * k)
    assert direct == Fraction(81, 2)
    assert binomial_nth_difference(P, x, k, 3) == direct


def test_zero_step():
    with pytest.raises(ZeroStepError):
        binomial_nth_difference(Polynomial.monomial(2), 0, 0, 2)


def test_verify_square_unit_step():
    rep = verify_newton_theorem(Polynomial.monomial(2), 1, range(11))
    assert rep.passed and rep.expected == 2 and len(rep.samples) == 11


def test_verify_quartic_negative_step():
    P = Polynomial((5, 0, 0, -1, 0))
    # direct evaluation of the five-term sum at each sample
    f = lambda t: 5 * t ** 4 - t
    for x in (-3, 0, 7):
        direct = sum(comb(4, i) * (-1) ** i * f(Fraction(x) + 2 * i) for i in range(5))
        assert direct == 1920
    rep = verify_newton_theorem(P, -2, [-3, 0, 7])
    assert rep.passed and rep.expected == 1920


def test_verify_linear_third_step():
    rep = verify_newton_theorem(Polynomial((1, 0)), Fraction(1, 3), [0])
    assert rep.passed and rep.expected == Fraction(1, 3)


def test_verify_needs_positive_degree():
    with pytest.raises(ValueError):
        verify_newton_theorem(Polynomial((4,)), 1, [0])


@given(polynomials(min_degree=1), nonzero_fracs, st.lists(small_fracs, min_size=10, max_size=10))
def test_shift_invariance(P, k, xs):
    vals = {binomial_nth_difference(P, x, k, P.degree) for x in xs}
    assert vals == {P.leading * k ** P.degree * factorial(P.degree)}


@given(polynomials(), polynomials(), small_fracs, small_fracs, small_fracs, nonzero_fracs,
       st.integers(min_value=1, max_value=7))
def test_linearity(P, Q, a, b, x, k, n):
    combo = a * P + b * Q
    lhs = binomial_nth_difference(combo, x, k, n)
    rhs = a * binomial_nth_difference(P, x, k, n) + b * binomial_nth_difference(Q, x, k, n)
    assert lhs == rhs


@given(polynomials(max_degree=5), st.integers(min_value=1, max_value=5))
def test_agreement_with_table(P, n):
    count = n + 6
    table = polynomial_table(P, count, n)
    for m in range(count - n):
        assert binomial_nth_difference(P, m + n, 1, n) == table.rows[n][m]


@given(polynomials(max_degree=5), nonzero_fracs, small_fracs)
def test_agreement_with_table_general_step(P, k, start):
    n = max(P.degree, 1)
    table = polynomial_table(P, n + 3, n, k, start)
    for m in range(3):
        assert binomial_nth_difference(P, start + (m + n) * k, k, n) == table.rows[n][m]


@pytest.mark.parametrize("text, coeffs", [
    ("x^3", (1, 0, 0, 0)),
    ("2x^3 + 7x - 1", (2, 0, 7, -1)),
    ("5*x**4 - x", (5, 0, 0, -1, 0)),
    ("-3/2x^2 + 1/3", (Fraction(-3, 2), 0, Fraction(1, 3))),
    ("x + x", (2, 0)),
    ("0", (0,)),
    ("0.5x", (Fraction(1, 2), 0)),
])
def test_parse(text, coeffs):
    assert Polynomial.parse(text).coefficients == tuple(Fraction(c) for c in coeffs)


@pytest.mark.parametrize("bad", ["", "x^", "2y", "x^2 +"])
def test_parse_rejects(bad):
    with pytest.raises(SpecParseError):
        Polynomial.parse(bad)


@given(polynomials())
def test_str_parse_roundtrip(P):
    assert Polynomial.parse(str(P)) == P


def test_leading_zeros_stripped():
    P = Polynomial((0, 0, 3, 1))
    assert P.degree == 1 and P.leading == 3


@given(polynomials(), st.integers(min_value=0, max_value=7))
def test_derivative_of_monomials(P, m):
    # d^m/dx^m x^d = d!/(d-m)! x^(d-m), applied term by term
    D = P.derivative(m)
    for x in (Fraction(-2), Fraction(1, 3), Fraction(5)):
        expected = 0
        for power, c in zip(range(P.degree, -1, -1), P.coefficients):
            if power >= m:
                expected += c * (factorial(power) // factorial(power - m)) * x ** (power - m)
        assert D(x) == expected
