"""Exact scalar arithmetic and binomial conventions."""
import pytest

from hansenatlas.exact import (
    binomial_general,
    binomial_rational,
    pochhammer,
    rational,
    rational_str,
)


def test_addition_exact():
    assert rational(1, 2) + rational(1, 3) == rational(5, 6)


def test_multiplication_exact():
    assert rational(3, 8) * rational(-2, 3) == rational(-1, 4)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        rational(1, 4) / rational(0)


def test_lowest_terms_and_positive_denominator():
    q = rational(4, -6)
    assert q.numerator == -2 and q.denominator == 3
    assert rational_str(q) == "-2/3"
    assert rational_str(rational(8, 4)) == "2"


def test_string_round_trip():
    assert rational("5/6") == rational(5, 6)
    assert rational("-7") == -7


def test_float_conversion_is_exact_dyadic():
    assert rational(0.5) == rational(1, 2)
    assert rational(0.1) != rational(1, 10)  # 0.1 is not dyadic


def test_binomial_standard():
    assert binomial_general(5, 2) == 10
    assert binomial_general(2, 5) == 0
    assert binomial_general(0, 0) == 1


def test_binomial_negative_upper_index():
    # C(-u, p) = (-1)^p C(u+p-1, p)
    assert binomial_general(-3, 2) == 6
    assert binomial_general(-1, 5) == -1
    assert binomial_general(-2, 3) == -4
    assert binomial_general(-7, 0) == 1


def test_binomial_negative_lower_index_rejected():
    with pytest.raises(ValueError):
        binomial_general(3, -1)


def test_binomial_rational_top():
    assert binomial_rational(rational(3, 2), 2) == rational(3, 8)
    assert binomial_rational(rational(3, 2), 3) == rational(-1, 16)
    assert binomial_rational(rational(1, 2), 1) == rational(1, 2)
    assert binomial_rational(5, 2) == 10


def test_pochhammer():
    assert pochhammer(rational(1, 2), 3) == rational(1, 2) * rational(3, 2) * rational(5, 2)
    assert pochhammer(3, 0) == 1
    assert pochhammer(-2, 4) == 0  # crosses zero
