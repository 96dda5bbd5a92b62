import math
from fractions import Fraction

import pytest

from pronylattice.exact import (
    Irrational,
    as_fraction,
    is_exact,
    number_from_json,
    number_to_json,
    parse_number,
    to_float,
)


@pytest.mark.parametrize(
    "text, expected",
    [("3/5", Fraction(3, 5)), ("0.25", Fraction(1, 4)), ("-2", Fraction(-2)), (7, Fraction(7))],
)
def test_parse_exact(text, expected):
    assert parse_number(text) == expected
    assert is_exact(parse_number(text))


def test_floats_stay_floats():
    assert isinstance(parse_number(0.3), float)


def test_sqrt_is_tagged_irrational():
    x = parse_number("sqrt(2)")
    assert isinstance(x, Irrational)
    assert to_float(x) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert as_fraction(x) is None


def test_perfect_square_root_is_rational():
    assert parse_number("sqrt(9)") == 3
    assert parse_number("sqrt(4/9)") == Fraction(2, 3)


def test_sqrt_of_fraction():
    x = parse_number("sqrt(1/2)")
    assert isinstance(x, Irrational) and str(x) == "sqrt(1/2)"
    assert to_float(x) == pytest.approx(math.sqrt(0.5), rel=1e-15)


@pytest.mark.parametrize("bad", ["abc", "1/0", True, "sqrt(-1)"])
def test_parse_rejects(bad):
    with pytest.raises((TypeError, ValueError, ZeroDivisionError)):
        parse_number(bad)


@pytest.mark.parametrize("x", [Fraction(3, 5), Fraction(4), 0.125, parse_number("sqrt(3)")])
def test_json_round_trip(x):
    back = number_from_json(number_to_json(x))
    assert to_float(back) == to_float(x)
    assert type(back) is type(x)
