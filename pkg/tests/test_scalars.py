from fractions import Fraction

import pytest
from hypothesis import given

from confalg.scalars import I, ONE, ZERO, Scalar, ScalarParseError, add, inv, mul, parse_scalar, sqrt_if_exists

from conftest import nonzero_scalars, rationals, scalars


def S(re, im=0):
    return Scalar(Fraction(re), Fraction(im))


def test_addition_examples():
    assert add(S("1/2"), S("1/2")) == ONE
    assert add(I, -I) == ZERO
    assert add(S("1/3", "1/2"), S("1/6", "1/2")) == S("1/2", 1)


def test_multiplication_examples():
    assert mul(I, I) == S(-1)
    assert mul(S(1, 1), S(1, -1)) == S(2)
    assert mul(ZERO, S(3, 7)) == ZERO


def test_inverse_examples():
    assert inv(S(2)) == S("1/2")
    assert inv(I) == -I
    assert inv(S(1, 1)) == S("1/2", "-1/2")
    with pytest.raises(ZeroDivisionError):
        inv(ZERO)


def test_sqrt_tie_break():
    # least of the pair under (re, im)
    assert sqrt_if_exists(S(4)) == S(-2)
    assert sqrt_if_exists(S(-1)) == -I
    assert sqrt_if_exists(S(2)) is None
    assert sqrt_if_exists(S(0, 2)) == S(-1, -1)
    assert sqrt_if_exists(ZERO) == ZERO


def test_two_has_no_root_brute_force():
    # (a + bi)^2 = 2 needs a^2 - b^2 = 2, ab = 0: a^2 = 2 or b^2 = -2
    for q in range(1, 60):
        for p in range(0, 3 * q):
            assert Fraction(p, q) ** 2 != 2


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO and a * ONE == a


@given(nonzero_scalars)
def test_inverse_two_sided(a):
    assert a * a.inv() == ONE and a.inv() * a == ONE


@given(scalars)
def test_sqrt_squares_back(a):
    s = (a * a).sqrt_if_exists()
    assert s is not None and s * s == a * a
    assert s.sort_key() <= (-s).sort_key()
    r = a.sqrt_if_exists()
    if r is not None:
        assert r * r == a


@given(scalars)
def test_print_parse_round_trip(a):
    assert parse_scalar(str(a)) == a


@given(rationals, rationals)
def test_canonical_form(re, im):
    a = Scalar(re, im)
    assert a.re == re and a.im == im
    assert hash(a) == hash(Scalar(re, im))


@pytest.mark.parametrize("text,value", [
    ("3", S(3)), ("-2/4", S("-1/2")), ("i", I), ("1/2 i", S(0, "1/2")),
    ("1/2 + 3 i", S("1/2", 3)), ("-2 - 1/3 i", S(-2, "-1/3")), ("(1+i)", S(1, 1)),
    (" 2*i ", S(0, 2)),
])
def test_parse_examples(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text", ["", "1/", "abc", "2 3", "(1+"])
def test_parse_errors(text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text)
