from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from hktlab.scalars import I, ONE, ZERO, GaussianRational, ScalarParseError, parse_scalar, to_scalar

from conftest import gaussians


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("1/2", Fraction(1, 2), 0),
        ("-3i", 0, -3),
        ("1+2i", 1, 2),
        ("1/2-3/4i", Fraction(1, 2), Fraction(-3, 4)),
        ("i", 0, 1),
        ("-i/2", 0, Fraction(-1, 2)),
        ("2i/3", 0, Fraction(2, 3)),
        (" 7 ", 7, 0),
    ],
)
def test_parse_literals(text, re, im):
    assert parse_scalar(text) == GaussianRational(re, im)


@pytest.mark.parametrize("text", ["1//2", "", "i2", "1/0", "1+", "2 3", "1.5", "1+2+3"])
def test_parse_rejects(text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text)


def test_floats_rejected():
    with pytest.raises(TypeError):
        to_scalar(0.5)


def test_basic_arithmetic():
    a = parse_scalar("1+2i")
    assert a * a.conjugate() == GaussianRational(5)
    assert a * a.inverse() == ONE
    assert I * I == -ONE
    assert a - a == ZERO


@given(gaussians)
def test_str_round_trip(x):
    assert parse_scalar(str(x)) == x


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b != ZERO:
        assert (a / b) * b == a
    assert hash(a + ZERO) == hash(a)
