"""Exact Gaussian rationals, the only scalar type used by hktlab.

A value ``(a + b*i) / d`` is stored as three Python integers with ``d > 0``
and ``gcd(a, b, d) == 1``; the real and imaginary parts exposed through
:attr:`GaussianRational.re` and :attr:`GaussianRational.im` are
:class:`fractions.Fraction` objects and hence always in lowest terms.

Literal grammar (used by every parser in the package)::

    "1/2"  "-3"  "i"  "-i/2"  "1+3i"  "1/2-2/3i"  "3i/4"

Canonical emission is whitespace free, suppresses zero parts and unit
denominators: ``str(GaussianRational(Fraction(1, 2), Fraction(-2, 3)))``
gives ``"1/2-2/3i"``.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

__all__ = ["GaussianRational", "ScalarParseError", "parse_scalar", "to_scalar", "ZERO", "ONE", "I"]


class ScalarParseError(ValueError):
    """Raised for literals outside the scalar grammar."""

    def __init__(self, text: str, reason: str = "malformed scalar literal") -> None:
        super().__init__(f"{reason}: {text!r}")
        self.text = text


class GaussianRational:
    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0) -> None:
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        obj = cls.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    # -- accessors -------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> GaussianRational:
        if self._b == 0:
            return self
        obj = GaussianRational.__new__(GaussianRational)
        obj._a, obj._b, obj._d, obj._hash = self._a, -self._b, self._d, None
        return obj

    def norm(self) -> Fraction:
        """Squared absolute value ``a^2 + b^2`` (exact)."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if self._d == other._d:
            return GaussianRational._raw(self._a + other._a, self._b + other._b, self._d)
        return GaussianRational._raw(
            self._a * other._d + other._a * self._d,
            self._b * other._d + other._b * self._d,
            self._d * other._d,
        )

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        obj = GaussianRational.__new__(GaussianRational)
        obj._a, obj._b, obj._d, obj._hash = -self._a, -self._b, self._d, None
        return obj

    def __pos__(self) -> GaussianRational:
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        if b1 == 0 and b2 == 0:
            return GaussianRational._raw(a1 * a2, 0, self._d * other._d)
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * other._d)

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        n = self._a * self._a + self._b * self._b
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        # (a+bi)/d inverted is d(a-bi)/(a^2+b^2)
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> GaussianRational:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing -------------------------------------------
    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self == other

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._a, self._b, self._d))
        return self._hash

    # -- text ------------------------------------------------------------
    def __str__(self) -> str:
        re_part, im_part = self.re, self.im
        if im_part == 0:
            return _fmt(re_part)
        if im_part == 1:
            im_txt = "i"
        elif im_part == -1:
            im_txt = "-i"
        else:
            im_txt = _fmt(im_part) + "i"
        if re_part == 0:
            return im_txt
        sep = "" if im_txt.startswith("-") else "+"
        return f"{_fmt(re_part)}{sep}{im_txt}"

    def __repr__(self) -> str:
        return f"GaussianRational({str(self)!r})"

    def __reduce__(self):
        return (parse_scalar, (str(self),))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, bool):
        return NotImplemented
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Rational):
        return GaussianRational(Fraction(x))
    if isinstance(x, complex):
        return NotImplemented
    return NotImplemented


def to_scalar(x) -> GaussianRational:
    """Coerce ints, Fractions, literals and GaussianRationals; floats are rejected."""
    if isinstance(x, str):
        return parse_scalar(x)
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")
    return out


_RAT = r"[0-9]+(?:/[0-9]+)?"
_TERM = _re.compile(
    rf"""
    (?P<sign>[+-]?)
    (?:
        (?P<imnum>{_RAT})?i(?:/(?P<imden>[0-9]+))?   # 3i, 3/4i, i, i/2, 3i/4
      | (?P<real>{_RAT})
    )
    """,
    _re.VERBOSE,
)


def _parse_rat(txt: str, whole: str) -> Fraction:
    num, _, den = txt.partition("/")
    if den and int(den) == 0:
        raise ScalarParseError(whole, "zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def parse_scalar(text: str) -> GaussianRational:
    """Parse a scalar literal such as ``"-i/2"`` or ``"1/2-2/3i"``."""
    if not isinstance(text, str):
        raise ScalarParseError(repr(text), "scalar must be a string")
    s = text.strip()
    if not s:
        raise ScalarParseError(text, "empty scalar literal")
    pos = 0
    re_part = Fraction(0)
    im_part = Fraction(0)
    seen_re = seen_im = False
    nterms = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ScalarParseError(text)
        if nterms and not m.group("sign"):
            raise ScalarParseError(text)
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("real") is not None:
            if seen_re:
                raise ScalarParseError(text)
            seen_re = True
            re_part = sign * _parse_rat(m.group("real"), text)
        else:
            if seen_im:
                raise ScalarParseError(text)
            seen_im = True
            coeff = _parse_rat(m.group("imnum"), text) if m.group("imnum") else Fraction(1)
            if m.group("imden"):
                if m.group("imnum") and "/" in m.group("imnum"):
                    raise ScalarParseError(text)
                den = int(m.group("imden"))
                if den == 0:
                    raise ScalarParseError(text, "zero denominator")
                coeff /= den
            im_part = sign * coeff
        pos = m.end()
        nterms += 1
    return GaussianRational(re_part, im_part)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
