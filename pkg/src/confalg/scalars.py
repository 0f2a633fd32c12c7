"""Exact arithmetic in the Gaussian rationals Q(i).

A :class:`Scalar` is stored as ``(a + b*i) / d`` with integers ``a, b, d``,
``d > 0`` and ``gcd(a, b, d) == 1``.  That triple is canonical, so equality and
hashing are structural.  The real and imaginary parts are exposed as
:class:`fractions.Fraction` in lowest terms.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational


class ScalarParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.text = text
        self.pos = pos


class Scalar:
    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re_part=0, im_part=0):
        re_part = Fraction(re_part)
        im_part = Fraction(im_part)
        d = re_part.denominator * im_part.denominator // gcd(re_part.denominator, im_part.denominator)
        a = re_part.numerator * (d // re_part.denominator)
        b = im_part.numerator * (d // im_part.denominator)
        self._set(a, b, d)

    def _set(self, a: int, b: int, d: int) -> None:
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        if a == 0 and b == 0:
            d = 1
        self._a = a
        self._b = b
        self._d = d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> Scalar:
        s = object.__new__(cls)
        s._set(a, b, d)
        return s

    @classmethod
    def coerce(cls, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, Rational):
            return cls._raw(x.numerator, 0, x.denominator)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")

    # -- accessors ---------------------------------------------------------

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conj(self) -> Scalar:
        return Scalar._raw(self._a, -self._b, self._d)

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        if self._d == other._d:
            return Scalar._raw(self._a + other._a, self._b + other._b, self._d)
        return Scalar._raw(self._a * other._d + other._a * self._d,
                           self._b * other._d + other._b * self._d,
                           self._d * other._d)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        s = object.__new__(Scalar)
        s._a, s._b, s._d = -self._a, -self._b, self._d
        return s

    def __sub__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Scalar:
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            if isinstance(other, int):
                return Scalar._raw(self._a * other, self._b * other, self._d)
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        return Scalar._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * other._d)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        a, b, d = self._a, self._b, self._d
        norm = a * a + b * b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return Scalar._raw(d * a, -d * b, norm)

    def __truediv__(self, other) -> Scalar:
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> Scalar:
        return Scalar.coerce(other) * self.inv()

    def __pow__(self, k: int) -> Scalar:
        if k < 0:
            return self.inv() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Rational)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    # -- roots -------------------------------------------------------------

    def sqrt_if_exists(self) -> Scalar | None:
        """A square root in Q(i), or None.

        Of the two roots the lexicographically smaller one under ``(re, im)``
        is returned, so ``Scalar(4).sqrt_if_exists() == -2``.
        """
        x, y = self.re, self.im
        if y == 0:
            if x >= 0:
                s = _rational_sqrt(x)
                if s is None:
                    return None
                root = Scalar(s)
            else:
                s = _rational_sqrt(-x)
                if s is None:
                    return None
                root = Scalar(0, s)
        else:
            # (p + qi)^2 = x + yi  =>  p^2 = (x + |z|) / 2,  q = y / (2p)
            modulus = _rational_sqrt(x * x + y * y)
            if modulus is None:
                return None
            p = _rational_sqrt((x + modulus) / 2)
            if p is None:
                return None
            root = Scalar(p, y / (2 * p))
        other = -root
        return min(root, other, key=Scalar.sort_key)

    # -- printing ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"

    def __str__(self) -> str:
        re_part, im_part = self.re, self.im
        if im_part == 0:
            return _fmt_fraction(re_part)
        im_str = _fmt_imag(im_part)
        if re_part == 0:
            return im_str
        if im_part < 0:
            return f"{_fmt_fraction(re_part)} - {_fmt_imag(-im_part)}"
        return f"{_fmt_fraction(re_part)} + {im_str}"

    def is_atomic(self) -> bool:
        """True when the printed form needs no parentheses inside a product."""
        return self._a == 0 or self._b == 0


def _fmt_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _fmt_imag(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{_fmt_fraction(q)}*i"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


ZERO = Scalar._raw(0, 0, 1)
ONE = Scalar._raw(1, 0, 1)
I = Scalar._raw(0, 1, 1)


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def inv(a: Scalar) -> Scalar:
    return a.inv()


def sqrt_if_exists(a: Scalar) -> Scalar | None:
    return a.sqrt_if_exists()


# -- literal parsing --------------------------------------------------------

_TERM = re.compile(r"(\d+(?:/\d+)?)?\s*(\*?\s*i)?")


def parse_scalar(text: str) -> Scalar:
    """Parse ``p``, ``p/q``, ``i``, ``p/q i`` and signed sums of these.

    Whitespace is ignored and one level of enclosing parentheses is allowed.
    """
    src = text.strip()
    offset = len(text) - len(text.lstrip())
    if src.startswith("(") and src.endswith(")"):
        src = src[1:-1]
        offset += 1
    pos = 0
    total = ZERO
    seen = False
    n = len(src)
    while True:
        while pos < n and src[pos].isspace():
            pos += 1
        if pos >= n:
            break
        sign = 1
        if src[pos] in "+-":
            sign = -1 if src[pos] == "-" else 1
            pos += 1
            while pos < n and src[pos].isspace():
                pos += 1
        elif seen:
            raise ScalarParseError("expected '+' or '-'", text, offset + pos)
        m = _TERM.match(src, pos)
        if m is None or m.end() == pos or (m.group(1) is None and m.group(2) is None):
            raise ScalarParseError("expected a number or 'i'", text, offset + pos)
        value = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2):
            total = total + Scalar(0, sign * value)
        else:
            total = total + Scalar(sign * value)
        seen = True
        pos = m.end()
    if not seen:
        raise ScalarParseError("empty scalar", text, offset)
    return total
