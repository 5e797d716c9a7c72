"""Exact scalars: rationals (gmpy2.mpq) and Gaussian rationals Q(i)."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Integral, Rational as _RationalABC

from gmpy2 import mpq

__all__ = ["Q", "GaussianRational", "I", "to_scalar", "is_scalar",
           "scalar_str", "parse_scalar", "conj"]

_MPQ = type(mpq(0))


def Q(x=0, den=None):
    """Build an exact rational from an int, Fraction, mpq or a 'p/q' string."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, (Integral, _RationalABC)):
        return mpq(x)
    raise TypeError(f"cannot convert {x!r} to a rational")


class GaussianRational:
    """re + im*i with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Q(re)
        self.im = Q(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (_MPQ, int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (_MPQ, int)):
            return GaussianRational(self.re * other, self.im * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({scalar_str(self.re)}, {scalar_str(self.im)})"

    def __str__(self):
        return scalar_str(self)


I = GaussianRational(0, 1)


def is_scalar(x) -> bool:
    return isinstance(x, (_MPQ, int, Fraction, GaussianRational))


def to_scalar(x):
    """Normalize ints/Fractions/strings to mpq; keep Gaussian rationals."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, str) and ("i" in x):
        return parse_scalar(x)
    return Q(x)


def conj(x):
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def _rat_str(q) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def scalar_str(x) -> str:
    """Serialize as 'p/q' or 'p/q+r/s*i'."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _rat_str(x.re)
        im = _rat_str(x.im)
        if x.re == 0:
            return f"{im}*i"
        sign = "" if im.startswith("-") else "+"
        return f"{_rat_str(x.re)}{sign}{im}*i"
    return _rat_str(x)


_GAUSS_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?\s*$")
_PURE_IM_RE = re.compile(r"^\s*(?P<im>[+-]?\d*(?:/\d+)?)\s*\*?\s*i\s*$")


def parse_scalar(text: str):
    """Parse 'p/q', 'p/q+r/s*i', 'r/s*i' (and bare 'i')."""
    s = str(text).strip()
    if "i" not in s:
        return Q(s)
    m = _PURE_IM_RE.match(s)
    if m:
        im = m.group("im")
        if im in ("", "+"):
            im = "1"
        elif im == "-":
            im = "-1"
        return GaussianRational(0, Q(im))
    m = _GAUSS_RE.match(s)
    if not m or m.group("re") is None:
        raise ValueError(f"malformed scalar {text!r}")
    im = m.group("im") or "1"
    val = Q(im)
    if m.group("sign") == "-":
        val = -val
    return GaussianRational(Q(m.group("re")), val)
