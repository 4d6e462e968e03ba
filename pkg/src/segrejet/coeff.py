"""Exact Gaussian-rational numbers.

A :class:`Coeff` is ``re + i*im`` with ``re`` and ``im`` arbitrary precision
rationals (``gmpy2.mpq``).  Nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

from gmpy2 import mpq

Number = Union["Coeff", int, Fraction, str, complex]

_ZERO = mpq(0)
_ONE = mpq(1)


def _rat(x) -> mpq:
    if isinstance(x, str):
        return mpq(Fraction(x))
    if isinstance(x, (int, Rational)) or type(x).__name__ == "mpq":
        return mpq(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class Coeff:
    """Immutable Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is type(_ZERO) else _rat(re))
        object.__setattr__(self, "im", im if type(im) is type(_ZERO) else _rat(im))

    def __setattr__(self, name, value):
        raise AttributeError("Coeff is immutable")

    @classmethod
    def of(cls, x: Number) -> "Coeff":
        if isinstance(x, Coeff):
            return x
        if isinstance(x, complex):
            # only integral parts are accepted; floats are never exact
            if x.real != int(x.real) or x.imag != int(x.imag):
                raise TypeError("complex literals must have integral parts")
            return cls(int(x.real), int(x.imag))
        if isinstance(x, float):
            raise TypeError("floating point coefficients are not supported")
        return cls(_rat(x), _ZERO)

    @staticmethod
    def _fast(re, im) -> "Coeff":
        c = object.__new__(Coeff)
        object.__setattr__(c, "re", re)
        object.__setattr__(c, "im", im)
        return c

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Coeff._fast(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Coeff._fast(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Coeff._fast(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return Coeff._fast(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return Coeff._fast(a * c, _ZERO)
        return Coeff._fast(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "Coeff":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero Coeff")
        return Coeff._fast(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Coeff":
        return Coeff._fast(self.re, -self.im)

    def norm2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    # comparisons ----------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    # formatting -----------------------------------------------------------
    def __repr__(self):
        return f"Coeff({_fmt(self.re)}, {_fmt(self.im)})"

    def __str__(self):
        if not self.im:
            return _fmt(self.re)
        if not self.re:
            return f"{_fmt(self.im)}*i"
        return f"({_fmt(self.re)}{'+' if self.im > 0 else '-'}{_fmt(abs(self.im))}*i)"

    def as_strings(self) -> tuple[str, str]:
        """``("p/q", "p/q")`` pair used by the JSON reports."""
        return rat_str(self.re), rat_str(self.im)


def rat_str(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fmt(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coerce(x):
    if isinstance(x, Coeff):
        return x
    try:
        return Coeff.of(x)
    except TypeError:
        return None


def parse_rational(text: str) -> mpq:
    return mpq(Fraction(text))


ZERO = Coeff(0, 0)
ONE = Coeff(1, 0)
I = Coeff(0, 1)
