"""Exact scalars: Python ``Fraction`` for real rationals plus a small
Gaussian-rational type for complex ones.

Everything else in the package is written against the ordinary arithmetic
operators, so exact and floating inputs share one code path.
"""
from __future__ import annotations

import numbers
from fractions import Fraction


class QQi:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, QQi):
            return other
        if isinstance(other, (int, Fraction)):
            return QQi(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("QQi division by zero")
        return QQi((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, r):
        if not isinstance(r, int):
            return NotImplemented
        if r < 0:
            return QQi(1) / (self ** -r)
        out, base = QQi(1), self
        while r:
            if r & 1:
                out = out * base
            base = base * base
            r >>= 1
        return out

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            if isinstance(other, numbers.Number):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


EXACT_TYPES = (int, Fraction, QQi)


def is_exact(value) -> bool:
    return isinstance(value, EXACT_TYPES) and not isinstance(value, bool)


def to_exact(value):
    """Convert a number (or rational string such as ``"3/7"``) to an exact scalar.

    Floats are converted through their shortest decimal repr, so ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, QQi):
        return value.re if value.im == 0 else value
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Real):
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, numbers.Complex):
        value = complex(value)
        if value.imag == 0:
            return Fraction(repr(value.real))
        return QQi(Fraction(repr(value.real)), Fraction(repr(value.imag)))
    raise TypeError(f"cannot make {value!r} exact")


def make_complex(re, im):
    """Exact complex scalar from exact parts; collapses to ``Fraction`` when ``im == 0``."""
    re, im = to_exact(re), to_exact(im)
    return re if im == 0 else QQi(re, im)


def real_imag(value):
    """(re, im) parts of any supported scalar."""
    if isinstance(value, QQi):
        return value.re, value.im
    if isinstance(value, (int, Fraction)):
        return Fraction(value), Fraction(0)
    c = complex(value)
    return c.real, c.imag


def format_exact(value) -> str:
    return str(Fraction(value))
