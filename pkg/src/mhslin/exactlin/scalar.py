"""Exact scalars: rationals (``Fraction``) and Gaussian rationals.

Rational values are kept as plain :class:`fractions.Fraction`; arithmetic
that produces a nonzero imaginary part returns a :class:`Gauss`. Any
``Gauss`` whose imaginary part cancels collapses back to a ``Fraction``, so
purely rational computations never pay for the complex wrapper.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


class Gauss:
    """A Gaussian rational ``re + im*i`` with exact parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = _q(re)
        self.im = _q(im)

    # arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Gauss):
            return make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, Gauss):
            return make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return make(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Gauss):
            return make(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Gauss):
            n = other.re * other.re + other.im * other.im
            return make((self.re * other.re + self.im * other.im) / n,
                        (self.im * other.re - self.re * other.im) / n)
        if isinstance(other, (int, Fraction)):
            return make(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gauss(other, 0) / self
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Gauss):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return make(self.re, -self.im)

    def __repr__(self):
        return f"Gauss({self.re}, {self.im})"

    def __str__(self):
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = Gauss(0, 1)


def make(re, im=0):
    """Return ``re + im*i`` as a ``Fraction`` when ``im == 0``."""
    re = _q(re)
    im = _q(im)
    if im == 0:
        return re
    return Gauss(re, im)


def to_scalar(x):
    """Coerce ints, strings, Fractions and Gauss values to an exact scalar."""
    if isinstance(x, Gauss):
        return make(x.re, x.im)
    if isinstance(x, complex):
        raise TypeError("floating complex values are not exact")
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or 'p/q' string")
    return _q(x)


def conj(x):
    if isinstance(x, Gauss):
        return make(x.re, -x.im)
    return x


def is_rational(x) -> bool:
    return not isinstance(x, Gauss)


def re_part(x) -> Fraction:
    return x.re if isinstance(x, Gauss) else x


def im_part(x) -> Fraction:
    return x.im if isinstance(x, Gauss) else Fraction(0)


def i_power(n: int):
    """``i**n`` for an integer ``n``."""
    return (Fraction(1), I, Fraction(-1), -I)[n % 4]
