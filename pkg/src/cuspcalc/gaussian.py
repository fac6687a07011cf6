"""Exact arithmetic over the Gaussian rationals Q(i).

A GaussianRational is a pair of Fractions (re, im).  This is the coefficient
field for every polynomial, rational function and trace value in the package;
no floating point enters except in the oracle module.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from gmpy2 import mpq

Rat = Union[int, Fraction]


class GaussianRational:
    """Element of Q(i); components stored as gmpy2 rationals for speed."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rat = 0, im: Rat = 0):
        object.__setattr__(self, "re", mpq(re))
        object.__setattr__(self, "im", mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction, type(mpq()))):
            return GaussianRational(value)
        if isinstance(value, complex):
            raise TypeError("floating complex not allowed; build from Fractions")
        raise TypeError(f"cannot coerce {type(value)!r} to GaussianRational")

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def is_rational(self) -> bool:
        return not self.im

    def is_gaussian_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = GaussianRational.of(other)
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "re", self.re + other.re)
        object.__setattr__(out, "im", self.im + other.im)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "re", -self.re)
        object.__setattr__(out, "im", -self.im)
        return out

    def __sub__(self, other):
        other = GaussianRational.of(other)
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "re", self.re - other.re)
        object.__setattr__(out, "im", self.im - other.im)
        return out

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        other = GaussianRational.of(other)
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "re", self.re * other.re - self.im * other.im)
        object.__setattr__(out, "im", self.re * other.im + self.im * other.re)
        return out

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("division by zero GaussianRational")
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "re", self.re / n)
        object.__setattr__(out, "im", -self.im / n)
        return out

    def __truediv__(self, other):
        return self * GaussianRational.of(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.of(other) * self.inverse()

    def __pow__(self, k: int):
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

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Field norm re^2 + im^2 (a nonnegative rational)."""
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.re == other and not self.im
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    # -- display ---------------------------------------------------------

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"({self.im})i" if self.im != 1 else "i"
        return f"({self.re} + ({self.im})i)"

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
MINUS_I = GaussianRational(0, -1)


def gr(re=0, im=0) -> GaussianRational:
    """Shorthand constructor."""
    return GaussianRational(re, im)
