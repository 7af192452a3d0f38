"""Exact real numbers of the form q / sqrt(m).

Normalized convolution powers rescale a lattice by 1/sqrt(m).  Keeping the
factor symbolic lets equality tests, convolution and quadratic costs stay in
rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, float, "Surd"]


def _split_square(m: int) -> tuple[int, int]:
    """Return (s, t) with m == s*s*t and t squarefree."""
    s, t = 1, m
    p = 2
    while p * p <= t:
        pp = p * p
        while t % pp == 0:
            t //= pp
            s *= p
        p += 1 if p == 2 else 2
    return s, t


@dataclass(frozen=True)
class Surd:
    """The real number ``coef / sqrt(root)``.

    Canonical form: ``root`` is squarefree, and zero is stored as ``Surd(0, 1)``.
    Use :meth:`make` to build canonical instances from arbitrary input.
    """

    coef: Fraction
    root: int = 1

    def __post_init__(self):
        if not isinstance(self.coef, Fraction):
            object.__setattr__(self, "coef", Fraction(self.coef))
        if self.root < 1:
            raise ValueError(f"root must be a positive integer, got {self.root}")
        s, t = _split_square(self.root)
        if self.coef == 0:
            s, t = 1, 1
        if s != 1 or t != self.root:
            # q / sqrt(s^2 t) == (q / s) / sqrt(t)
            object.__setattr__(self, "coef", self.coef / s)
            object.__setattr__(self, "root", t)

    @classmethod
    def make(cls, value: Number) -> "Surd":
        if isinstance(value, Surd):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite scalar {value!r}")
            return cls(Fraction(value))
        raise TypeError(f"cannot interpret {value!r} as an exact scalar")

    @classmethod
    def inv_sqrt(cls, m: int) -> "Surd":
        """1 / sqrt(m)."""
        return cls(Fraction(1), m)

    @property
    def is_rational(self) -> bool:
        return self.root == 1

    def square(self) -> Fraction:
        return self.coef * self.coef / self.root

    def to_fraction(self) -> Fraction:
        if self.root != 1:
            raise ValueError(f"{self} is irrational")
        return self.coef

    def __float__(self) -> float:
        return float(self.coef) / math.sqrt(self.root)

    def __neg__(self) -> "Surd":
        return Surd(-self.coef, self.root)

    def __abs__(self) -> "Surd":
        return Surd(abs(self.coef), self.root)

    def sign(self) -> int:
        return (self.coef > 0) - (self.coef < 0)

    def __mul__(self, other: Number) -> "Surd":
        o = Surd.make(other)
        # (a/sqrt(m)) (b/sqrt(n)) = ab/sqrt(mn)
        return Surd(self.coef * o.coef, self.root * o.root)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Surd":
        o = Surd.make(other)
        if o.coef == 0:
            raise ZeroDivisionError("division by zero surd")
        # 1 / (b/sqrt(n)) = sqrt(n)/b = n / (b sqrt(n))
        return self * Surd(o.root / o.coef, o.root)

    def __add__(self, other: Number) -> "Surd":
        o = Surd.make(other)
        if o.coef == 0:
            return self
        if self.coef == 0:
            return o
        if o.root != self.root:
            raise ValueError(f"cannot add {self} and {o} exactly")
        return Surd(self.coef + o.coef, self.root)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Surd":
        return self + (-Surd.make(other))

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def _cmp(self, other: Number) -> int:
        o = Surd.make(other)
        a, b = self.sign(), o.sign()
        if a != b:
            return (a > b) - (a < b)
        # same sign: compare squares, flip for negatives
        sa, sb = self.square(), o.square()
        c = (sa > sb) - (sa < sb)
        return c if a >= 0 else -c

    def __str__(self) -> str:
        if self.root == 1:
            return str(self.coef)
        return f"{self.coef}/sqrt({self.root})"


ZERO = Surd(Fraction(0))
ONE = Surd(Fraction(1))
