"""Finitely supported probability measures on an affine integer lattice.

A :class:`LatticeMeasure` puts mass ``w_i`` on ``offset + step * points[i]``.
Weights are exact: they are held as integer numerators over one shared
denominator, which keeps binomial laws with denominators like ``2**16382``
cheap to build, convolve and compare.  A float64 mode exists for very large
supports and has to be requested with :meth:`LatticeMeasure.to_float`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .exceptions import DegenerateScaleError, LatticeMismatchError
from .surd import ONE, ZERO, Number, Surd

Weight = Union[Fraction, float]

#: Supports up to this size are always handled with exact rational weights.
EXACT_SUPPORT_LIMIT = 2**15

_FLOAT_SUM_TOL = 1e-9


class LatticeMeasure:
    """Probability measure ``sum_i w_i * delta(offset + step * points[i])``.

    Parameters
    ----------
    points : sequence of int
        Strictly increasing lattice coordinates.
    weights : sequence of Fraction, int or float
        Positive weights summing to one.  Exact unless any weight is a float.
    step : scalar, default 1
        Positive lattice pitch (int, Fraction, float or :class:`Surd`).
    offset : scalar, default 0

    Instances are immutable and compare equal iff they describe the same
    measure on the same lattice (zero weights are never stored).
    """

    __slots__ = ("step", "offset", "points", "_masses", "_den", "_weights")

    def __init__(
        self,
        points: Sequence[int],
        weights: Sequence[Union[Fraction, int, float]],
        step: Number = 1,
        offset: Number = 0,
    ):
        if len(points) != len(weights):
            raise ValueError("points and weights must have the same length")
        if any(isinstance(w, float) for w in weights):
            masses, den = tuple(float(w) for w in weights), None
        else:
            fr = [Fraction(w) for w in weights]
            den = math.lcm(*(f.denominator for f in fr)) if fr else 1
            masses = tuple(f.numerator * (den // f.denominator) for f in fr)
        self._init(Surd.make(step), Surd.make(offset), tuple(int(p) for p in points), masses, den)

    def _init(self, step, offset, points, masses, den):
        if step <= 0:
            raise ValueError(f"step must be positive, got {step}")
        if not points:
            raise ValueError("a probability measure needs at least one atom")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise ValueError("points must be strictly increasing")
        if any(m <= 0 for m in masses):
            raise ValueError("weights must be positive (zero-weight points are not stored)")
        if den is None:
            total = math.fsum(masses)
            if abs(total - 1.0) > _FLOAT_SUM_TOL:
                raise ValueError(f"weights sum to {total}, not 1")
        else:
            if sum(masses) != den:
                raise ValueError(f"weights sum to {Fraction(sum(masses), den)}, not 1")
            g = math.gcd(den, *masses)
            if g > 1:
                den //= g
                masses = tuple(m // g for m in masses)
        self.step = step
        self.offset = offset
        self.points = points
        self._masses = masses
        self._den = den
        self._weights = None

    @classmethod
    def _raw(cls, step: Surd, offset: Surd, points, masses, den) -> "LatticeMeasure":
        """Build from integer numerators over ``den`` (or floats when den is None).

        Zero masses are dropped; everything else is validated as usual.
        """
        obj = cls.__new__(cls)
        keep = [i for i, m in enumerate(masses) if m != 0]
        if len(keep) != len(masses):
            points = [points[i] for i in keep]
            masses = [masses[i] for i in keep]
        obj._init(step, offset, tuple(int(p) for p in points), tuple(masses), den)
        return obj

    @classmethod
    def from_atoms(cls, atoms: Mapping[int, Union[Fraction, int, float]], step: Number = 1,
                   offset: Number = 0) -> "LatticeMeasure":
        """Build from a ``{point: weight}`` mapping; order is irrelevant and zeros are dropped."""
        items = sorted((p, w) for p, w in atoms.items() if w != 0)
        return cls([p for p, _ in items], [w for _, w in items], step=step, offset=offset)

    # ------------------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self._den is not None

    @property
    def denominator(self) -> int:
        """Shared denominator of the exact weights."""
        if self._den is None:
            raise ValueError("float-mode measure has no exact denominator")
        return self._den

    @property
    def masses(self) -> tuple:
        """Integer weight numerators over :attr:`denominator` (floats in float mode)."""
        return self._masses

    @property
    def weights(self) -> tuple:
        if self._weights is None:
            if self._den is None:
                self._weights = self._masses
            else:
                d = self._den
                self._weights = tuple(Fraction(m, d) for m in self._masses)
        return self._weights

    def __len__(self) -> int:
        return len(self.points)

    def value(self, i: int) -> Surd:
        return self.offset + self.step * self.points[i]

    def float_values(self) -> np.ndarray:
        return float(self.offset) + float(self.step) * np.asarray(self.points, dtype=float)

    def float_weights(self) -> np.ndarray:
        if self._den is None:
            return np.asarray(self._masses, dtype=float)
        return np.array([float(w) for w in self.weights])

    def weight_at(self, point: int) -> Weight:
        """Weight of lattice coordinate ``point`` (zero when absent)."""
        i = _bisect(self.points, point)
        if i is None:
            return Fraction(0) if self.exact else 0.0
        return self.weights[i]

    def to_float(self) -> "LatticeMeasure":
        """Same measure with float64 weights (explicit opt-in to inexact mode)."""
        if self._den is None:
            return self
        d = self._den
        return LatticeMeasure._raw(self.step, self.offset, self.points,
                                   [_ratio_to_float(m, d) for m in self._masses], None)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeMeasure):
            return NotImplemented
        return (self.step == other.step and self.offset == other.offset
                and self.points == other.points and self._den == other._den
                and self._masses == other._masses)

    def __hash__(self) -> int:
        return hash((self.step, self.offset, self.points, self._den, self._masses))

    def __repr__(self) -> str:
        if len(self) <= 8:
            body = ", ".join(f"{p}: {w}" for p, w in zip(self.points, self.weights))
        else:
            body = f"{len(self)} atoms in [{self.points[0]}, {self.points[-1]}]"
        mode = "" if self.exact else ", float"
        return f"LatticeMeasure({{{body}}}, step={self.step}, offset={self.offset}{mode})"


@dataclass(frozen=True)
class MomentSummary:
    """First two moments.  Fractions when exact, floats otherwise."""

    mean: Union[Fraction, float]
    variance: Union[Fraction, float]
    second_moment: Union[Fraction, float]


def _bisect(seq, x):
    import bisect

    i = bisect.bisect_left(seq, x)
    if i < len(seq) and seq[i] == x:
        return i
    return None


def _ratio_to_float(num: int, den: int) -> float:
    # float(Fraction) is correctly rounded and handles huge operands
    return float(Fraction(num, den)) if den.bit_length() > 1000 else num / den


def dirac(point: int = 0, step: Number = 1, offset: Number = 0) -> LatticeMeasure:
    return LatticeMeasure([point], [1], step=step, offset=offset)


def rademacher_sum(m: int) -> LatticeMeasure:
    """Law of ``Z_1 + ... + Z_m`` with i.i.d. fair signs; ``m = 0`` gives delta_0.

    Weight ``C(m, j) / 2**m`` on ``m - 2j``.
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    coeffs = [1] * (m + 1)
    c = 1
    for j in range(m + 1):
        coeffs[j] = c
        c = c * (m - j) // (j + 1)
    points = range(-m, m + 1, 2)
    return LatticeMeasure._raw(ONE, ZERO, points, coeffs, 1 << m)


def binomial_sigma_weight(n: int, k: int) -> Fraction:
    """Mass of the point ``2k`` under the law of a sum of ``4n - 2`` fair signs.

    Zero for ``|k| >= 2n``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if abs(k) >= 2 * n:
        return Fraction(0)
    return Fraction(math.comb(4 * n - 2, k + 2 * n - 1), 1 << (4 * n - 2))


def _lattice_gcd(*point_lists) -> int:
    g = 0
    for pts in point_lists:
        p0 = pts[0]
        for p in pts[1:]:
            g = math.gcd(g, p - p0)
    return g


def _convolve_arrays(pa, ma, pb, mb, exact: bool):
    g = _lattice_gcd(pa, pb)
    base = pa[0] + pb[0]
    if g == 0:
        return [base], [ma[0] * mb[0]]
    ia = [(p - pa[0]) // g for p in pa]
    ib = [(p - pb[0]) // g for p in pb]
    la, lb = ia[-1] + 1, ib[-1] + 1
    if la * lb <= 16 * len(pa) * len(pb) + 4096:
        dtype = object if exact else float
        da = np.zeros(la, dtype=dtype)
        db = np.zeros(lb, dtype=dtype)
        da[ia] = list(ma)
        db[ib] = list(mb)
        out = np.convolve(da, db)
        idx = [i for i, v in enumerate(out) if v != 0]
        return [base + g * i for i in idx], [out[i] for i in idx]
    acc: dict[int, object] = {}
    for i, x in zip(ia, ma):
        for j, y in zip(ib, mb):
            acc[i + j] = acc.get(i + j, 0) + x * y
    keys = sorted(k for k, v in acc.items() if v != 0)
    return [base + g * k for k in keys], [acc[k] for k in keys]


def convolve(a: LatticeMeasure, b: LatticeMeasure) -> LatticeMeasure:
    """Law of ``X + Y`` for independent ``X ~ a``, ``Y ~ b``.

    Both measures must have the same step; offsets add.
    """
    if a.step != b.step:
        raise LatticeMismatchError(f"steps differ: {a.step} vs {b.step}")
    try:
        offset = a.offset + b.offset
    except ValueError as exc:
        raise LatticeMismatchError(str(exc)) from None
    exact = a.exact and b.exact
    if exact:
        ma, mb, den = a.masses, b.masses, a.denominator * b.denominator
    else:
        ma, mb, den = a.to_float().masses, b.to_float().masses, None
    pts, ms = _convolve_arrays(a.points, ma, b.points, mb, exact)
    if exact:
        ms = [int(m) for m in ms]
    else:
        ms = [float(m) for m in ms]
    return LatticeMeasure._raw(a.step, offset, pts, ms, den)


def convolution_power(mu: LatticeMeasure, m: int) -> LatticeMeasure:
    """``m``-fold self-convolution; ``m = 0`` gives delta at 0 on mu's lattice."""
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    result = dirac(0, step=mu.step)
    if not mu.exact:
        result = result.to_float()
    base = mu
    while m:
        if m & 1:
            result = convolve(result, base)
        m >>= 1
        if m:
            base = convolve(base, base)
    return result


def normalized_power(mu: LatticeMeasure, m: int) -> LatticeMeasure:
    """Law of ``(X_1 + ... + X_m) / sqrt(m)`` for i.i.d. ``X_i ~ mu``."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    p = convolution_power(mu, m)
    r = Surd.inv_sqrt(m)
    return LatticeMeasure._raw(p.step * r, p.offset * r, p.points, p.masses, p._den)


def scale(mu: LatticeMeasure, c: Number) -> LatticeMeasure:
    """Law of ``c * X``; negative ``c`` mirrors the lattice coordinates."""
    cs = Surd.make(c)
    if cs.coef == 0:
        raise DegenerateScaleError("scale factor 0; construct the point mass explicitly")
    points, masses = mu.points, mu.masses
    if cs < 0:
        points = [-p for p in reversed(points)]
        masses = masses[::-1]
    return LatticeMeasure._raw(mu.step * abs(cs), mu.offset * cs, points, masses, mu._den)


def translate(mu: LatticeMeasure, t: Number) -> LatticeMeasure:
    """Law of ``X + t``."""
    try:
        offset = mu.offset + Surd.make(t)
    except ValueError as exc:
        raise LatticeMismatchError(str(exc)) from None
    return LatticeMeasure._raw(mu.step, offset, mu.points, mu.masses, mu._den)


def _point_moments(mu: LatticeMeasure):
    if mu.exact:
        d = mu.denominator
        s1 = sum(m * p for m, p in zip(mu.masses, mu.points))
        s2 = sum(m * p * p for m, p in zip(mu.masses, mu.points))
        return Fraction(s1, d), Fraction(s2, d)
    w = mu.float_weights()
    p = np.asarray(mu.points, dtype=float)
    return float(w @ p), float(w @ (p * p))


def mean_surd(mu: LatticeMeasure) -> Surd | None:
    """Exact mean as a :class:`Surd`, or None when it is not of that form."""
    if not mu.exact:
        return None
    e1, _ = _point_moments(mu)
    try:
        return mu.offset + mu.step * e1
    except ValueError:
        return None


def has_zero_mean(mu: LatticeMeasure, tol: float = 1e-12) -> bool:
    if mu.exact:
        e1, _ = _point_moments(mu)
        shift = mu.step * e1
        if shift.coef == 0 or mu.offset.coef == 0:
            return shift.coef == 0 and mu.offset.coef == 0
        if shift.root != mu.offset.root:
            # rational multiples of distinct squarefree roots are independent over Q
            return False
        return (mu.offset + shift).coef == 0
    return abs(float(moments(mu).mean)) <= tol


def moments(mu: LatticeMeasure) -> MomentSummary:
    e1, e2 = _point_moments(mu)
    if mu.exact:
        variance = mu.step.square() * (e2 - e1 * e1)
        m = mean_surd(mu)
        if m is not None:
            mean = m.coef if m.is_rational else float(m)
            return MomentSummary(mean, variance, variance + m.square())
        mean = float(mu.offset) + float(mu.step) * float(e1)
        return MomentSummary(mean, variance, float(variance) + mean * mean)
    s = float(mu.step)
    variance = s * s * (e2 - e1 * e1)
    mean = float(mu.offset) + s * e1
    return MomentSummary(mean, variance, variance + mean * mean)
