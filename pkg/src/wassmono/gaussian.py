"""Quadratic transport cost between a lattice measure and a Gaussian.

The cost is ``int_0^1 (F^{-1}(u) - G^{-1}(u))^2 du``.  On each interval where
the discrete quantile ``F^{-1}`` is constant the integral has a closed form
through ``int z du = -phi(z)`` and ``int z^2 du = u - z phi(z)`` with
``z = Phi^{-1}(u)``, so no sampling or quadrature is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Optional, Sequence, Union

from .exceptions import PreconditionError
from .measure import LatticeMeasure, has_zero_mean, moments, normalized_power
from .transport import w_distance

_STD = NormalDist()
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

#: Ties within this tolerance count as non-increasing.
MONOTONE_TOL = 1e-12


@dataclass(frozen=True)
class GaussianSpec:
    mean: float
    variance: float

    def __post_init__(self):
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "variance", float(self.variance))
        if not self.variance > 0:
            raise ValueError(f"variance must be positive, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def norm_pdf(z: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def norm_ppf(u: Union[float, Fraction]) -> float:
    """Standard normal quantile.

    Exact (Fraction) arguments above 1/2 are reflected through ``1 - u``
    before rounding, which keeps full accuracy deep in the upper tail.
    """
    if not 0 < u < 1:
        raise ValueError(f"quantile level must lie in (0, 1), got {u}")
    if isinstance(u, Fraction) and u > Fraction(1, 2):
        return -_STD.inv_cdf(float(1 - u))
    return _STD.inv_cdf(float(u))


def matched_gaussian(mu: LatticeMeasure) -> GaussianSpec:
    """Gaussian with the mean and variance of ``mu``."""
    m = moments(mu)
    if m.variance == 0:
        raise PreconditionError("point mass has no matching Gaussian (zero variance)")
    return GaussianSpec(float(m.mean), float(m.variance))


def _levels(mu: LatticeMeasure):
    """Cumulative levels ``u_1 < ... < u_{n-1}`` and their tails ``1 - u_i``.

    Exact measures give Fractions so both sides are accurate; float measures
    accumulate from each end separately.
    """
    if mu.exact:
        d = mu.denominator
        acc, heads = 0, []
        for m in mu.masses[:-1]:
            acc += m
            heads.append(Fraction(acc, d))
        return heads, [1 - h for h in heads]
    w = list(mu.masses)
    heads, tails = [], []
    acc = 0.0
    for x in w[:-1]:
        acc += x
        heads.append(acc)
    acc = 0.0
    for x in reversed(w[1:]):
        acc += x
        tails.append(acc)
    tails.reverse()
    return heads, tails


def _z_at(head, tail) -> float:
    if head <= tail:
        return _STD.inv_cdf(float(head))
    return -_STD.inv_cdf(float(tail))


def w2_to_gaussian(mu: LatticeMeasure, g: GaussianSpec) -> float:
    """Quadratic transport cost between ``mu`` and ``N(g.mean, g.variance)``."""
    xs = mu.float_values()
    ws = mu.float_weights()
    heads, tails = _levels(mu)
    zs = [_z_at(h, t) for h, t in zip(heads, tails)]
    # boundary terms vanish at u = 0 and u = 1: phi(+-inf) = z phi(z) = 0
    phi = [0.0] + [norm_pdf(z) for z in zs] + [0.0]
    zphi = [0.0] + [z * norm_pdf(z) for z in zs] + [0.0]
    s = g.std
    s2 = g.variance
    total = 0.0
    for i, (x, w) in enumerate(zip(xs, ws)):
        a = float(x) - g.mean
        # int (a - s z)^2 du over [u_i, u_{i+1}]
        total += (a * a + s2) * float(w) - 2.0 * a * s * (phi[i] - phi[i + 1]) - s2 * (zphi[i + 1] - zphi[i])
    return max(total, 0.0)


@dataclass(frozen=True)
class MonotoneTrace:
    """Distances ``(n, d_n)`` with weak and strict monotonicity verdicts.

    ``nonincreasing`` treats differences within :data:`MONOTONE_TOL` as ties;
    ``strictly_decreasing`` requires each step to drop by more than that.
    ``first_increase_at`` is the first ``n`` whose value exceeds its predecessor.
    """

    entries: tuple[tuple[int, float], ...]
    nonincreasing: bool
    strictly_decreasing: bool
    first_increase_at: Optional[int]

    @classmethod
    def from_entries(cls, entries: Sequence[tuple[int, float]]) -> "MonotoneTrace":
        entries = tuple((int(n), float(d)) for n, d in entries)
        first = None
        strict = True
        for (_, prev), (n, cur) in zip(entries, entries[1:]):
            if cur > prev + MONOTONE_TOL and first is None:
                first = n
            if not cur < prev - MONOTONE_TOL:
                strict = False
        return cls(entries, first is None, strict, first)

    @property
    def deltas(self) -> list[Optional[float]]:
        d = [e[1] for e in self.entries]
        return [None] + [b - a for a, b in zip(d, d[1:])]


def gaussian_monotone_trace(mu: LatticeMeasure, n_max: int) -> MonotoneTrace:
    """``T(mu^(n), gamma)`` for ``n = 1..n_max`` with ``gamma`` matched to ``mu``.

    Reports monotonicity; whether it always holds is an open question, so
    nothing here asserts it.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    if not has_zero_mean(mu):
        raise PreconditionError("the trace is defined for measures with vanishing barycenter")
    g = matched_gaussian(mu)
    entries = [(n, w2_to_gaussian(normalized_power(mu, n), g)) for n in range(1, n_max + 1)]
    return MonotoneTrace.from_entries(entries)


def is_log_concave(mu: LatticeMeasure) -> bool:
    """Discrete log-concavity on the minimal lattice covering the support.

    Missing lattice sites count as zero weight, so a gap between positive
    weights fails.  Supports of one or two sites pass vacuously.
    """
    pts = mu.points
    if len(pts) <= 2:
        return True
    g = 0
    for p in pts[1:]:
        g = math.gcd(g, p - pts[0])
    idx = [(p - pts[0]) // g for p in pts]
    if idx[-1] != len(pts) - 1:
        return False
    w = mu.weights
    return all(w[k] * w[k] >= w[k - 1] * w[k + 1] for k in range(1, len(w) - 1))


def logconcave_variant_trace(mu: LatticeMeasure, nu_logconcave: LatticeMeasure, n_max: int) -> MonotoneTrace:
    """``T(mu^(n), nu^(n))`` for ``n = 1..n_max`` with a log-concave ``nu`` (report only)."""
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    if not is_log_concave(nu_logconcave):
        raise PreconditionError("nu is not discretely log-concave")
    entries = []
    for n in range(1, n_max + 1):
        t = w_distance(normalized_power(mu, n), normalized_power(nu_logconcave, n)).cost
        entries.append((n, float(t)))
    return MonotoneTrace.from_entries(entries)
