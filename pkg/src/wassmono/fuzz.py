"""Seeded random instances and fuzz drivers for the structural inequalities."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .measure import LatticeMeasure, mean_surd, translate
from .surd import Surd
from .transport import halving_gap, tanaka_gap


def random_dyadic_weights(rng: random.Random, k: int, max_log2: int = 6) -> list[Fraction]:
    """``k`` positive weights with a common power-of-two denominator, summing to 1."""
    lo = max((k - 1).bit_length(), 0)
    d = rng.randint(lo, max(lo, max_log2))
    total = 1 << d
    cuts = sorted(rng.sample(range(1, total), k - 1)) if k > 1 else []
    edges = [0] + cuts + [total]
    return [Fraction(b - a, total) for a, b in zip(edges, edges[1:])]


def random_measure(rng: random.Random, max_support: int = 8, lo: int = -10, hi: int = 10,
                   step=1, offset=0, max_log2: int = 6) -> LatticeMeasure:
    k = rng.randint(1, min(max_support, hi - lo + 1))
    points = sorted(rng.sample(range(lo, hi + 1), k))
    return LatticeMeasure(points, random_dyadic_weights(rng, k, max_log2), step=step, offset=offset)


def centered(mu: LatticeMeasure) -> LatticeMeasure:
    """Translate ``mu`` to vanishing barycenter."""
    return translate(mu, -mean_surd(mu))


_SCALARS = [Fraction(p, q) for p in (-3, -2, -1, 1, 2, 3) for q in (1, 2, 3)]


@dataclass
class FuzzReport:
    name: str
    trials: int = 0
    min_gap: Optional[Union[Fraction, float]] = None
    witness: Optional[dict] = None
    all_exact: bool = True

    @property
    def ok(self) -> bool:
        return self.witness is None

    def record(self, gap, instance: dict, tol: float = 1e-9):
        self.trials += 1
        if not isinstance(gap, Fraction):
            self.all_exact = False
        if self.min_gap is None or gap < self.min_gap:
            self.min_gap = gap
        bound = 0 if isinstance(gap, Fraction) else -tol
        if gap < bound and self.witness is None:
            self.witness = {**instance, "gap": gap}


def tanaka_instance(rng: random.Random) -> dict:
    """Random ``(mu, mu2, nu, nu2, a, b)`` satisfying the Tanaka preconditions.

    ``a * mu`` and ``b * nu`` land on the same lattice because ``mu`` lives on
    step ``|b|`` and ``nu`` on step ``|a|``; one pair gets matched means.
    """
    if rng.random() < 0.2:
        a = b = Surd.inv_sqrt(2)
        step_x = step_y = 1
    else:
        a, b = rng.choice(_SCALARS), rng.choice(_SCALARS)
        step_x, step_y = abs(b), abs(a)
    off = lambda: Fraction(rng.randint(-4, 4), rng.choice((1, 2, 4)))
    mu = random_measure(rng, 4, -5, 5, step=step_x, offset=off())
    mu2 = random_measure(rng, 4, -5, 5, step=step_x, offset=off())
    nu = random_measure(rng, 4, -5, 5, step=step_y, offset=off())
    nu2 = random_measure(rng, 4, -5, 5, step=step_y, offset=off())
    if rng.random() < 0.5:
        mu2 = translate(mu2, mean_surd(mu) - mean_surd(mu2))
    else:
        nu2 = translate(nu2, mean_surd(nu) - mean_surd(nu2))
    return {"mu": mu, "mu2": mu2, "nu": nu, "nu2": nu2, "a": a, "b": b}


def halving_instance(rng: random.Random) -> dict:
    mu = centered(random_measure(rng, 5, -5, 5))
    nu = centered(random_measure(rng, 5, -5, 5))
    return {"mu": mu, "nu": nu, "m": rng.randint(1, 4)}


def tanaka_fuzz(trials: int, seed: int) -> FuzzReport:
    rng = random.Random(seed)
    rep = FuzzReport("tanaka")
    for _ in range(trials):
        inst = tanaka_instance(rng)
        rep.record(tanaka_gap(**inst), inst)
    return rep


def halving_fuzz(trials: int, seed: int) -> FuzzReport:
    rng = random.Random(seed)
    rep = FuzzReport("halving")
    for _ in range(trials):
        inst = halving_instance(rng)
        rep.record(halving_gap(**inst), inst)
    return rep
