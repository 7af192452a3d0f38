"""One-dimensional optimal transport between lattice measures.

Costs are ``c(x, y) = |x - y|**r`` and every "distance" returned here is the
transport cost itself (no r-th root), so ``r = 2`` gives the quadratic
Wasserstein functional T.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .exceptions import MarginalMismatchError, PreconditionError, UnsupportedInstanceError
from .measure import LatticeMeasure, convolve, has_zero_mean, mean_surd, moments, normalized_power, scale
from .surd import Number, Surd

Value = Union[Fraction, float]

#: Largest ``len(mu) * len(nu)`` accepted by the LP oracle.
LP_CELL_LIMIT = 10**6


@dataclass(frozen=True)
class CostSpec:
    """Cost ``|x - y|**exponent`` with ``exponent > 0``."""

    exponent: Union[int, Fraction, float] = 2

    def __post_init__(self):
        r = self.exponent
        if isinstance(r, bool) or not isinstance(r, (int, float, Fraction)):
            raise TypeError(f"exponent must be a real number, got {r!r}")
        if not r > 0 or (isinstance(r, float) and not math.isfinite(r)):
            raise ValueError(f"exponent must be positive and finite, got {r}")
        if r == int(r):
            object.__setattr__(self, "exponent", int(r))

    @property
    def is_integer(self) -> bool:
        return isinstance(self.exponent, int)

    def __call__(self, x: float, y: float) -> float:
        return abs(float(x) - float(y)) ** float(self.exponent)


QUADRATIC = CostSpec(2)


def _as_cost(cost) -> CostSpec:
    if cost is None:
        return QUADRATIC
    if isinstance(cost, CostSpec):
        return cost
    return CostSpec(cost)


class TransportPlan:
    """Sparse coupling between ``source`` and ``target``.

    ``moves`` is a tuple of ``(source_index, target_index, mass)`` with indices
    into the canonical point lists of the two measures.  Exact plans hold
    integer mass numerators over a shared :attr:`denominator`.
    Marginals are not checked on construction; see :func:`verify_marginals`.
    """

    __slots__ = ("source", "target", "_src", "_tgt", "_masses", "_den")

    def __init__(self, source: LatticeMeasure, target: LatticeMeasure,
                 moves: Iterable[tuple[int, int, Union[Fraction, int, float]]]):
        moves = list(moves)
        src = [int(i) for i, _, _ in moves]
        tgt = [int(j) for _, j, _ in moves]
        raw = [m for _, _, m in moves]
        if any(isinstance(m, float) for m in raw):
            masses, den = [float(m) for m in raw], None
        else:
            fr = [Fraction(m) for m in raw]
            den = math.lcm(*(f.denominator for f in fr)) if fr else 1
            masses = [f.numerator * (den // f.denominator) for f in fr]
        self._init(source, target, src, tgt, masses, den)

    @classmethod
    def _raw(cls, source, target, src, tgt, masses, den) -> "TransportPlan":
        obj = cls.__new__(cls)
        obj._init(source, target, src, tgt, masses, den)
        return obj

    def _init(self, source, target, src, tgt, masses, den):
        if not (len(src) == len(tgt) == len(masses)):
            raise ValueError("ragged move lists")
        ns, nt = len(source), len(target)
        for i, j, m in zip(src, tgt, masses):
            if not (0 <= i < ns and 0 <= j < nt):
                raise IndexError(f"move ({i}, {j}) out of range for supports {ns} x {nt}")
            if m <= 0:
                raise ValueError(f"move ({i}, {j}) has non-positive mass {m}")
        self.source = source
        self.target = target
        self._src = tuple(src)
        self._tgt = tuple(tgt)
        self._masses = tuple(masses)
        self._den = den

    @property
    def exact(self) -> bool:
        return self._den is not None

    @property
    def denominator(self) -> int:
        if self._den is None:
            raise ValueError("float-mode plan has no exact denominator")
        return self._den

    @property
    def masses(self) -> tuple:
        return self._masses

    @property
    def moves(self) -> tuple:
        d = self._den
        if d is None:
            return tuple(zip(self._src, self._tgt, self._masses))
        return tuple((i, j, Fraction(m, d)) for i, j, m in zip(self._src, self._tgt, self._masses))

    def index_arrays(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self._src, self._tgt

    def __len__(self) -> int:
        return len(self._src)

    def source_marginal(self) -> tuple:
        """Row sums, one per source atom."""
        return self._marginal(self._src, len(self.source))

    def target_marginal(self) -> tuple:
        """Column sums, one per target atom."""
        return self._marginal(self._tgt, len(self.target))

    def _marginal(self, idx, size):
        acc = [0] * size if self.exact else [0.0] * size
        for i, m in zip(idx, self._masses):
            acc[i] += m
        if self.exact:
            return tuple(Fraction(a, self._den) for a in acc)
        return tuple(acc)

    def __eq__(self, other):
        if not isinstance(other, TransportPlan):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and sorted(self.moves) == sorted(other.moves))

    def __repr__(self) -> str:
        return f"TransportPlan({len(self)} moves, {len(self.source)} -> {len(self.target)} atoms)"


def _marginal_mismatch(plan_masses_by_index, den, measure: LatticeMeasure, tol: float):
    if den is not None and measure.exact:
        dm = measure.denominator
        for k, (acc, w) in enumerate(zip(plan_masses_by_index, measure.masses)):
            if acc * dm != w * den:
                return k
        return None
    w = measure.float_weights()
    scale_ = 1.0 / den if den is not None else 1.0
    for k, acc in enumerate(plan_masses_by_index):
        if abs(acc * scale_ - w[k]) > tol:
            return k
    return None


def marginal_defects(plan: TransportPlan, tol: float = 1e-12) -> list[str]:
    """Human-readable list of marginal violations (empty when the plan is feasible)."""
    out = []
    for side, idx, measure in (("source", plan._src, plan.source), ("target", plan._tgt, plan.target)):
        acc = [0] * len(measure) if plan.exact else [0.0] * len(measure)
        for i, m in zip(idx, plan.masses):
            acc[i] += m
        k = _marginal_mismatch(acc, plan._den, measure, tol)
        if k is not None:
            got = Fraction(acc[k], plan._den) if plan.exact else acc[k]
            out.append(f"{side} atom {k} (point {measure.points[k]}): plan mass {got}, "
                       f"measure weight {measure.weights[k]}")
    return out


def verify_marginals(plan: TransportPlan, tol: float = 1e-12) -> None:
    defects = marginal_defects(plan, tol)
    if defects:
        raise MarginalMismatchError("; ".join(defects))


@dataclass(frozen=True)
class OTResult:
    cost: Value
    plan: TransportPlan
    exact: bool


# ----------------------------------------------------------------------
# exact distance bookkeeping

@dataclass(frozen=True)
class _Coords:
    """Support values as ``X_i / (scale * sqrt(root))`` with integer ``X_i``."""

    root: int
    scale: int
    xs: tuple
    ys: tuple

    def power_factor(self, r: int) -> Optional[Fraction]:
        """``(scale * sqrt(root))**(-r)`` when it is rational."""
        if self.root != 1 and r % 2:
            return None
        return Fraction(1, self.scale**r * self.root ** (r // 2))


def _coords(mu: LatticeMeasure, nu: LatticeMeasure) -> Optional[_Coords]:
    parts = (mu.offset, mu.step, nu.offset, nu.step)
    roots = {p.root for p in parts if p.coef != 0}
    if len(roots) > 1:
        return None
    root = roots.pop() if roots else 1
    L = math.lcm(*(p.coef.denominator for p in parts))
    mo, ms, no, ns = (int(p.coef * L) for p in parts)
    xs = tuple(mo + ms * p for p in mu.points)
    ys = tuple(no + ns * q for q in nu.points)
    return _Coords(root, L, xs, ys)


def _cost_exactness(mu, nu, cost: CostSpec):
    """Return coords and the rational normalizing factor, or (coords, None)."""
    c = _coords(mu, nu)
    if c is None or not cost.is_integer:
        return c, None
    return c, c.power_factor(cost.exponent)


def _sum_cost(src, tgt, masses, den, mu, nu, cost: CostSpec) -> Value:
    coords, factor = _cost_exactness(mu, nu, cost)
    r = cost.exponent
    if coords is not None and cost.is_integer and den is not None:
        xs, ys = coords.xs, coords.ys
        total = sum(m * abs(xs[i] - ys[j]) ** r for i, j, m in zip(src, tgt, masses))
        q = Fraction(total, den * coords.scale**r)
        if factor is not None:
            return q * factor * coords.scale**r
        return float(q) / coords.root ** (r / 2)
    if den is None:
        m = np.asarray(masses, dtype=float)
    elif den.bit_length() < 1000:
        m = np.asarray(masses, dtype=float) / float(den)
    else:
        m = np.array([float(Fraction(x, den)) for x in masses])
    if coords is not None:
        # scale-free differences keep precision for large lattices
        d = np.abs(np.asarray([coords.xs[i] - coords.ys[j] for i, j in zip(src, tgt)], dtype=float))
        d = d / (coords.scale * math.sqrt(coords.root))
    else:
        xv, yv = mu.float_values(), nu.float_values()
        d = np.abs(xv[list(src)] - yv[list(tgt)])
    return float(np.dot(m, d ** float(r)))


def transport_cost(plan: TransportPlan, cost=None) -> Value:
    """``sum mass * |x - y|**r``; a Fraction when it can be computed exactly.

    Exact when the plan is exact, ``r`` is a positive integer and all support
    values are rational multiples of one common ``1/sqrt(m)`` (with ``r`` even
    whenever ``m > 1``).
    """
    cost = _as_cost(cost)
    return _sum_cost(plan._src, plan._tgt, plan.masses, plan._den, plan.source, plan.target, cost)


def cost_matrix(mu: LatticeMeasure, nu: LatticeMeasure, cost=None):
    """Dense cost matrix: list of lists of Fraction when exact, else a float ndarray."""
    cost = _as_cost(cost)
    coords, factor = _cost_exactness(mu, nu, cost)
    if factor is not None:
        r = cost.exponent
        s = factor * coords.scale**r
        return [[Fraction(abs(x - y) ** r) * s for y in coords.ys] for x in coords.xs]
    if coords is not None:
        x = np.asarray(coords.xs, dtype=float)[:, None]
        y = np.asarray(coords.ys, dtype=float)[None, :]
        d = np.abs(x - y) / (coords.scale * math.sqrt(coords.root))
    else:
        d = np.abs(mu.float_values()[:, None] - nu.float_values()[None, :])
    return d ** float(cost.exponent)


# ----------------------------------------------------------------------

def monotone_coupling(mu: LatticeMeasure, nu: LatticeMeasure) -> TransportPlan:
    """Quantile (co-monotone) coupling of ``mu`` and ``nu``.

    Walks both supports left to right, matching cumulative mass greedily.
    When both remaining masses run out together both pointers advance, so no
    zero-mass move is ever emitted.
    """
    exact = mu.exact and nu.exact
    if exact:
        den = math.lcm(mu.denominator, nu.denominator)
        fa, fb = den // mu.denominator, den // nu.denominator
        a = [m * fa for m in mu.masses]
        b = [m * fb for m in nu.masses]
        eps = 0
    else:
        den = None
        a = list(mu.to_float().masses)
        b = list(nu.to_float().masses)
        eps = 1e-15
    src, tgt, out = [], [], []
    i = j = 0
    ra, rb = a[0], b[0]
    na, nb = len(a), len(b)
    while i < na and j < nb:
        q = ra if ra < rb else rb
        if q > eps:
            src.append(i)
            tgt.append(j)
            out.append(q)
        ra -= q
        rb -= q
        if ra <= eps:
            i += 1
            if i < na:
                ra = a[i]
        if rb <= eps:
            j += 1
            if j < nb:
                rb = b[j]
    return TransportPlan._raw(mu, nu, src, tgt, out, den)


def w_distance(mu: LatticeMeasure, nu: LatticeMeasure, cost=None) -> OTResult:
    """Optimal transport cost between ``mu`` and ``nu``.

    For ``r >= 1`` the cost is convex and the monotone coupling is optimal.
    For ``0 < r < 1`` the problem goes to :func:`wassmono.lp.lp_oracle`.
    """
    cost = _as_cost(cost)
    if cost.exponent >= 1:
        plan = monotone_coupling(mu, nu)
        value = transport_cost(plan, cost)
        return OTResult(value, plan, isinstance(value, Fraction))
    if len(mu) * len(nu) > LP_CELL_LIMIT:
        raise UnsupportedInstanceError(
            f"concave cost r={cost.exponent} needs the LP oracle; "
            f"{len(mu)} x {len(nu)} exceeds {LP_CELL_LIMIT} cells")
    from .lp import lp_oracle

    return lp_oracle(mu, nu, cost_matrix(mu, nu, cost))


def quadratic_cost(mu: LatticeMeasure, nu: LatticeMeasure) -> Value:
    """Shorthand for ``w_distance(mu, nu, 2).cost``."""
    return w_distance(mu, nu, QUADRATIC).cost


def support_distance_lower_bound(mu: LatticeMeasure, nu: LatticeMeasure, cost=None) -> Value:
    """``min c(x, y)`` over support pairs, a lower bound for any coupling's cost."""
    cost = _as_cost(cost)
    coords, factor = _cost_exactness(mu, nu, cost)
    if coords is not None:
        gap = _min_sorted_gap(coords.xs, coords.ys)
        if factor is not None:
            r = cost.exponent
            return Fraction(gap**r) * factor * coords.scale**r
        return (gap / (coords.scale * math.sqrt(coords.root))) ** float(cost.exponent)
    gap = _min_sorted_gap(list(mu.float_values()), list(nu.float_values()))
    return gap ** float(cost.exponent)


def _min_sorted_gap(xs, ys):
    i = j = 0
    best = None
    while i < len(xs) and j < len(ys):
        d = xs[i] - ys[j]
        ad = -d if d < 0 else d
        if best is None or ad < best:
            best = ad
        if d < 0:
            i += 1
        else:
            j += 1
    return best


# ----------------------------------------------------------------------
# structural inequalities

def _same_mean(a: LatticeMeasure, b: LatticeMeasure) -> bool:
    ma, mb = mean_surd(a), mean_surd(b)
    if ma is not None and mb is not None:
        return ma == mb
    return abs(float(moments(a).mean) - float(moments(b).mean)) <= 1e-12


def tanaka_gap(mu, mu2, nu, nu2, a: Number, b: Number, cost=None) -> Value:
    """``a^2 T(X, X') + b^2 T(Y, Y') - T(aX + bY, aX' + bY')``.

    ``X ~ mu, X' ~ mu2, Y ~ nu, Y' ~ nu2`` with independent components.  The
    inequality requires ``E[X] = E[X']`` or ``E[Y] = E[Y']``; the combined
    laws are built by scaling and convolution, so ``a*mu`` and ``b*nu`` (and
    likewise the primed pair) must share a lattice pitch.  ``b = 0`` drops the
    ``Y`` term entirely.
    """
    cost = _as_cost(cost)
    if not (_same_mean(mu, mu2) or _same_mean(nu, nu2)):
        raise PreconditionError("need mean(mu) == mean(mu2) or mean(nu) == mean(nu2)")
    sa, sb = Surd.make(a), Surd.make(b)
    t_x = w_distance(mu, mu2, cost).cost
    t_y = w_distance(nu, nu2, cost).cost
    if sa.coef == 0 and sb.coef == 0:
        return _combine(0, t_x, 0, t_y, 0)
    if sb.coef == 0:
        left, right = scale(mu, sa), scale(mu2, sa)
    elif sa.coef == 0:
        left, right = scale(nu, sb), scale(nu2, sb)
    else:
        left = convolve(scale(mu, sa), scale(nu, sb))
        right = convolve(scale(mu2, sa), scale(nu2, sb))
    t_comb = w_distance(left, right, cost).cost
    return _combine(sa.square(), t_x, sb.square(), t_y, t_comb)


def _combine(a2, tx, b2, ty, tc) -> Value:
    if all(isinstance(v, (Fraction, int)) for v in (tx, ty, tc)):
        return Fraction(a2) * tx + Fraction(b2) * ty - tc
    return float(a2) * float(tx) + float(b2) * float(ty) - float(tc)


def halving_gap(mu: LatticeMeasure, nu: LatticeMeasure, m: int, cost=None) -> Value:
    """``T(mu^(m), nu^(m)) - T(mu^(2m), nu^(2m))`` for barycentred measures."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if not (has_zero_mean(mu) and has_zero_mean(nu)):
        raise PreconditionError("halving inequality needs vanishing barycenters")
    cost = _as_cost(cost)
    t_m = w_distance(normalized_power(mu, m), normalized_power(nu, m), cost).cost
    t_2m = w_distance(normalized_power(mu, 2 * m), normalized_power(nu, 2 * m), cost).cost
    if isinstance(t_m, Fraction) and isinstance(t_2m, Fraction):
        return t_m - t_2m
    return float(t_m) - float(t_2m)
