"""Binomial families on which normalized-convolution costs fail to decrease.

With ``mu_n`` the law of ``2n - 1`` fair signs and ``nu_n`` that of ``2n``,
the doubled laws ``sigma_n = mu_n * mu_n`` and ``tau_n = nu_n * nu_n`` are
close (``T ~ 0.798 / sqrt(n)``) while the tripled laws live on odd and even
integers respectively and stay at cost at least 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .measure import (
    EXACT_SUPPORT_LIMIT,
    LatticeMeasure,
    binomial_sigma_weight,
    convolution_power,
    convolve,
    normalized_power,
    rademacher_sum,
)
from .surd import ONE, ZERO
from .transport import (
    QUADRATIC,
    CostSpec,
    TransportPlan,
    _as_cost,
    support_distance_lower_bound,
    w_distance,
)

#: Limit of ``sqrt(n) * T(sigma_n, tau_n)``, i.e. ``2 / sqrt(2 pi)``.
ASYMPTOTIC_CONSTANT = 2.0 / math.sqrt(2.0 * math.pi)

RHO = rademacher_sum(2)


class Family(NamedTuple):
    mu: LatticeMeasure
    nu: LatticeMeasure
    sigma: LatticeMeasure
    tau: LatticeMeasure


def family(n: int, verify: bool = False) -> Family:
    """``(mu_n, nu_n, sigma_n, tau_n)``.

    The doubled laws are built directly as sums of ``4n - 2`` and ``4n`` signs;
    ``tau_n == sigma_n * rho`` is always checked, and ``verify=True``
    additionally checks ``sigma_n == mu_n * mu_n`` and ``tau_n == nu_n * nu_n``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    mu, nu = rademacher_sum(2 * n - 1), rademacher_sum(2 * n)
    sigma, tau = rademacher_sum(4 * n - 2), rademacher_sum(4 * n)
    if convolve(sigma, RHO) != tau:
        raise ArithmeticError(f"tau_{n} != sigma_{n} * rho")
    if verify and (convolve(mu, mu) != sigma or convolve(nu, nu) != tau):
        raise ArithmeticError(f"doubling identity fails at n={n}")
    return Family(mu, nu, sigma, tau)


def radiation_outflow(n: int, k: int) -> Fraction:
    """Mass the radiation plan moves from ``2k`` to ``2k + 2`` (``0 <= k <= 2n - 1``).

    ``p_{n,k} (2k + 1) / (4 (2n + k))``, which equals ``(p_{n,k} - p_{n,k+1}) / 4``
    and reduces to ``p_{n,0} / (8n)`` at ``k = 0``.
    """
    if not 0 <= k <= 2 * n - 1:
        raise ValueError(f"k must lie in [0, {2 * n - 1}], got {k}")
    return binomial_sigma_weight(n, k) * Fraction(2 * k + 1, 4 * (2 * n + k))


def radiation_plan(n: int) -> TransportPlan:
    """Explicit optimal plan from ``sigma_n`` to ``tau_n``.

    Each even point ``2k >= 0`` pushes :func:`radiation_outflow` one lattice
    step outward, ``0`` pushes to both sides, the negative half mirrors this,
    and everything else stays put.  The outermost source point ``4n - 2``
    also pushes: the target atom ``4n`` can only be fed from there.
    """
    fam = family(n)
    sigma, tau = fam.sigma, fam.tau
    moves = []
    # source point 2k sits at index k + 2n - 1; target point 2k at k + 2n
    for k in range(-(2 * n - 1), 2 * n):
        i = k + 2 * n - 1
        p = binomial_sigma_weight(n, k)
        if k == 0:
            out = radiation_outflow(n, 0)
            moves.append((i, k + 2 * n, p - 2 * out))
            moves.append((i, (k - 1) + 2 * n, out))
            moves.append((i, (k + 1) + 2 * n, out))
            continue
        out = radiation_outflow(n, abs(k))
        direction = 1 if k > 0 else -1
        moves.append((i, k + 2 * n, p - out))
        moves.append((i, k + direction + 2 * n, out))
    moves.sort(key=lambda m: (m[0], m[1]))
    return TransportPlan(sigma, tau, moves)


def radiation_cost(n: int) -> Fraction:
    """Quadratic cost of :func:`radiation_plan`: ``2 sum_k p_{n,k} (2k+1)/(2n+k)``."""
    return 2 * sum(binomial_sigma_weight(n, k) * Fraction(2 * k + 1, 2 * n + k) for k in range(2 * n))


@dataclass(frozen=True)
class SandwichBounds:
    n: int
    lower: Fraction
    upper: Fraction
    exact_cost: Union[Fraction, float]

    def __post_init__(self):
        if not (self.lower <= self.exact_cost <= self.upper):
            raise ArithmeticError(
                f"sandwich violated at n={self.n}: {float(self.lower)} <= "
                f"{float(self.exact_cost)} <= {float(self.upper)} fails")


def sandwich_sums(n: int) -> tuple[Fraction, Fraction]:
    """``(sum_{k<=2n-2} p_{n,k+1}(2k+1)/n, sum_{k<=2n-1} p_{n,k}(2k+1)/n)``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    N = 4 * n - 2
    c = [math.comb(N, 2 * n - 1)]
    for k in range(1, 2 * n):
        # C(N, j+1) = C(N, j) (N - j) / (j + 1) with j = k + 2n - 2
        j = k + 2 * n - 2
        c.append(c[-1] * (N - j) // (j + 1))
    upper = sum(c[k] * (2 * k + 1) for k in range(2 * n))
    lower = sum(c[k + 1] * (2 * k + 1) for k in range(2 * n - 1))
    den = n << N
    return Fraction(lower, den), Fraction(upper, den)


def sandwich(n: int, exact_limit: int = EXACT_SUPPORT_LIMIT) -> SandwichBounds:
    """Exact bounds around ``T(sigma_n, tau_n)`` together with the cost itself."""
    lower, upper = sandwich_sums(n)
    _, _, sigma, tau = family(n)
    if len(tau) > exact_limit:
        sigma, tau = sigma.to_float(), tau.to_float()
    return SandwichBounds(n, lower, upper, w_distance(sigma, tau, QUADRATIC).cost)


def ratio_identity_failures(n: int) -> list[tuple[str, int]]:
    """Indices where the consecutive-probability ratio identities fail (expect none).

    Checks ``1 - p_{k+1}/p_k == (2k+1)/(2n+k)`` for ``0 <= k <= 2n-1`` and
    ``p_k/p_{k+1} - 1 == (2k+1)/(2n-k-1)`` for ``0 <= k <= 2n-2``.
    """
    bad = []
    p = [binomial_sigma_weight(n, k) for k in range(2 * n + 1)]
    for k in range(2 * n):
        if 1 - p[k + 1] / p[k] != Fraction(2 * k + 1, 2 * n + k):
            bad.append(("outflow", k))
    for k in range(2 * n - 1):
        if p[k] / p[k + 1] - 1 != Fraction(2 * k + 1, 2 * n - k - 1):
            bad.append(("inflow", k))
    return bad


def odd_separation(n: int, k_odd: int, cost=None):
    """Support distance cost between ``mu_n^{*k}`` and ``nu_n^{*k}`` for odd ``k``."""
    if k_odd < 1 or k_odd % 2 == 0:
        raise ValueError(f"k_odd must be an odd positive integer, got {k_odd}")
    mu_k = rademacher_sum(k_odd * (2 * n - 1))
    nu_k = rademacher_sum(k_odd * 2 * n)
    return support_distance_lower_bound(mu_k, nu_k, _as_cost(cost))


@dataclass(frozen=True)
class ViolationReport:
    """Comparison of ``T(mu^(2), nu^(2))`` with ``T(mu^(3), nu^(3))``."""

    n: int
    t2_normalized: Fraction
    t3_normalized_lower: Fraction
    t3_normalized_exact: Fraction
    violated: bool


def monotonicity_violation(n: int) -> ViolationReport:
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    mu, nu = rademacher_sum(2 * n - 1), rademacher_sum(2 * n)
    t2 = w_distance(normalized_power(mu, 2), normalized_power(nu, 2)).cost
    t3 = w_distance(normalized_power(mu, 3), normalized_power(nu, 3)).cost
    t3_lower = odd_separation(n, 3) / 3
    return ViolationReport(n, t2, t3_lower, t3, t3 > t2 or t3_lower > t2)


# ----------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepRow:
    n: int
    cost: Union[Fraction, float, None]
    sqrt_n_scaled: Optional[float]
    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None
    exact: bool = False
    error: Optional[str] = None

    @property
    def sqrt_n_lower(self) -> Optional[float]:
        return None if self.lower is None else math.sqrt(self.n) * float(self.lower)

    @property
    def sqrt_n_upper(self) -> Optional[float]:
        return None if self.upper is None else math.sqrt(self.n) * float(self.upper)


@dataclass(frozen=True)
class SweepResult:
    cost: CostSpec
    rows: tuple[SweepRow, ...]

    @property
    def limit_estimate(self) -> Optional[float]:
        """``sqrt(n) T_r`` at the largest successfully computed ``n``."""
        ok = [r for r in self.rows if r.error is None]
        return max(ok, key=lambda r: r.n).sqrt_n_scaled if ok else None


def _sweep_row(n: int, cost: CostSpec, exact_limit: int) -> SweepRow:
    _, _, sigma, tau = family(n)
    if len(tau) > exact_limit:
        sigma, tau = sigma.to_float(), tau.to_float()
    res = w_distance(sigma, tau, cost)
    lower = upper = None
    if cost.exponent == 2:
        lower, upper = sandwich_sums(n)
    return SweepRow(n, res.cost, math.sqrt(n) * float(res.cost), lower, upper, res.exact)


def asymptotic_sweep(n_values: Sequence[int], cost=None,
                     exact_limit: int = EXACT_SUPPORT_LIMIT) -> SweepResult:
    """``T_r(sigma_n, tau_n)`` and ``sqrt(n) T_r`` for each ``n``; sandwich bounds at ``r = 2``.

    A failing entry (e.g. a concave cost on a support too large for the LP
    oracle) is recorded with its error message and the sweep moves on.
    """
    if not n_values:
        raise ValueError("n_values must be nonempty")
    cost = _as_cost(cost)
    rows = []
    for n in n_values:
        try:
            rows.append(_sweep_row(int(n), cost, exact_limit))
        except (ValueError, MemoryError, ArithmeticError) as exc:
            rows.append(SweepRow(int(n), None, None, error=f"{type(exc).__name__}: {exc}"))
    return SweepResult(cost, tuple(rows))


# ----------------------------------------------------------------------
# p-fold generalization

def pfold_step(p: int) -> LatticeMeasure:
    """Mean-zero step law ``P(Z = 1) = (p-1)/p``, ``P(Z = 1-p) = 1/p``."""
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    return LatticeMeasure([1 - p, 1], [Fraction(1, p), Fraction(p - 1, p)])


def _pfold_sum(p: int, count: int) -> LatticeMeasure:
    # count - p*J with J ~ Binomial(count, 1/p); ascending points means J descending
    Js = range(count, -1, -1)
    points = [count - p * J for J in Js]
    masses = [math.comb(count, J) * (p - 1) ** (count - J) for J in Js]
    return LatticeMeasure._raw(ONE, ZERO, points, masses, p**count)


def pfold_family(p: int, n: int) -> tuple[LatticeMeasure, LatticeMeasure]:
    """Sums of ``pn + 1`` and ``pn`` copies of :func:`pfold_step`.

    Every support point of the ``k``-fold convolutions is ``k`` resp. ``0``
    modulo ``p``, so their cost is at least 1 unless ``p`` divides ``k``.
    """
    if p < 2 or n < 1:
        raise ValueError(f"need p >= 2 and n >= 1, got p={p}, n={n}")
    return _pfold_sum(p, p * n + 1), _pfold_sum(p, p * n)


def pfold_separation(p: int, n: int, k: int, cost=None):
    mu, nu = pfold_family(p, n)
    return support_distance_lower_bound(convolution_power(mu, k), convolution_power(nu, k), _as_cost(cost))


def pfold_normalized_cost(p: int, n: int, cost=None):
    """``T(mu^(p), nu^(p))`` for the p-fold family."""
    mu, nu = pfold_family(p, n)
    return w_distance(normalized_power(mu, p), normalized_power(nu, p), _as_cost(cost)).cost
