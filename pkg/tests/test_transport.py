from fractions import Fraction

import pytest

from wassmono.exceptions import MarginalMismatchError, PreconditionError
from wassmono.measure import LatticeMeasure, dirac, normalized_power, rademacher_sum, scale
from wassmono.surd import Surd
from wassmono.transport import (
    CostSpec,
    TransportPlan,
    halving_gap,
    monotone_coupling,
    support_distance_lower_bound,
    tanaka_gap,
    transport_cost,
    verify_marginals,
    w_distance,
)


def test_cost_spec_normalizes_integral_exponent():
    assert CostSpec(2.0).exponent == 2 and CostSpec(2.0).is_integer
    assert not CostSpec(0.5).is_integer
    with pytest.raises(ValueError):
        CostSpec(0)


def test_distance_between_diracs():
    assert w_distance(dirac(0), dirac(3)).cost == 9
    assert w_distance(dirac(0), dirac(3), 1).cost == 3


def test_sigma2_tau2_value():
    res = w_distance(rademacher_sum(6), rademacher_sum(8))
    assert res.exact and res.cost == Fraction(5, 8)


def test_normalized_pair_with_square_roots_is_exact():
    mu, nu = rademacher_sum(3), rademacher_sum(4)
    res = w_distance(normalized_power(mu, 2), normalized_power(nu, 2))
    assert res.exact and res.cost == Fraction(5, 16)


def test_irrational_cost_falls_back_to_float():
    mu = normalized_power(rademacher_sum(1), 2)
    res = w_distance(mu, dirac(0), 1)
    assert not res.exact
    assert res.cost == pytest.approx(2**-0.5)


def test_monotone_coupling_marginals():
    mu = LatticeMeasure([0, 1, 5], [Fraction(1, 3), Fraction(1, 6), Fraction(1, 2)])
    nu = LatticeMeasure([-2, 4], [Fraction(3, 4), Fraction(1, 4)])
    plan = monotone_coupling(mu, nu)
    verify_marginals(plan)
    assert transport_cost(plan) == w_distance(mu, nu).cost


def test_verify_marginals_raises():
    mu, nu = rademacher_sum(1), rademacher_sum(1)
    bad = TransportPlan(mu, nu, [(0, 0, Fraction(1, 2)), (1, 0, Fraction(1, 2))])
    with pytest.raises(MarginalMismatchError):
        verify_marginals(bad)


def test_support_distance_lower_bound():
    assert support_distance_lower_bound(rademacher_sum(3), rademacher_sum(4)) == 1
    # even powers overlap, odd powers keep the parity gap (scaled by 1/3)
    assert support_distance_lower_bound(normalized_power(rademacher_sum(3), 2),
                                        normalized_power(rademacher_sum(4), 2)) == 0
    assert support_distance_lower_bound(normalized_power(rademacher_sum(3), 3),
                                        normalized_power(rademacher_sum(4), 3)) == Fraction(1, 3)


def test_fractional_exponent_uses_lp():
    mu = LatticeMeasure([0, 2], [Fraction(1, 2), Fraction(1, 2)])
    nu = LatticeMeasure([1], [1])
    assert w_distance(mu, nu, 0.5).cost == pytest.approx(1.0)


def test_tanaka_gap_nonnegative_for_example():
    mu, mu2 = rademacher_sum(1), LatticeMeasure([-2, 0, 2], [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)])
    nu, nu2 = rademacher_sum(3), rademacher_sum(1)
    a = b = Surd.inv_sqrt(2)
    gap = tanaka_gap(mu, mu2, nu, nu2, a, b)
    assert isinstance(gap, Fraction) and gap >= 0


def test_tanaka_requires_matching_means():
    mu, mu2 = dirac(0), dirac(1)
    with pytest.raises(PreconditionError):
        tanaka_gap(mu, mu2, mu, mu2, 1, 1)


def test_tanaka_with_zero_coefficient_reduces_to_scaling():
    mu, mu2 = rademacher_sum(1), rademacher_sum(3)
    gap = tanaka_gap(mu, mu2, dirac(0), dirac(0), 2, 0)
    assert gap == 0


def test_halving_gap():
    mu, nu = rademacher_sum(3), rademacher_sum(4)
    assert halving_gap(mu, nu, 1) >= 0
    with pytest.raises(PreconditionError):
        halving_gap(dirac(1), nu, 1)


def test_scaling_is_quadratic():
    mu, nu = rademacher_sum(3), rademacher_sum(2)
    assert w_distance(scale(mu, 3), scale(nu, 3)).cost == 9 * w_distance(mu, nu).cost
