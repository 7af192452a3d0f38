import random
from fractions import Fraction

import pytest

from wassmono.counterexample import family
from wassmono.fuzz import random_measure
from wassmono.lp import lp_oracle, solve_transportation
from wassmono.transport import cost_matrix, transport_cost, verify_marginals, w_distance


def test_small_transportation_problem():
    # classic 3 x 3 instance, optimum 4 by enumeration of permutations
    a = [1, 1, 1]
    b = [1, 1, 1]
    C = [[1, 2, 3], [2, 4, 6], [3, 6, 9]]
    basis = solve_transportation(a, b, C, 0)
    cost = sum(f * C[i][j] for (i, j), f in basis.items())
    assert cost == 3 + 4 + 3


def test_lp_matches_monotone_on_family():
    for n in (1, 2, 3):
        _, _, sigma, tau = family(n)
        res = lp_oracle(sigma, tau, cost_matrix(sigma, tau))
        assert res.exact
        verify_marginals(res.plan)
        assert res.cost == w_distance(sigma, tau).cost == transport_cost(res.plan)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_lp_matches_monotone_random(r):
    rng = random.Random(r)
    for _ in range(40):
        mu, nu = random_measure(rng), random_measure(rng)
        assert lp_oracle(mu, nu, cost_matrix(mu, nu, r)).cost == w_distance(mu, nu, r).cost


def test_lp_concave_cost_beats_monotone():
    # for r < 1 sharing mass beats the monotone coupling
    from wassmono.measure import LatticeMeasure
    mu = LatticeMeasure([0, 1], [Fraction(1, 2), Fraction(1, 2)])
    nu = LatticeMeasure([1, 2], [Fraction(1, 2), Fraction(1, 2)])
    lp = lp_oracle(mu, nu, cost_matrix(mu, nu, 0.5)).cost
    assert lp == pytest.approx(0.5 * 2**0.5)
    assert lp < 1.0


def test_lp_shape_check():
    from wassmono.measure import rademacher_sum
    mu = rademacher_sum(2)
    with pytest.raises(ValueError):
        lp_oracle(mu, mu, [[0]])
