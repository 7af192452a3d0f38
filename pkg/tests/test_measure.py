import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wassmono import serialize
from wassmono.exceptions import DegenerateScaleError, LatticeMismatchError
from wassmono.measure import (
    LatticeMeasure,
    binomial_sigma_weight,
    convolution_power,
    convolve,
    dirac,
    has_zero_mean,
    moments,
    normalized_power,
    rademacher_sum,
    scale,
    translate,
)
from wassmono.surd import Surd


def test_construction_rejects_bad_input():
    with pytest.raises(ValueError):
        LatticeMeasure([0, 1], [Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(ValueError):
        LatticeMeasure([1, 0], [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(ValueError):
        LatticeMeasure([0, 1], [Fraction(1), Fraction(0)])


def test_from_atoms_drops_zeros():
    mu = LatticeMeasure.from_atoms({2: Fraction(1, 2), -1: Fraction(1, 2), 5: 0})
    assert mu.points == (-1, 2)
    assert mu.weight_at(5) == 0


def test_rademacher_sum_is_binomial():
    for m in range(0, 12):
        mu = rademacher_sum(m)
        assert mu.points == tuple(range(-m, m + 1, 2)) or m == 0
        for j, w in enumerate(mu.weights):
            assert w == Fraction(math.comb(m, j), 2**m)


def test_rademacher_sum_matches_convolution():
    rho1 = rademacher_sum(1)
    for m in range(1, 10):
        assert convolution_power(rho1, m) == rademacher_sum(m)


def test_binomial_sigma_weight_is_sigma_atom():
    for n in (1, 2, 5):
        sigma = rademacher_sum(4 * n - 2)
        for k in range(-(2 * n - 1), 2 * n):
            assert binomial_sigma_weight(n, k) == sigma.weight_at(2 * k)


def test_convolution_is_commutative_and_associative():
    a = LatticeMeasure([0, 3], [Fraction(1, 3), Fraction(2, 3)])
    b = LatticeMeasure([-1, 1, 2], [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)])
    c = rademacher_sum(2)
    assert convolve(a, b) == convolve(b, a)
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))


def test_convolution_requires_shared_step():
    with pytest.raises(LatticeMismatchError):
        convolve(rademacher_sum(1), scale(rademacher_sum(1), Surd.inv_sqrt(2)))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 7, 16])
def test_normalized_power_keeps_variance(m):
    mu = LatticeMeasure([-2, 1], [Fraction(1, 3), Fraction(2, 3)])
    mom = moments(normalized_power(mu, m))
    assert mom.mean == 0
    assert mom.variance == moments(mu).variance == 2


def test_normalized_power_of_rademacher_lives_on_surd_lattice():
    mu = normalized_power(rademacher_sum(1), 2)
    assert mu.step == Surd.inv_sqrt(2)
    assert [float(mu.value(i)) for i in range(len(mu))] == pytest.approx([-2**0.5, 0, 2**0.5])


def test_scale_and_translate():
    mu = LatticeMeasure([0, 1], [Fraction(1, 4), Fraction(3, 4)])
    flipped = scale(mu, -2)
    assert moments(flipped).mean == Fraction(-3, 2)
    with pytest.raises(DegenerateScaleError):
        scale(mu, 0)
    assert has_zero_mean(translate(mu, Fraction(-3, 4)))


def test_dirac_moments():
    mom = moments(dirac(3))
    assert mom.mean == 3 and mom.variance == 0


def test_float_copy_flags_inexact():
    mu = rademacher_sum(5).to_float()
    assert not mu.exact
    assert abs(moments(mu).variance - 5) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 64))
def test_rademacher_invariants(n):
    mu = rademacher_sum(n)
    assert sum(mu.weights) == 1
    assert has_zero_mean(mu)
    assert moments(mu).variance == n
    assert mu.weights == mu.weights[::-1]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=5), st.integers(1, 32))
def test_normalized_power_invariants(raw, m):
    total = sum(raw)
    mu = LatticeMeasure(list(range(len(raw))), [Fraction(r, total) for r in raw])
    mu = translate(mu, -moments(mu).mean)
    p = normalized_power(mu, m)
    assert sum(p.weights) == 1
    assert has_zero_mean(p)
    assert moments(p).variance == moments(mu).variance


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 50), min_size=1, max_size=6), st.integers(-5, 5), st.sampled_from([1, 2, 3, 5]))
def test_json_round_trip(raw, shift, root):
    total = sum(raw)
    mu = LatticeMeasure([3 * k + shift for k in range(len(raw))], [Fraction(r, total) for r in raw],
                        step=Surd.inv_sqrt(root), offset=Surd(Fraction(shift, 7), root))
    doc = serialize.loads(serialize.dumps(serialize.measure_to_json(mu)))
    assert serialize.measure_from_json(doc) == mu
