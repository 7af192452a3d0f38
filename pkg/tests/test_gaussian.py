import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from wassmono.exceptions import PreconditionError
from wassmono.fuzz import random_measure
from wassmono.gaussian import (
    GaussianSpec,
    gaussian_monotone_trace,
    is_log_concave,
    logconcave_variant_trace,
    matched_gaussian,
    norm_ppf,
    w2_to_gaussian,
)
from wassmono.measure import LatticeMeasure, dirac, normalized_power, rademacher_sum

RADEMACHER_W2 = 2 - 4 / math.sqrt(2 * math.pi)


def quad_w2(mu, g, dps=30):
    """Reference value by adaptive quadrature on each constant-quantile interval."""
    mpmath.mp.dps = dps
    xs = [mpmath.mpf(float(v)) for v in mu.float_values()]
    cum = [mpmath.mpf(0)]
    for w in mu.weights:
        cum.append(cum[-1] + mpmath.mpf(w.numerator) / w.denominator)
    s = mpmath.sqrt(g.variance)
    total = mpmath.mpf(0)
    for x, lo, hi in zip(xs, cum, cum[1:]):
        # substitute u = Phi(z) to remove the endpoint singularities
        f = lambda z: (x - g.mean - s * z) ** 2 * mpmath.npdf(z)
        a = -mpmath.inf if lo == 0 else mpmath.sqrt(2) * mpmath.erfinv(2 * lo - 1)
        b = mpmath.inf if hi >= 1 else mpmath.sqrt(2) * mpmath.erfinv(2 * hi - 1)
        total += mpmath.quad(f, [a, b])
    return float(total)


def test_matched_gaussian():
    g = matched_gaussian(rademacher_sum(1))
    assert g.mean == 0 and g.variance == 1
    assert matched_gaussian(normalized_power(rademacher_sum(1), 5)) == g
    with pytest.raises(PreconditionError):
        matched_gaussian(dirac(0))
    with pytest.raises(ValueError):
        GaussianSpec(0, 0)


def test_rademacher_closed_form():
    v = w2_to_gaussian(rademacher_sum(1), GaussianSpec(0, 1))
    assert abs(v - RADEMACHER_W2) < 1e-14


def test_closed_form_matches_quadrature():
    rng = random.Random(5)
    for _ in range(10):
        mu = random_measure(rng, 6, -6, 6)
        g = GaussianSpec(rng.uniform(-2, 2), rng.uniform(0.5, 4))
        assert abs(w2_to_gaussian(mu, g) - quad_w2(mu, g)) < 1e-9


def test_distance_positive_for_discrete():
    rng = random.Random(2)
    for _ in range(20):
        mu = random_measure(rng)
        assert w2_to_gaussian(mu, GaussianSpec(0, 1)) > 0


def test_discretized_gaussian_converges():
    g = GaussianSpec(0, 1)
    vals = []
    for h in (0.5, 0.25, 0.125):
        pts = list(range(-int(8 / h), int(8 / h) + 1))
        w = np.array([math.exp(-0.5 * (p * h) ** 2) for p in pts])
        w /= w.sum()
        mu = LatticeMeasure(pts, list(w), step=Fraction(h))
        vals.append(w2_to_gaussian(mu, g))
    assert vals[0] > vals[1] > vals[2]


def test_ppf_round_trip_through_exact_levels():
    mpmath.mp.dps = 50
    for x in np.linspace(-8, 8, 33):
        u = Fraction(str(mpmath.ncdf(mpmath.mpf(float(x)))))
        assert abs(norm_ppf(u) - x) < 1e-9


def test_trace_trend():
    trace = gaussian_monotone_trace(rademacher_sum(1), 50)
    assert len(trace.entries) == 50
    assert trace.entries[-1][1] < trace.entries[0][1]
    assert all(math.isfinite(d) for _, d in trace.entries)


def test_trace_asymmetric_records_flag():
    mu = LatticeMeasure([-1, 2], [Fraction(2, 3), Fraction(1, 3)])
    trace = gaussian_monotone_trace(mu, 12)
    assert isinstance(trace.nonincreasing, bool)
    assert (trace.first_increase_at is None) == trace.nonincreasing


def test_trace_requires_centered_measure():
    with pytest.raises(PreconditionError):
        gaussian_monotone_trace(LatticeMeasure([0, 1], [Fraction(1, 2)] * 2), 4)


def test_log_concavity():
    assert is_log_concave(rademacher_sum(6))
    assert not is_log_concave(LatticeMeasure([0, 1, 2], [Fraction(2, 5), Fraction(1, 5), Fraction(2, 5)]))
    assert not is_log_concave(LatticeMeasure([0, 1, 3], [Fraction(1, 3)] * 3))


def test_logconcave_variant_trace():
    mu = LatticeMeasure([-1, 2], [Fraction(2, 3), Fraction(1, 3)])
    trace = logconcave_variant_trace(mu, rademacher_sum(2), 6)
    assert len(trace.entries) == 6
    with pytest.raises(PreconditionError):
        logconcave_variant_trace(mu, LatticeMeasure([0, 1, 3], [Fraction(1, 3)] * 3), 3)


def test_closed_form_matches_quadrature_on_acceptance_measures():
    # same 50 measures as acceptance criterion 9, against adaptive quadrature
    rng = random.Random(9)
    worst = 0.0
    for _ in range(50):
        mu = random_measure(rng)
        while len(mu) < 2:
            mu = random_measure(rng)
        g = matched_gaussian(mu)
        worst = max(worst, abs(w2_to_gaussian(mu, g) - quad_w2(mu, g, dps=20)))
    assert worst < 1e-9
