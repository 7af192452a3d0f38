import random

from wassmono.fuzz import FuzzReport, halving_fuzz, random_dyadic_weights, tanaka_fuzz, tanaka_instance
from wassmono.measure import has_zero_mean


def test_dyadic_weights():
    rng = random.Random(0)
    for k in range(1, 9):
        w = random_dyadic_weights(rng, k)
        assert len(w) == k and sum(w) == 1 and all(x > 0 for x in w)
        assert all(x.denominator & (x.denominator - 1) == 0 for x in w)


def test_fuzz_is_deterministic():
    a, b = tanaka_fuzz(30, 7), tanaka_fuzz(30, 7)
    assert a.min_gap == b.min_gap and a.ok and b.ok


def test_tanaka_instances_meet_preconditions():
    from wassmono.transport import _same_mean
    rng = random.Random(3)
    for _ in range(50):
        inst = tanaka_instance(rng)
        assert _same_mean(inst["mu"], inst["mu2"]) or _same_mean(inst["nu"], inst["nu2"])


def test_halving_fuzz_small():
    rep = halving_fuzz(40, 1)
    assert rep.ok and rep.all_exact and rep.min_gap >= 0


def test_report_records_witness():
    rep = FuzzReport("x")
    rep.record(-1e-3, {"k": 1})
    assert not rep.ok and rep.witness["k"] == 1
    assert not rep.all_exact
    rep2 = FuzzReport("y")
    rep2.record(-5e-10, {})
    assert rep2.ok
