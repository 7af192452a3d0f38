import csv
import io
import json
from fractions import Fraction

import pytest

from wassmono import serialize
from wassmono.cli import RunConfig, cmd_reproduce, main
from wassmono.counterexample import radiation_plan
from wassmono.measure import LatticeMeasure
from wassmono.transport import TransportPlan


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reproduce_small(capsys):
    code, out, _ = run(capsys, "reproduce", "--n-max", "5")
    assert code == 0
    assert "5/8" in out and "131/384" in out and "all checks passed" in out


def test_reproduce_is_deterministic(capsys):
    a = run(capsys, "reproduce", "--n-max", "3", "--format", "json")[1]
    b = run(capsys, "reproduce", "--n-max", "3", "--format", "json")[1]
    assert a == b and json.loads(a)["passed"]


def test_reproduce_names_broken_plan():
    def broken(n):
        plan = radiation_plan(n)
        moves = list(plan.moves)
        i, j, m = moves[0]
        moves[0] = (i, j, m * 2)
        return TransportPlan(plan.source, plan.target, moves)

    rep = cmd_reproduce(RunConfig("reproduce", n_max=3), broken)
    assert not rep.passed and rep.first_failure() == "radiation-plan-marginals"


def test_reproduce_corrupt_flag_exit_code(capsys):
    code, out, _ = run(capsys, "reproduce", "--n-max", "2", "--corrupt-plan")
    assert code == 1 and "radiation-plan-marginals" in out


def test_sweep_csv(capsys, tmp_path):
    target = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--n-max", "64", "--format", "csv", "--output", str(target))
    rows = list(csv.reader(io.StringIO(target.read_text())))
    assert code == 0 and rows[0] == serialize.SWEEP_HEADER
    assert [int(r[0]) for r in rows[1:]] == [1, 2, 4, 8, 16, 32, 64]


def test_sweep_other_cost(capsys):
    code, out, _ = run(capsys, "sweep", "--n-max", "8", "--cost-r", "1", "--format", "json")
    assert code == 0 and json.loads(out)["cost_r"] == 1


def test_fuzz_command(capsys):
    code, out, _ = run(capsys, "tanaka-fuzz", "--trials", "20", "--seed", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["fuzz"]) == 2


def test_gaussian_command(capsys, tmp_path):
    code, out, _ = run(capsys, "gaussian", "--n-max", "6", "--format", "csv")
    assert code == 0 and out.startswith("n,distance,delta")
    f = tmp_path / "m.json"
    f.write_text(serialize.dumps(serialize.measure_to_json(
        LatticeMeasure([-1, 2], [Fraction(2, 3), Fraction(1, 3)]))))
    code, out, _ = run(capsys, "gaussian", "--n-max", "4", "--measure", str(f))
    assert code == 0 and "nonincreasing=" in out


def test_pfold_command(capsys):
    code, out, _ = run(capsys, "pfold", "--p", "3", "--n-max", "8")
    assert code == 0 and "separation>=1: True" in out


def test_check_plan_ok_and_violation(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(serialize.dumps(serialize.plan_to_json(radiation_plan(4))))
    assert run(capsys, "check-plan", str(good), "--max-cycle-len", "0")[:2] == (0, "ok\n")

    mu = LatticeMeasure([0, 1], [Fraction(1, 2)] * 2)
    crossed = TransportPlan(mu, mu, [(0, 1, Fraction(1, 2)), (1, 0, Fraction(1, 2))])
    bad = tmp_path / "bad.json"
    bad.write_text(serialize.dumps(serialize.plan_to_json(crossed)))
    code, out, _ = run(capsys, "check-plan", str(bad))
    assert code == 1 and out.startswith("violation") and "[0, 1]" in out


def test_check_plan_bad_input(capsys, tmp_path):
    f = tmp_path / "broken.json"
    f.write_text('{"source": ')
    code, _, err = run(capsys, "check-plan", str(f))
    assert code == 2 and "line 1" in err
    code, _, err = run(capsys, "check-plan", str(tmp_path / "missing.json"))
    assert code == 2


def test_plan_export(capsys):
    code, out, _ = run(capsys, "plan", "--n", "2")
    assert code == 0
    assert serialize.plan_from_json(json.loads(out)) == radiation_plan(2)


@pytest.mark.parametrize("argv", [[], ["nope"], ["sweep", "--cost-r", "-1"], ["sweep", "--format", "xml"]])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_check_plan_radiation_8(capsys, tmp_path):
    f = tmp_path / "r8.json"
    assert run(capsys, "plan", "--n", "8", "--output", str(f))[0] == 0
    assert run(capsys, "check-plan", str(f))[:2] == (0, "ok\n")


def test_fuzz_seed_42(capsys):
    code, out, _ = run(capsys, "tanaka-fuzz", "--seed", "42", "--trials", "1000")
    assert code == 0 and "min_gap=0" in out


def test_outputs_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        run(capsys, "tanaka-fuzz", "--seed", "3", "--trials", "50", "--format", "json", "--output", str(f))
    assert a.read_bytes() == b.read_bytes()
