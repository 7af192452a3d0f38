"""Command-line front end.

Exit codes: 0 when every check holds, 1 when a mathematical check fails,
2 for usage, parse and I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import serialize
from .counterexample import (
    ASYMPTOTIC_CONSTANT,
    asymptotic_sweep,
    monotonicity_violation,
    odd_separation,
    pfold_normalized_cost,
    pfold_separation,
    radiation_plan,
)
from .cyclic import cyclic_monotonicity_check
from .exceptions import PreconditionError
from .fuzz import halving_fuzz, tanaka_fuzz
from .gaussian import gaussian_monotone_trace
from .lp import lp_oracle
from .measure import EXACT_SUPPORT_LIMIT, rademacher_sum
from .transport import CostSpec, TransportPlan, cost_matrix, marginal_defects, transport_cost, w_distance

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2

REPRODUCE_GRID = (64, 256, 1024, 4096)
ASYMPTOTIC_RTOL = 0.05


@dataclass
class RunConfig:
    command: str
    n_max: int = 50
    cost_r: float = 2
    seed: int = 0
    trials: int = 1000
    output_format: str = "text"
    output: Optional[str] = None
    exact_limit: int = EXACT_SUPPORT_LIMIT
    p: int = 3
    plan_file: Optional[str] = None
    max_cycle_len: Optional[int] = 3
    n: int = 8


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, detail, **data):
        self.checks.append(Check(name, bool(passed), detail, data))

    def first_failure(self) -> Optional[str]:
        return next((c.name for c in self.checks if not c.passed), None)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {
                "title": self.title,
                "passed": self.passed,
                "first_failure": self.first_failure(),
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail,
                            **{k: _jsonable(v) for k, v in c.data.items()}} for c in self.checks],
                "tables": {k: _jsonable(v) for k, v in self.tables.items()},
            }
            return serialize.dumps(doc)
        if fmt == "csv":
            rows = [[c.name, "pass" if c.passed else "FAIL", c.detail] for c in self.checks]
            return serialize._csv(rows, ["check", "status", "detail"])
        lines = [self.title]
        for c in self.checks:
            lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
        for name, table in self.tables.items():
            lines.append(f"-- {name}")
            if isinstance(table, str):
                lines.append(table.rstrip("\n"))
            else:
                lines.extend(f"   {row}" for row in table)
        lines.append("all checks passed" if self.passed else f"FAILED: {self.first_failure()}")
        return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, Fraction):
        return serialize.value_json(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# ----------------------------------------------------------------------
# commands

def cmd_reproduce(config: RunConfig, plan_factory: Callable[[int], TransportPlan] = radiation_plan) -> Report:
    """Recompute every headline number of the counterexample.

    ``plan_factory`` exists so tests can inject a broken plan.
    """
    rep = Report("counterexample reproduction")
    fam2_sigma, fam2_tau = rademacher_sum(6), rademacher_sum(8)
    t_mono = w_distance(fam2_sigma, fam2_tau).cost
    t_lp = lp_oracle(fam2_sigma, fam2_tau, cost_matrix(fam2_sigma, fam2_tau)).cost
    rep.add("sigma2-tau2-value", t_mono == Fraction(5, 8) == t_lp,
            f"T(sigma_2, tau_2) = {t_mono} (monotone), {t_lp} (LP); expected 5/8", value=t_mono)

    sep = odd_separation(2, 3)
    t3_full = w_distance(rademacher_sum(9), rademacher_sum(12)).cost
    rep.add("odd-separation", sep == 1 and t3_full >= 1,
            f"support distance {sep}, T(mu_2^3, nu_2^3) = {t3_full} >= 1", value=t3_full)

    v = monotonicity_violation(2)
    ok = v.t2_normalized == Fraction(5, 16) and v.t2_normalized < Fraction(1, 3) <= v.t3_normalized_exact
    rep.add("power-monotonicity-violation", ok and v.violated,
            f"T(mu^(2), nu^(2)) = {v.t2_normalized} < 1/3 <= T(mu^(3), nu^(3)) = {v.t3_normalized_exact}",
            t2=v.t2_normalized, t3=v.t3_normalized_exact)

    sweep = asymptotic_sweep(REPRODUCE_GRID, 2, exact_limit=config.exact_limit)
    last = sweep.rows[-1]
    sandwich_ok = all(r.error is None and r.lower <= r.cost <= r.upper for r in sweep.rows)
    widths = [r.sqrt_n_upper - r.sqrt_n_lower for r in sweep.rows if r.error is None]
    shrinking = all(b < a for a, b in zip(widths, widths[1:]))
    rep.add("sandwich", sandwich_ok and shrinking, "lower <= T <= upper on the grid, width shrinking")
    rel = abs(last.sqrt_n_scaled - ASYMPTOTIC_CONSTANT) / ASYMPTOTIC_CONSTANT
    rep.add("asymptotic-limit", rel <= ASYMPTOTIC_RTOL,
            f"sqrt(n) T at n={last.n} is {last.sqrt_n_scaled:.6f}; 2/sqrt(2 pi) = {ASYMPTOTIC_CONSTANT:.6f}"
            f" (rel. error {rel:.2e})")
    rep.tables["sqrt_n_table"] = serialize.sweep_to_csv(sweep)

    n_top = max(config.n_max, 1)
    marg_fail = opt_fail = None
    for n in range(1, n_top + 1):
        plan = plan_factory(n)
        if marg_fail is None and marginal_defects(plan):
            marg_fail = n
        if opt_fail is None and transport_cost(plan, 2) != w_distance(plan.source, plan.target).cost:
            opt_fail = n
    rep.add("radiation-plan-marginals", marg_fail is None,
            f"sigma_n -> tau_n exactly for n <= {n_top}" if marg_fail is None else f"marginals wrong at n={marg_fail}")
    rep.add("radiation-plan-optimality", opt_fail is None,
            f"plan cost equals the optimum for n <= {n_top}" if opt_fail is None else f"suboptimal at n={opt_fail}")
    return rep


def _powers_up_to(n_max: int) -> list[int]:
    grid = [1 << k for k in range(max(n_max, 1).bit_length()) if 1 << k <= n_max]
    if grid[-1] != n_max:
        grid.append(n_max)
    return grid


def cmd_sweep(config: RunConfig):
    result = asymptotic_sweep(_powers_up_to(config.n_max), CostSpec(config.cost_r), config.exact_limit)
    failed = [r.n for r in result.rows if r.lower is not None and not (r.lower <= r.cost <= r.upper)]
    if config.output_format == "csv":
        text = serialize.sweep_to_csv(result)
    elif config.output_format == "json":
        text = serialize.dumps(serialize.sweep_to_json(result))
    else:
        lines = [f"sweep r={result.cost.exponent}"]
        for r in result.rows:
            if r.error:
                lines.append(f"n={r.n}: error {r.error}")
                continue
            extra = "" if r.lower is None else (f"  sqrt(n)*[lower, upper] = [{serialize.decimal(r.sqrt_n_lower)}, "
                                                f"{serialize.decimal(r.sqrt_n_upper)}]")
            lines.append(f"n={r.n}: T={serialize.decimal(r.cost)}  sqrt(n)*T={serialize.decimal(r.sqrt_n_scaled)}"
                         f"  exact={r.exact}{extra}")
        lines.append(f"limit estimate: {serialize.decimal(result.limit_estimate)}")
        if result.cost.exponent == 2:
            lines.append(f"reference 2/sqrt(2 pi) = {serialize.decimal(ASYMPTOTIC_CONSTANT)}")
        text = "\n".join(lines) + "\n"
    return text, (EXIT_CHECK_FAILED if failed else EXIT_OK)


def _fuzz_line(rep) -> dict:
    return {"name": rep.name, "trials": rep.trials, "min_gap": rep.min_gap, "exact": rep.all_exact,
            "violation": None if rep.ok else {k: str(v) for k, v in rep.witness.items()}}


def cmd_tanaka_fuzz(config: RunConfig):
    reps = [tanaka_fuzz(config.trials, config.seed), halving_fuzz(config.trials, config.seed)]
    ok = all(r.ok for r in reps)
    if config.output_format == "json":
        text = serialize.dumps({"passed": ok, "fuzz": [_jsonable(_fuzz_line(r)) for r in reps]})
    elif config.output_format == "csv":
        rows = [[r.name, r.trials, serialize.decimal(r.min_gap), "true" if r.all_exact else "false",
                 "" if r.ok else str(r.witness)] for r in reps]
        text = serialize._csv(rows, ["check", "trials", "min_gap", "exact", "violation"])
    else:
        lines = []
        for r in reps:
            lines.append(f"{r.name}: trials={r.trials} min_gap={r.min_gap} exact={r.all_exact}")
            if not r.ok:
                lines.append(f"  violation: {r.witness}")
        text = "\n".join(lines) + "\n"
    return text, (EXIT_OK if ok else EXIT_CHECK_FAILED)


def cmd_gaussian(config: RunConfig, measure_file: Optional[str] = None):
    mu = rademacher_sum(1)
    if measure_file:
        mu = serialize.measure_from_json(serialize.loads(Path(measure_file).read_text()))
    trace = gaussian_monotone_trace(mu, config.n_max)
    if config.output_format == "csv":
        text = serialize.trace_to_csv(trace)
    elif config.output_format == "json":
        text = serialize.dumps(serialize.trace_to_json(trace))
    else:
        lines = [f"n={n}: {serialize.decimal(d)}" for n, d in trace.entries]
        lines.append(f"nonincreasing={trace.nonincreasing} strictly_decreasing={trace.strictly_decreasing} "
                     f"first_increase_at={trace.first_increase_at}")
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK


def cmd_pfold(config: RunConfig):
    p = config.p
    ks = [k for k in range(1, 2 * p + 1) if k % p]
    rows, ok = [], True
    for n in _powers_up_to(config.n_max):
        seps = {k: pfold_separation(p, n, k) for k in ks}
        t = pfold_normalized_cost(p, n)
        ok &= all(s >= 1 for s in seps.values())
        rows.append({"n": n, "separation_min": min(seps.values()), "t_p": t})
    values = [float(r["t_p"]) for r in rows]
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    if config.output_format == "json":
        text = serialize.dumps({"p": p, "k_checked": ks, "separation_ok": ok, "t_p_decreasing": decreasing,
                                "rows": [_jsonable(r) for r in rows]})
    else:
        table = [[r["n"], serialize.decimal(r["separation_min"]), serialize.decimal(r["t_p"])] for r in rows]
        text = serialize._csv(table, ["n", "separation_min", "t_p"])
        if config.output_format == "text":
            text += f"p={p} k={ks} separation>=1: {ok}  T(mu^(p), nu^(p)) decreasing: {decreasing}\n"
    return text, (EXIT_OK if ok else EXIT_CHECK_FAILED)


def cmd_check_plan(config: RunConfig):
    plan = serialize.plan_from_json(serialize.loads(Path(config.plan_file).read_text()))
    defects = marginal_defects(plan)
    verdict = cyclic_monotonicity_check(plan, CostSpec(config.cost_r), config.max_cycle_len)
    ok = not defects and verdict.ok
    if config.output_format == "json":
        text = serialize.dumps({"ok": ok, "marginal_defects": defects, "cyclically_monotone": verdict.ok,
                                "complete": verdict.complete, "checked_len": verdict.checked_len,
                                "violating_cycle": verdict.cycle,
                                "cost": serialize.value_json(transport_cost(plan, CostSpec(config.cost_r)))})
    else:
        if ok:
            text = "ok\n"
        else:
            parts = list(defects)
            if not verdict.ok:
                parts.append(f"violating cycle over moves {list(verdict.cycle)} (excess {verdict.excess})")
            text = "violation: " + "; ".join(parts) + "\n"
        if not verdict.complete:
            text += f"note: budget {verdict.budget} exceeded, only cycles of length <= 2 checked\n"
    return text, (EXIT_OK if ok else EXIT_CHECK_FAILED)


def cmd_plan(config: RunConfig):
    return serialize.dumps(serialize.plan_to_json(radiation_plan(config.n))), EXIT_OK


# ----------------------------------------------------------------------

def _positive_real(s: str) -> float:
    try:
        v = float(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return int(v) if v == int(v) else v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=int, help="largest n (meaning depends on the command)")
    common.add_argument("--cost-r", type=_positive_real, default=2, help="cost exponent r in |x-y|^r")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--format", dest="output_format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--exact-limit", type=int, default=EXACT_SUPPORT_LIMIT,
                        help="largest support handled with rational weights")

    parser = argparse.ArgumentParser(prog="wassmono", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("reproduce", parents=[common], help="recompute the counterexample's numbers")
    rp.add_argument("--corrupt-plan", action="store_true", help=argparse.SUPPRESS)
    sub.add_parser("sweep", parents=[common], help="sqrt(n) T_r(sigma_n, tau_n) over n = 1, 2, 4, ..., n-max")
    sub.add_parser("tanaka-fuzz", parents=[common], help="random checks of the Tanaka and halving inequalities")
    gp = sub.add_parser("gaussian", parents=[common], help="distance of normalized powers to the matched Gaussian")
    gp.add_argument("--measure", help="measure JSON file (default: fair signs)")
    pp = sub.add_parser("pfold", parents=[common], help="p-fold separation family")
    pp.add_argument("--p", type=int, default=3)
    cp = sub.add_parser("check-plan", parents=[common], help="verify a plan file's marginals and cyclic monotonicity")
    cp.add_argument("plan_file")
    cp.add_argument("--max-cycle-len", type=int, default=3, help="0 checks cycles of every length")
    ep = sub.add_parser("plan", parents=[common], help="write the radiation plan sigma_n -> tau_n as JSON")
    ep.add_argument("--n", type=int, default=8)
    return parser


_DEFAULT_N_MAX = {"reproduce": 50, "sweep": 4096, "gaussian": 50, "pfold": 16}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    n_max = args.n_max if args.n_max is not None else _DEFAULT_N_MAX.get(args.command, 50)
    config = RunConfig(command=args.command, n_max=n_max, cost_r=args.cost_r, seed=args.seed,
                       trials=args.trials, output_format=args.output_format, output=args.output,
                       exact_limit=args.exact_limit, p=getattr(args, "p", 3),
                       plan_file=getattr(args, "plan_file", None),
                       max_cycle_len=(getattr(args, "max_cycle_len", 3) or None), n=getattr(args, "n", 8))
    try:
        if config.command == "reproduce":
            factory = _corrupted_plan if args.corrupt_plan else radiation_plan
            rep = cmd_reproduce(config, factory)
            text = rep.render(config.output_format)
            code = EXIT_OK if rep.passed else EXIT_CHECK_FAILED
        elif config.command == "sweep":
            text, code = cmd_sweep(config)
        elif config.command == "tanaka-fuzz":
            text, code = cmd_tanaka_fuzz(config)
        elif config.command == "gaussian":
            text, code = cmd_gaussian(config, args.measure)
        elif config.command == "pfold":
            text, code = cmd_pfold(config)
        elif config.command == "check-plan":
            text, code = cmd_check_plan(config)
        else:
            text, code = cmd_plan(config)
    except serialize.FormatError as exc:
        print(f"wassmono: {config.plan_file or 'input'}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"wassmono: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, ValueError) as exc:
        print(f"wassmono: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.output:
        try:
            Path(config.output).write_text(text)
        except OSError as exc:
            print(f"wassmono: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


def _corrupted_plan(n: int) -> TransportPlan:
    plan = radiation_plan(n)
    src, tgt = plan.index_arrays()
    masses = list(plan.masses)
    masses[0] += 1  # breaks the source marginal at the leftmost atom
    return TransportPlan._raw(plan.source, plan.target, src, tgt, masses, plan.denominator)


if __name__ == "__main__":
    sys.exit(main())
