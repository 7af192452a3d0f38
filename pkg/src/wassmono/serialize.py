"""JSON and CSV formats for measures, plans, sweeps and traces.

Big integers are written as decimal strings.  Decoding errors carry a JSON
path (``$.moves[3].mass.den``) or the line/column of the syntax error.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Union

from .counterexample import SweepResult
from .gaussian import MonotoneTrace
from .measure import LatticeMeasure
from .surd import Surd
from .transport import TransportPlan


class FormatError(ValueError):
    """Malformed input document; the message starts with the offending location."""


def decimal(x: Union[Fraction, float, int, None]) -> str:
    """12 significant digits, the fixed rendering for tables."""
    if x is None:
        return ""
    return format(float(x), ".12g")


def rational_json(x: Union[Fraction, int]) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def value_json(x: Union[Fraction, float, None]) -> Any:
    """Exact values as ``{num, den, decimal}``, floats as plain numbers."""
    if x is None:
        return None
    if isinstance(x, (Fraction, int)):
        return {**rational_json(x), "decimal": decimal(x)}
    return float(x)


def surd_json(s: Surd) -> dict:
    return {**rational_json(s.coef), "sqrt_div": s.root}


def measure_to_json(mu: LatticeMeasure) -> dict:
    doc = {
        "step": surd_json(mu.step),
        "offset": surd_json(mu.offset),
        "points": list(mu.points),
        "weights": [rational_json(Fraction(w)) for w in mu.weights],
    }
    if not mu.exact:
        doc["exact"] = False
    return doc


def plan_moves_to_json(plan: TransportPlan) -> list:
    return [{"from": i, "to": j, "mass": rational_json(Fraction(m))} for i, j, m in plan.moves]


def plan_to_json(plan: TransportPlan) -> dict:
    """Self-contained plan document: both measures plus the move list."""
    doc = {
        "source": measure_to_json(plan.source),
        "target": measure_to_json(plan.target),
        "moves": plan_moves_to_json(plan),
    }
    if not plan.exact:
        doc["exact"] = False
    return doc


# ----------------------------------------------------------------------
# decoding

def _get(obj, key, path):
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected an object")
    if key not in obj:
        raise FormatError(f"{path}: missing key {key!r}")
    return obj[key]


def _int_str(obj, path) -> int:
    if isinstance(obj, bool):
        raise FormatError(f"{path}: expected a decimal integer string")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        try:
            return int(obj.strip(), 10)
        except ValueError:
            pass
    raise FormatError(f"{path}: expected a decimal integer string, got {obj!r}")


def _rational(obj, path) -> Fraction:
    num = _int_str(_get(obj, "num", path), f"{path}.num")
    den = _int_str(_get(obj, "den", path), f"{path}.den")
    if den <= 0:
        raise FormatError(f"{path}.den: denominator must be positive")
    return Fraction(num, den)


def _surd(obj, path) -> Surd:
    q = _rational(obj, path)
    root = obj.get("sqrt_div", 1)
    if isinstance(root, bool) or not isinstance(root, int) or root < 1:
        raise FormatError(f"{path}.sqrt_div: expected a positive integer")
    return Surd(q, root)


def measure_from_json(doc, path: str = "$") -> LatticeMeasure:
    step = _surd(_get(doc, "step", path), f"{path}.step")
    offset = _surd(doc.get("offset", {"num": "0", "den": "1"}), f"{path}.offset")
    points = _get(doc, "points", path)
    weights = _get(doc, "weights", path)
    if not isinstance(points, list) or not isinstance(weights, list):
        raise FormatError(f"{path}: points and weights must be lists")
    pts = [_int_str(p, f"{path}.points[{k}]") for k, p in enumerate(points)]
    ws = [_rational(w, f"{path}.weights[{k}]") for k, w in enumerate(weights)]
    if doc.get("exact", True) is False:
        ws = [float(w) for w in ws]
    try:
        return LatticeMeasure(pts, ws, step=step, offset=offset)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def plan_from_json(doc, path: str = "$") -> TransportPlan:
    source = measure_from_json(_get(doc, "source", path), f"{path}.source")
    target = measure_from_json(_get(doc, "target", path), f"{path}.target")
    moves = _get(doc, "moves", path)
    if not isinstance(moves, list):
        raise FormatError(f"{path}.moves: expected a list")
    out = []
    for k, mv in enumerate(moves):
        p = f"{path}.moves[{k}]"
        i = _int_str(_get(mv, "from", p), f"{p}.from")
        j = _int_str(_get(mv, "to", p), f"{p}.to")
        m = _rational(_get(mv, "mass", p), f"{p}.mass")
        out.append((i, j, float(m) if doc.get("exact", True) is False else m))
    try:
        return TransportPlan(source, target, out)
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}.moves: {exc}") from None


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# ----------------------------------------------------------------------
# tables

SWEEP_HEADER = ["n", "cost", "sqrt_n_scaled", "lower", "upper", "exact_flag"]
TRACE_HEADER = ["n", "distance", "delta"]


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def sweep_to_csv(result: SweepResult) -> str:
    rows = [[r.n, decimal(r.cost), decimal(r.sqrt_n_scaled), decimal(r.lower), decimal(r.upper),
             "true" if r.exact else "false"] for r in result.rows]
    return _csv(rows, SWEEP_HEADER)


def sweep_to_json(result: SweepResult) -> dict:
    rows = []
    for r in result.rows:
        row = {
            "n": r.n,
            "cost": value_json(r.cost),
            "sqrt_n_scaled": None if r.sqrt_n_scaled is None else decimal(r.sqrt_n_scaled),
            "lower": value_json(r.lower),
            "upper": value_json(r.upper),
            "exact_flag": r.exact,
        }
        if r.error is not None:
            row["error"] = r.error
        rows.append(row)
    limit = result.limit_estimate
    return {"cost_r": _json_number(result.cost.exponent), "rows": rows,
            "limit_estimate": None if limit is None else decimal(limit)}


def _json_number(x):
    return x if isinstance(x, int) else float(x)


def trace_to_csv(trace: MonotoneTrace) -> str:
    rows = [[n, decimal(d), decimal(delta)] for (n, d), delta in zip(trace.entries, trace.deltas)]
    return _csv(rows, TRACE_HEADER)


def trace_to_json(trace: MonotoneTrace) -> dict:
    return {
        "entries": [{"n": n, "distance": decimal(d)} for n, d in trace.entries],
        "nonincreasing": trace.nonincreasing,
        "strictly_decreasing": trace.strictly_decreasing,
        "first_increase_at": trace.first_increase_at,
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
