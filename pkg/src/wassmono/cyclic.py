"""Cyclic-monotonicity certificates for transport plans.

For the support pairs ``(x_i, y_i)`` of a plan, put an edge ``i -> j`` of
weight ``c(x_i, y_j) - c(x_i, y_i)``.  A cycle ``i_1 -> ... -> i_L -> i_1`` of
negative weight is exactly a violation
``sum c(x_k, y_k) > sum c(x_k, y_{k+1})``.  Cycles of length at most ``L`` are
found with ``L - 1`` min-plus matrix products; unbounded length is a negative
cycle search (Bellman-Ford).  Both are polynomial in the number of pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .transport import TransportPlan, _as_cost, _coords

#: Default cap on ``pairs**3 * (max_cycle_len - 1)`` elementary operations.
DEFAULT_BUDGET = 2 * 10**10

_CHUNK_ELEMS = 4_000_000


@dataclass(frozen=True)
class CycleVerdict:
    """Outcome of :func:`cyclic_monotonicity_check`.

    ``cycle`` lists move indices ``i_1, ..., i_L`` of a violating cycle (the
    cheaper reassignment sends ``x_{i_k}`` to ``y_{i_{k+1}}``).  ``complete``
    is False when the budget forced a shorter check; ``checked_len`` is the
    longest cycle length actually covered (None means all lengths).
    """

    ok: bool
    cycle: Optional[tuple[int, ...]]
    excess: Optional[float]
    complete: bool
    checked_len: Optional[int]
    budget: Optional[int]

    def __bool__(self) -> bool:
        return self.ok


def pair_cost_matrix(plan: TransportPlan, cost=None):
    """``K[i, j] = c(x_i, y_j)`` over the plan's pairs, up to a positive factor.

    Returns ``(K, tol)``: an int64 matrix with ``tol == 0`` when the lattice
    permits exact integer costs, otherwise floats with a rounding tolerance.
    """
    cost = _as_cost(cost)
    src, tgt = plan.index_arrays()
    coords = _coords(plan.source, plan.target)
    r = cost.exponent
    if coords is not None:
        xs = [coords.xs[i] for i in src]
        ys = [coords.ys[j] for j in tgt]
        span = (max(xs + ys) - min(xs + ys)) if xs else 0
        if cost.is_integer and (span**r) * max(len(src), 1) < 2**62:
            d = np.abs(np.asarray(xs, dtype=np.int64)[:, None] - np.asarray(ys, dtype=np.int64)[None, :])
            return d**r, 0
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
    else:
        x = plan.source.float_values()[list(src)]
        y = plan.target.float_values()[list(tgt)]
    K = np.abs(x[:, None] - y[None, :]) ** float(r)
    tol = 1e-12 * max(float(K.max()) if K.size else 0.0, 1.0)
    return K, tol


def _minplus(D, A):
    P = A.shape[0]
    out = np.empty_like(D)
    arg = np.empty((P, P), dtype=np.int64)
    chunk = max(1, _CHUNK_ELEMS // max(P * P, 1))
    for s in range(0, P, chunk):
        t = D[s:s + chunk, :, None] + A[None, :, :]
        a = t.argmin(axis=1)
        arg[s:s + chunk] = a
        out[s:s + chunk] = np.take_along_axis(t, a[:, None, :], axis=1)[:, 0, :]
    return out, arg


def _simple_cycles(walk):
    """Split a closed walk (first == last) into simple cycles."""
    stack, cycles = [], []
    for v in walk[:-1]:
        if v in stack:
            k = stack.index(v)
            cycles.append(stack[k:])
            stack = stack[:k]
        stack.append(v)
    if stack:
        cycles.append(stack)
    return [c for c in cycles if len(c) >= 2]


def _cycle_weight(A, cyc):
    return sum(A[cyc[k], cyc[(k + 1) % len(cyc)]] for k in range(len(cyc)))


def _pick_negative(A, walk, tol):
    best = None
    for cyc in _simple_cycles(walk):
        w = _cycle_weight(A, cyc)
        if w < -tol and (best is None or w < best[1]):
            best = (tuple(int(v) for v in cyc), w)
    return best


def _bounded(A, L, tol):
    D = A
    args = []
    for level in range(2, L + 1):
        D, arg = _minplus(D, A)
        args.append(arg)
        diag = np.diagonal(D)
        bad = np.nonzero(diag < -tol)[0]
        if bad.size:
            i = int(bad[np.argmin(diag[bad])])
            walk = [i]
            for arg_l in reversed(args):
                walk.append(int(arg_l[i, walk[-1]]))
            walk.append(i)
            walk.reverse()
            # drop self-loops, which carry weight 0
            walk = [v for k, v in enumerate(walk) if k == 0 or v != walk[k - 1]]
            return _pick_negative(A, walk, tol)
    return None


def _unbounded(A, tol):
    P = A.shape[0]
    dist = np.zeros(P, dtype=A.dtype)
    pred = np.full(P, -1, dtype=np.int64)
    last = None
    for _ in range(P):
        cand = dist[:, None] + A
        new = cand.min(axis=0)
        arg = cand.argmin(axis=0)
        improve = new < dist - tol
        if not improve.any():
            return None
        dist = np.where(improve, new, dist)
        pred = np.where(improve, arg, pred)
        last = int(np.nonzero(improve)[0][0])
    v = last
    for _ in range(P):
        v = int(pred[v])
    cyc = [v]
    u = int(pred[v])
    while u != v:
        cyc.append(u)
        u = int(pred[u])
    cyc.reverse()
    w = _cycle_weight(A, cyc)
    return (tuple(cyc), w) if w < -tol else None


def cyclic_monotonicity_check(plan: TransportPlan, cost=None, max_cycle_len: Optional[int] = 3,
                              budget: int = DEFAULT_BUDGET) -> CycleVerdict:
    """Check ``sum c(x_k, y_k) <= sum c(x_k, y_{k+1})`` over cycles of the plan's pairs.

    ``max_cycle_len=None`` checks cycles of every length, i.e. full cyclic
    monotonicity.  When ``pairs**3 * (max_cycle_len - 1)`` exceeds ``budget``
    only 2-cycles are checked and the verdict is marked incomplete.
    """
    if max_cycle_len is not None and max_cycle_len < 2:
        raise ValueError("max_cycle_len must be at least 2")
    K, tol = pair_cost_matrix(plan, cost)
    P = K.shape[0]
    A = K - np.diagonal(K)[:, None]
    work = P**3 * ((max_cycle_len - 1) if max_cycle_len is not None else 1)
    if work > budget:
        found = _bounded(A, 2, tol) if P * P <= budget else None
        return _verdict(found, complete=False, checked_len=2, budget=budget, tol=tol)
    if max_cycle_len is None:
        found = _unbounded(A, tol)
    else:
        found = _bounded(A, max_cycle_len, tol)
    return _verdict(found, complete=True, checked_len=max_cycle_len, budget=None, tol=tol)


def _verdict(found, complete, checked_len, budget, tol):
    if found is None:
        return CycleVerdict(True, None, None, complete, checked_len, budget)
    cyc, w = found
    return CycleVerdict(False, cyc, float(-w), complete, checked_len, budget)
