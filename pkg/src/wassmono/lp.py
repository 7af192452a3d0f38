"""Transportation-simplex oracle for discrete optimal transport.

Solves ``min sum C[i][j] * pi[i][j]`` over couplings of two lattice measures
for an arbitrary cost matrix.  With rational costs and exact measures every
quantity stays integral (masses over the common denominator, costs over
theirs), so the optimum is exact.  Bland's rule on entering and leaving cells
rules out cycling on degenerate pivots.

Only meant for small instances: it is the independent check on the 1D
monotone coupling and the solver for concave costs.
"""
from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from numbers import Rational

import numpy as np

from .exceptions import UnsupportedInstanceError
from .measure import LatticeMeasure
from .transport import LP_CELL_LIMIT, OTResult, TransportPlan

_FLOAT_TOL = 1e-12


def _northwest_corner(a, b, tol):
    m, n = len(a), len(b)
    ra, rb = list(a), list(b)
    basis = {}
    i = j = 0
    while True:
        q = ra[i] if ra[i] < rb[j] else rb[j]
        basis[(i, j)] = q
        ra[i] -= q
        rb[j] -= q
        if i == m - 1 and j == n - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1 or ra[i] <= tol:
            i += 1
        else:
            j += 1
    return basis


def _potentials(basis, m, n, C):
    adj_r = [[] for _ in range(m)]
    adj_c = [[] for _ in range(n)]
    for i, j in basis:
        adj_r[i].append(j)
        adj_c[j].append(i)
    u = [None] * m
    v = [None] * n
    u[0] = 0
    todo = deque([("r", 0)])
    while todo:
        kind, k = todo.popleft()
        if kind == "r":
            for j in adj_r[k]:
                if v[j] is None:
                    v[j] = C[k][j] - u[k]
                    todo.append(("c", j))
        else:
            for i in adj_c[k]:
                if u[i] is None:
                    u[i] = C[i][k] - v[k]
                    todo.append(("r", i))
    return u, v, adj_r, adj_c


def _tree_path(adj_r, adj_c, i0, j0):
    """Cells on the tree path from row ``i0`` to column ``j0``, in order."""
    start, goal = ("r", i0), ("c", j0)
    parent = {start: None}
    todo = deque([start])
    while todo:
        node = todo.popleft()
        if node == goal:
            break
        kind, k = node
        nbrs = [("c", j) for j in adj_r[k]] if kind == "r" else [("r", i) for i in adj_c[k]]
        for nb in nbrs:
            if nb not in parent:
                parent[nb] = node
                todo.append(nb)
    nodes = [goal]
    while parent[nodes[-1]] is not None:
        nodes.append(parent[nodes[-1]])
    nodes.reverse()
    cells = []
    for x, y in zip(nodes, nodes[1:]):
        r = x[1] if x[0] == "r" else y[1]
        c = x[1] if x[0] == "c" else y[1]
        cells.append((r, c))
    return cells


def solve_transportation(a, b, C, tol=0):
    """Optimal basic flow for supplies ``a``, demands ``b`` and costs ``C``.

    ``a``, ``b`` and ``C`` must be all ints (exact) or all floats; ``tol`` is
    the negativity threshold for reduced costs and mass comparisons.
    Returns ``{(i, j): flow}`` including degenerate zero cells.
    """
    m, n = len(a), len(b)
    basis = _northwest_corner(a, b, tol)
    Carr = np.array(C, dtype=object if tol == 0 else float)
    while True:
        u, v, adj_r, adj_c = _potentials(basis, m, n, C)
        uu = np.array(u, dtype=Carr.dtype)[:, None]
        vv = np.array(v, dtype=Carr.dtype)[None, :]
        reduced = Carr - uu - vv
        neg = reduced < -tol
        for cell in basis:
            neg[cell] = False
        if not neg.any():
            return basis
        flat = int(np.argmax(neg.ravel()))
        ei, ej = divmod(flat, n)
        path = _tree_path(adj_r, adj_c, ei, ej)
        minus = path[0::2]
        plus = path[1::2]
        theta = min(basis[c] for c in minus)
        leaving = min(c for c in minus if basis[c] - theta <= tol)
        for c in minus:
            basis[c] -= theta
        for c in plus:
            basis[c] += theta
        del basis[leaving]
        basis[(ei, ej)] = theta


def _is_exact_entry(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


def lp_oracle(mu: LatticeMeasure, nu: LatticeMeasure, cost_matrix) -> OTResult:
    """Exact optimum of the transportation LP between ``mu`` and ``nu``.

    ``cost_matrix[i][j]`` is the cost of moving atom ``i`` of ``mu`` to atom
    ``j`` of ``nu``.  The result is exact (Fraction cost, exact plan) when the
    measures are exact and every cost entry is an int or Fraction.
    """
    m, n = len(mu), len(nu)
    if m * n > LP_CELL_LIMIT:
        raise UnsupportedInstanceError(f"{m} x {n} instance exceeds {LP_CELL_LIMIT} cells")
    rows = [list(r) for r in cost_matrix]
    if len(rows) != m or any(len(r) != n for r in rows):
        raise ValueError(f"cost matrix must be {m} x {n}")
    exact = mu.exact and nu.exact and all(_is_exact_entry(x) for r in rows for x in r)
    if exact:
        den = math.lcm(mu.denominator, nu.denominator)
        a = [w * (den // mu.denominator) for w in mu.masses]
        b = [w * (den // nu.denominator) for w in nu.masses]
        fr = [[Fraction(x) for x in r] for r in rows]
        cden = math.lcm(*(x.denominator for r in fr for x in r))
        C = [[int(x * cden) for x in r] for r in fr]
        basis = solve_transportation(a, b, C, 0)
        flows = {c: f for c, f in basis.items() if f > 0}
        total = sum(f * C[i][j] for (i, j), f in flows.items())
        cost = Fraction(total, den * cden)
        cells = sorted(flows)
        plan = TransportPlan._raw(mu, nu, [i for i, _ in cells], [j for _, j in cells],
                                  [flows[c] for c in cells], den)
        return OTResult(cost, plan, True)
    a = list(mu.to_float().masses)
    b = list(nu.to_float().masses)
    C = [[float(x) for x in r] for r in rows]
    basis = solve_transportation(a, b, C, _FLOAT_TOL)
    flows = {c: f for c, f in basis.items() if f > _FLOAT_TOL}
    cells = sorted(flows)
    cost = math.fsum(flows[c] * C[c[0]][c[1]] for c in cells)
    plan = TransportPlan._raw(mu, nu, [i for i, _ in cells], [j for _, j in cells],
                              [flows[c] for c in cells], None)
    return OTResult(cost, plan, False)
