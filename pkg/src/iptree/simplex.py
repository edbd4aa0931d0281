"""Two-phase tableau simplex with Bland's rule, in exact or float arithmetic.

Solves

    maximize  c . x   subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.

Pass Fractions/ints everywhere for an exact solve; any float switches to
float arithmetic with ``tol`` as the zero threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._numeric import all_exact

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list | None = None
    value: object = None


class _Tableau:
    def __init__(self, rows, rhs, basis, tol):
        self.rows = rows  # list of coefficient lists
        self.rhs = rhs
        self.basis = basis
        self.tol = tol

    def pivot(self, r, j):
        rows, rhs = self.rows, self.rhs
        piv = rows[r][j]
        rows[r] = [a / piv for a in rows[r]]
        rhs[r] = rhs[r] / piv
        pr = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][j]
                if f != 0:
                    rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
                    rhs[i] = rhs[i] - f * rhs[r]
        self.basis[r] = j

    def reduced_costs(self, cost):
        # reduced cost of column j: c_j - sum_i c_B(i) a_ij  (maximization)
        cb = [cost[b] for b in self.basis]
        n = len(cost)
        out = list(cost)
        for i, row in enumerate(self.rows):
            if cb[i] != 0:
                c = cb[i]
                for j in range(n):
                    out[j] -= c * row[j]
        return out

    def optimize(self, cost, allowed):
        """Primal simplex with Bland's rule on columns in ``allowed``."""
        tol = self.tol
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in allowed if red[j] > tol), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > tol:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key[0] < best[0][0] - tol or (
                        abs(key[0] - best[0][0]) <= tol and key[1] < best[0][1]
                    ):
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    tol: float = 1e-9,
) -> LPResult:
    n = len(c)
    flat = list(c) + [a for r in A_ub for a in r] + list(b_ub) + [a for r in A_eq for a in r] + list(b_eq)
    exact = all_exact(flat)
    conv = Fraction if exact else float
    tol = 0 if exact else tol
    zero, one = conv(0), conv(1)

    ub = [([conv(a) for a in row], conv(b)) for row, b in zip(A_ub, b_ub)]
    eq = [([conv(a) for a in row], conv(b)) for row, b in zip(A_eq, b_eq)]
    m = len(ub) + len(eq)

    # column layout: originals | one slack/surplus per ub row | artificials
    n_slack = len(ub)
    rows, rhs, basis, artificial_rows = [], [], [], []
    for k, (row, b) in enumerate(ub):
        slack = [zero] * n_slack
        if b >= 0:
            slack[k] = one
            rows.append(row + slack)
            rhs.append(b)
            basis.append(n + k)
        else:
            slack[k] = -one
            rows.append([-a for a in row] + slack)
            rhs.append(-b)
            basis.append(None)
            artificial_rows.append(len(rows) - 1)
    for row, b in eq:
        if b >= 0:
            rows.append(row + [zero] * n_slack)
            rhs.append(b)
        else:
            rows.append([-a for a in row] + [zero] * n_slack)
            rhs.append(-b)
        basis.append(None)
        artificial_rows.append(len(rows) - 1)

    n_art = len(artificial_rows)
    width = n + n_slack + n_art
    for i in range(m):
        rows[i] = rows[i] + [zero] * n_art
    for k, i in enumerate(artificial_rows):
        rows[i][n + n_slack + k] = one
        basis[i] = n + n_slack + k

    tab = _Tableau(rows, rhs, basis, tol)

    if n_art:
        phase1 = [zero] * (n + n_slack) + [-one] * n_art
        tab.optimize(phase1, range(width))
        infeas = sum((tab.rhs[i] for i, b in enumerate(tab.basis) if b >= n + n_slack), zero)
        if infeas > tol:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis where possible
        for i, b in enumerate(tab.basis):
            if b >= n + n_slack:
                j = next((j for j in range(n + n_slack) if abs(tab.rows[i][j]) > tol), None)
                if j is not None:
                    tab.pivot(i, j)
        keep = [i for i, b in enumerate(tab.basis) if b < n + n_slack]
        tab.rows = [tab.rows[i][: n + n_slack] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]

    cost = [conv(a) for a in c] + [zero] * n_slack
    status = tab.optimize(cost, range(n + n_slack))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [zero] * (n + n_slack)
    for i, b in enumerate(tab.basis):
        x[b] = tab.rhs[i]
    x = x[:n]
    value = sum((ci * xi for ci, xi in zip(cost, x)), zero)
    return LPResult(OPTIMAL, x, value)
