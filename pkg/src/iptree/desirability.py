"""Finite assessments of really desirable gambles on a flat possibility space.

The natural extension of an assessment {g_1, ..., g_m} is the cone of all
gambles dominating some non-negative combination of the g_i. Membership,
partial-loss checks and conditional lower previsions all reduce to small
linear programs, solved by :mod:`iptree.simplex` (exactly when every
number involved is rational).

Suprema are reported as LP optima, i.e. for the closure of the cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CarrierMismatch, EmptyConditioningEvent, NotAPartition
from .gambles import Gamble
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, linprog


@dataclass(frozen=True)
class Assessment:
    space: tuple
    gambles: tuple

    def __init__(self, space: Iterable, gambles: Iterable[Gamble]):
        space = tuple(space)
        gambles = tuple(gambles)
        for g in gambles:
            if set(g.carrier) != set(space):
                raise CarrierMismatch(f"assessment gamble {g!r} is not defined on {space}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "gambles", gambles)

    def _check(self, f: Gamble):
        if set(f.carrier) != set(self.space):
            raise CarrierMismatch(f"gamble carrier {f.carrier} differs from the space {self.space}")


def natural_extension_contains(a: Assessment, f: Gamble) -> bool:
    """Is there lambda >= 0 with f >= sum_i lambda_i g_i pointwise?"""
    a._check(f)
    m = len(a.gambles)
    if m == 0:
        return all(f[w] >= 0 for w in a.space)
    A = [[g[w] for g in a.gambles] for w in a.space]
    b = [f[w] for w in a.space]
    res = linprog([0] * m, A_ub=A, b_ub=b)
    return res.status != INFEASIBLE


def avoids_partial_loss(a: Assessment) -> bool:
    """True iff no gamble f <= 0 with f != 0 lies in the natural extension.

    Such an f exists iff some lambda >= 0 makes sum_i lambda_i g_i <= 0
    everywhere and < 0 somewhere; we minimize the total of that combination
    over the space, normalized so the optimum is 0 or -1.
    """
    m = len(a.gambles)
    if m == 0:
        return True
    rows = [[g[w] for g in a.gambles] for w in a.space]
    total = [sum(r[i] for r in rows) for i in range(m)]
    # minimize total.lambda  <=>  maximize -total.lambda
    res = linprog(
        [-t for t in total],
        A_ub=rows + [[-t for t in total]],
        b_ub=[0] * len(rows) + [1],
    )
    return res.status == OPTIMAL and res.value <= 0


def conditional_lower(a: Assessment, f: Gamble, B: Iterable):
    """sup{alpha : I_B (f - alpha) is in the natural extension}.

    Returns ``-inf`` when no price is acceptable and ``inf`` when every
    price is (the assessment then incurs partial loss on B).
    """
    a._check(f)
    B = set(B)
    if not B:
        raise EmptyConditioningEvent("cannot condition on the empty event")
    if not B <= set(a.space):
        raise CarrierMismatch(f"conditioning event {sorted(map(str, B))} is not a subset of the space")
    m = len(a.gambles)
    # variables: alpha+, alpha-, lambda_1..lambda_m
    A, b = [], []
    for w in a.space:
        gs = [g[w] for g in a.gambles]
        if w in B:
            A.append([1, -1] + gs)
            b.append(f[w])
        else:
            A.append([0, 0] + gs)
            b.append(0)
    res = linprog([1, -1] + [0] * m, A_ub=A, b_ub=b)
    if res.status == UNBOUNDED:
        return math.inf
    if res.status == INFEASIBLE:
        return -math.inf
    return res.value


def conditional_upper(a: Assessment, f: Gamble, B: Iterable):
    return -conditional_lower(a, -f, B)


def lower_prevision(a: Assessment, f: Gamble):
    """Unconditional lower prevision (conditioning on the whole space)."""
    return conditional_lower(a, f, a.space)


def conditional_lower_on_partition(a: Assessment, f: Gamble, partition: Sequence[Iterable]) -> Gamble:
    """The gamble equal to P(f|B) on every block B of the partition."""
    blocks = [frozenset(B) for B in partition]
    seen: set = set()
    for B in blocks:
        if not B:
            raise NotAPartition("partition has an empty block")
        if B & seen:
            raise NotAPartition("partition blocks overlap")
        seen |= B
    if seen != set(a.space):
        raise NotAPartition("partition blocks do not cover the space")
    out = {}
    for B in blocks:
        v = conditional_lower(a, f, B)
        for w in B:
            out[w] = v
    return Gamble({w: out[w] for w in a.space})
