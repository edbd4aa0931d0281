"""A weak law of large numbers for imprecise probability trees, and a prequential score.

Forecaster commits, in every situation s between t and a cut U, to buying
a gamble h_s on the next move for the price m_s. The average gain G_U along
the path from t to U is then unlikely to fall much below zero:

    lower P({G_U >= -eps} | t) >= 1 - exp(-N_U eps^2 / (4 B^2))

with N_U the shortest distance from t to U and B a bound on the ranges of
the h_s. The bound is certified by an explicit selection whose gamble
process hedges the complementary event at price exp(-N_U eps^2 / (4 B^2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ._numeric import FLOAT_TOL, all_exact, check_real, is_exact
from .errors import EpsilonOutOfRange, InvalidPlan, NonPositiveParameter, RealizedNotInHorizon
from .gambles import Gamble, embed_from_cut
from .inference import ImpreciseProbabilityTree, Selection, predictive_lower
from .local_models import local_lower
from .tree import Cut, distance, strictly_before_cut, validate_cut


@dataclass
class CommitmentPlan:
    """Prices m_s at which h_s is bought, for every s from ``base`` up to (not including) ``horizon``.

    ``B`` is optional; when omitted the largest range of the h_s is used.
    """

    base: str
    horizon: Cut
    commitments: Mapping = field(default_factory=dict)  # s -> (h_s, m_s)
    B: object = None


@dataclass
class _Checked:
    plan: CommitmentPlan
    B: object
    n: dict  # u -> n_U(u)
    N: int


def _validate(ipt: ImpreciseProbabilityTree, plan: CommitmentPlan) -> _Checked:
    tree = ipt.tree
    try:
        U = validate_cut(tree, plan.base, plan.horizon.members)
    except Exception as exc:
        raise InvalidPlan(f"horizon is not a cut of {plan.base!r}: {exc}") from None
    if U.base != plan.horizon.base:
        raise InvalidPlan(f"horizon is based at {plan.horizon.base!r}, plan at {plan.base!r}")
    if plan.base in U.members:
        raise InvalidPlan("horizon must not contain the base situation (n_U would be 0)")

    needed = [s for s in tree.subtree(plan.base) if strictly_before_cut(tree, s, U)]
    missing = [s for s in needed if s not in plan.commitments]
    extra = [s for s in plan.commitments if s not in set(needed)]
    if missing:
        raise InvalidPlan(f"no commitment at {missing}")
    if extra:
        raise InvalidPlan(f"commitments given outside the segment before the horizon: {extra}")

    widest = 0
    for s in needed:
        h, m = plan.commitments[s]
        check_real(m, f"price at {s!r}")
        if set(h.carrier) != set(tree.children(s)):
            raise InvalidPlan(f"gamble at {s!r} is not on its children {list(tree.children(s))}")
        tol = 0 if (h.is_exact and is_exact(m)) else FLOAT_TOL
        low = local_lower(ipt.locals[s], h)
        if m > low + tol:
            raise InvalidPlan(f"price {m} at {s!r} exceeds the local lower prevision {low} of its gamble")
        if not h.min() - tol <= m <= h.max() + tol:
            raise InvalidPlan(f"price {m} at {s!r} lies outside [{h.min()}, {h.max()}]")
        widest = max(widest, h.max() - h.min())

    if plan.B is None:
        B = widest if widest > 0 else 1
    else:
        B = check_real(plan.B, "B")
        if B <= 0:
            raise InvalidPlan(f"B must be positive, got {B}")
        tol = 0 if (is_exact(B) and is_exact(widest)) else FLOAT_TOL
        if widest > B + tol:
            raise InvalidPlan(f"B = {B} is smaller than the widest gamble range {widest}")
    n = {u: distance(tree, plan.base, u) for u in U.members}
    return _Checked(plan, B, n, min(n.values()))


def validate_plan(ipt: ImpreciseProbabilityTree, plan: CommitmentPlan):
    """Raise InvalidPlan unless the plan is usable; return (B, N_U)."""
    c = _validate(ipt, plan)
    return c.B, c.N


def gain_gamble(ipt: ImpreciseProbabilityTree, plan: CommitmentPlan) -> Gamble:
    """Average gain G_U(u) = (1/n_U(u)) sum over t <= s < u of (h_s(u) - m_s), as a gamble on U."""
    c = _validate(ipt, plan)
    tree = ipt.tree
    out = {}
    for u in plan.horizon.members:
        total = 0
        for s in tree.path_to(u)[tree.depth(plan.base) : -1]:
            h, m = plan.commitments[s]
            total += h[tree.child_towards(s, u)] - m
        n = c.n[u]
        out[u] = Fraction(total) / n if is_exact(total) else total / n
    return Gamble(out)


def wlln_bound(N, eps, B) -> float:
    for name, v in (("N_U", N), ("epsilon", eps), ("B", B)):
        check_real(v, name)
        if v <= 0:
            raise NonPositiveParameter(f"{name} must be positive, got {v}")
    return -math.expm1(-N * float(eps) ** 2 / (4 * float(B) ** 2))


@dataclass
class WLLNReport:
    exact_lower: object
    bound: float
    holds: bool
    N: int
    B: object
    oracle_lower: object = None


def event_not_below(ipt, plan: CommitmentPlan, eps) -> Gamble:
    """Indicator of {G_U >= -eps} on the paths through the plan's base."""
    G = gain_gamble(ipt, plan)
    ind = Gamble({u: (1 if G[u] >= -eps else 0) for u in G})
    return embed_from_cut(ipt.tree, ind, plan.horizon)


def verify_wlln(ipt: ImpreciseProbabilityTree, plan: CommitmentPlan, eps, oracle: bool = False, cap=None) -> WLLNReport:
    """Exact lower probability of {G_U >= -eps} next to the bound."""
    B, N = validate_plan(ipt, plan)
    bound = wlln_bound(N, eps, B)
    ind = event_not_below(ipt, plan, eps)
    low = predictive_lower(ipt, ind, plan.base)
    report = WLLNReport(low, bound, low >= bound - FLOAT_TOL, N, B)
    if oracle:
        from .oracle import credal_enumeration_lower

        report.oracle_lower = credal_enumeration_lower(ipt, ind, plan.base, cap).value
    return report


def wlln_witness_selection(ipt: ImpreciseProbabilityTree, plan: CommitmentPlan, eps):
    """The hedging selection sigma(s) = lambda_s (h_s - m_s) and its price alpha.

    With delta = eps / (2 B^2) and alpha = exp(-N_U eps^2 / (4 B^2)),
    lambda_s = alpha delta prod over t <= v < s of (1 + delta (m_v - h_v(s))).
    Then alpha - G^sigma >= I_{G_U < -eps} on every path.
    """
    c = _validate(ipt, plan)
    B, N = c.B, c.N
    check_real(eps, "epsilon")
    if eps <= 0:
        raise NonPositiveParameter(f"epsilon must be positive, got {eps}")
    if eps >= B:
        raise EpsilonOutOfRange(f"epsilon = {eps} is not below B = {B}; the event is sure and needs no witness")
    tree = ipt.tree
    delta = Fraction(eps) / (2 * B * B) if all_exact([eps, B]) else eps / (2 * B * B)
    alpha = math.exp(-N * float(eps) ** 2 / (4 * float(B) ** 2))

    lam = {plan.base: alpha * delta}
    choices = {}
    for s in tree.subtree(plan.base):
        if s not in plan.commitments:
            continue
        h, m = plan.commitments[s]
        choices[s] = (h - m) * lam[s]
        for w in tree.children(s):
            factor = 1 + delta * (m - h[w])
            if not factor > 0:
                raise ArithmeticError(f"non-positive factor {factor} at {s!r} -> {w!r}")
            lam[w] = lam[s] * factor
    return Selection(plan.base, choices), alpha


def witness_slack(ipt: ImpreciseProbabilityTree, plan: CommitmentPlan, eps) -> float:
    """min over paths of alpha - G^sigma - I_{G_U < -eps}; non-negative when the hedge works."""
    from .oracle import gamble_process

    sigma, alpha = wlln_witness_selection(ipt, plan, eps)
    _, G = gamble_process(ipt, sigma)
    ind = event_not_below(ipt, plan, eps)
    return min(alpha - G[w] - (1 - ind[w]) for w in G)


def score_function(N, x) -> float:
    """S_N(x) = exp(-N x^2 / 4)."""
    return math.exp(-N * float(x) ** 2 / 4)


def prequential_score(ipt: ImpreciseProbabilityTree, plan: CommitmentPlan, realized) -> float:
    """Upper bound S_{N_U}(G_U(u_o) / B) on the upper probability of reaching u_o.

    Only commitments on the path to u_o enter, together with N_U and B.
    Returns 1 when the realized average gain is not negative.
    """
    if realized not in plan.horizon.members:
        raise RealizedNotInHorizon(f"{realized!r} is not in the horizon {list(plan.horizon.members)}")
    B, N = validate_plan(ipt, plan)
    g = gain_gamble(ipt, plan)[realized]
    if g >= 0:
        return 1.0
    return score_function(N, g / B)


def random_plan(rng, ipt: ImpreciseProbabilityTree, t=None, exact: bool = False, supply_B: bool = False) -> CommitmentPlan:
    """A valid random plan at ``t`` (a non-terminal situation; default the root).

    Each price is drawn between inf h_s and the local lower prevision of h_s.
    """
    from .oracle import random_gamble, random_value

    tree = ipt.tree
    t = tree.root if t is None else t
    members = []
    stack = list(tree.children(t))
    while stack:
        s = stack.pop()
        if not tree.children(s) or rng.random() < 0.4:
            members.append(s)
        else:
            stack.extend(tree.children(s))
    U = validate_cut(tree, t, members)
    commitments = {}
    for s in tree.subtree(t):
        if strictly_before_cut(tree, s, U):
            h = random_gamble(rng, tree.children(s), exact)
            lo, hi = h.min(), local_lower(ipt.locals[s], h)
            u = random_value(rng, exact, 0, 1)
            commitments[s] = (h, lo + u * (hi - lo))
    B = None
    if supply_B:
        B = max(h.max() - h.min() for h, _ in commitments.values()) or 1
    return CommitmentPlan(t, U, commitments, B)
