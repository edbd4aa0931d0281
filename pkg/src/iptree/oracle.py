"""Brute-force checks that share no code path with the backwards recursion.

The credal oracle picks one extreme point of every local credal set, which
yields an ordinary probability tree, and takes the minimum expectation over
all such picks. Its cost is the product of the vertex counts, so it is
guarded by a cap (``IPTREE_ORACLE_CAP`` overrides the default of 2**22).

The module also builds gamble processes for arbitrary selections, called-off
selections, the cut decomposition of a gamble process and the
no-partial-loss check. Seeded random generators for trees, models, gambles,
selections and cuts live here too.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ._numeric import FLOAT_TOL, all_exact, close, is_exact
from .errors import CarrierMismatch, EnumerationCapExceeded, InvalidModel
from .gambles import Gamble, TreeProcess
from .inference import ImpreciseProbabilityTree, Selection, check_selection
from .local_models import Credal, LinearVacuous, LocalModel, Precise, Vacuous, as_credal, local_lower, vertex_count
from .tree import Cut, EventTree, build_tree, paths_through, strictly_before_cut, validate_cut

DEFAULT_CAP = 2**22
_CHUNK = 1 << 15


def oracle_cap() -> int:
    raw = os.environ.get("IPTREE_ORACLE_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"IPTREE_ORACLE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"IPTREE_ORACLE_CAP must be positive, got {cap}")
    return cap


# ---------------------------------------------------------------------------
# precise trees


@dataclass(frozen=True)
class PreciseTree:
    tree: EventTree
    masses: Mapping

    def __post_init__(self):
        for s in self.tree.nonterminals:
            if s not in self.masses:
                raise InvalidModel(f"no mass function at {s!r}")
            # reuse the mass validation of the precise local model
            Precise(self.tree.children(s), self.masses[s])


def precise_expectation(pt: PreciseTree, f: Gamble, t=None):
    tree = pt.tree
    t = tree.root if t is None else tree.check(t)
    E = {}
    for s in reversed(tree.subtree(t)):
        cs = tree._children[s]
        if not cs:
            if s not in f:
                raise CarrierMismatch(f"gamble is undefined at path {s!r}")
            E[s] = f[s]
        else:
            m = pt.masses[s]
            E[s] = sum(m[c] * E[c] for c in cs)
    return E[t]


# ---------------------------------------------------------------------------
# credal enumeration


@dataclass
class EnumerationResult:
    value: object
    assignment: dict  # non-terminal -> extreme point index
    count: int


def _vertex_lists(ipt: ImpreciseProbabilityTree, t):
    tree = ipt.tree
    nodes = [s for s in tree.subtree(t) if tree._children[s]]
    verts = [as_credal(ipt.locals[s]).extreme_points for s in nodes]
    return nodes, verts


def enumeration_count(ipt: ImpreciseProbabilityTree, t=None) -> int:
    t = ipt.tree.root if t is None else t
    n = 1
    for s in ipt.tree.subtree(t):
        if ipt.tree._children[s]:
            n *= vertex_count(ipt.locals[s])
    return n


def _describe(radices: Sequence[int], count: int) -> str:
    if radices and len(set(radices)) == 1 and radices[0] > 1 and len(radices) > 1:
        return f"{radices[0]}^{len(radices)}"
    return str(count)


def _check_cap(radices, cap):
    count = math.prod(radices)
    if count > cap:
        raise EnumerationCapExceeded(count, cap, _describe(radices, count))
    return count


def credal_enumeration_table(
    ipt: ImpreciseProbabilityTree, gambles: Sequence[Gamble], t=None, cap: int | None = None
):
    """Minimum expectation at every situation after ``t``, for several gambles at once.

    Returns ``(mins, argmin, count)``: ``mins[s][j]`` is the minimum over all
    vertex assignments of the expectation of gamble j conditional on s, and
    ``argmin[j]`` is the lexicographically first assignment attaining the
    minimum at ``t`` (the first non-terminal in preorder is the most
    significant digit). The minimum at s only involves the digits of the
    non-terminals after s, and every combination of those appears, so one
    pass over the assignments of ``t`` covers every s.
    """
    tree = ipt.tree
    t = tree.root if t is None else tree.check(t)
    cap = oracle_cap() if cap is None else cap
    nodes, verts = _vertex_lists(ipt, t)
    radices = [len(v) for v in verts]
    count = _check_cap(radices, cap)
    terms = paths_through(tree, t)
    for f in gambles:
        for w in terms:
            if w not in f:
                raise CarrierMismatch(f"gamble is undefined at path {w!r} through {t!r}")

    exact = all(f.is_exact for f in gambles) and all(
        all_exact(p.values()) for vs in verts for p in vs
    )
    if exact:
        return _enumerate_exact(tree, t, nodes, verts, gambles, count)
    return _enumerate_float(tree, t, nodes, verts, gambles, count)


def _enumerate_exact(tree, t, nodes, verts, gambles, count):
    order = list(reversed(tree.subtree(t)))
    pos = {s: i for i, s in enumerate(nodes)}
    G = len(gambles)
    mins: dict = {}
    best_at_t = [None] * G
    arg = [None] * G
    for digits in itertools.product(*(range(len(v)) for v in verts)):
        E = {}
        for s in order:
            cs = tree._children[s]
            if not cs:
                E[s] = [f[s] for f in gambles]
            else:
                p = verts[pos[s]][digits[pos[s]]]
                E[s] = [sum(p[c] * E[c][j] for c in cs) for j in range(G)]
            cur = mins.get(s)
            if cur is None:
                mins[s] = list(E[s])
            else:
                mins[s] = [min(a, b) for a, b in zip(cur, E[s])]
        for j in range(G):
            if best_at_t[j] is None or E[t][j] < best_at_t[j]:
                best_at_t[j] = E[t][j]
                arg[j] = digits
    argmin = [dict(zip(nodes, d)) for d in arg]
    return mins, argmin, count


def _enumerate_float(tree, t, nodes, verts, gambles, count):
    order = list(reversed(tree.subtree(t)))
    pos = {s: i for i, s in enumerate(nodes)}
    G = len(gambles)
    radices = [len(v) for v in verts]
    strides = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]
    mats = []
    for s, vs in zip(nodes, verts):
        cs = tree._children[s]
        mats.append(np.array([[float(p[c]) for c in cs] for p in vs]))
    term_vals = {w: np.array([float(f[w]) for f in gambles]) for w in paths_through(tree, t)}

    mins = {s: np.full(G, np.inf) for s in order}
    best = np.full(G, np.inf)
    best_idx = np.zeros(G, dtype=np.int64)
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(count, start + _CHUNK), dtype=np.int64)
        k = len(idx)
        E = {}
        for s in order:
            cs = tree._children[s]
            if not cs:
                E[s] = np.broadcast_to(term_vals[s], (k, G))
            else:
                i = pos[s]
                if strides[i] >= count:
                    # only reachable when enumerating a prefix of a huge space
                    d = np.zeros(k, dtype=np.int64)
                else:
                    d = (idx // strides[i]) % radices[i]
                P = mats[i][d]  # k x len(cs)
                acc = P[:, 0:1] * E[cs[0]]
                for ci in range(1, len(cs)):
                    acc = acc + P[:, ci : ci + 1] * E[cs[ci]]
                E[s] = acc
            np.minimum(mins[s], E[s].min(axis=0), out=mins[s])
        loc = E[t].argmin(axis=0)
        vals = E[t][loc, np.arange(G)]
        better = vals < best
        best = np.where(better, vals, best)
        best_idx = np.where(better, idx[loc], best_idx)

    out = {s: [float(v) for v in m] for s, m in mins.items()}
    argmin = []
    for j in range(G):
        n = int(best_idx[j])
        argmin.append({s: (n // strides[i]) % radices[i] for i, s in enumerate(nodes)})
    return out, argmin, count


def credal_enumeration_lower(
    ipt: ImpreciseProbabilityTree, f: Gamble, t=None, cap: int | None = None
) -> EnumerationResult:
    t = ipt.tree.root if t is None else t
    mins, argmin, count = credal_enumeration_table(ipt, [f], t, cap)
    return EnumerationResult(mins[t][0], argmin[0], count)


def credal_enumeration_upper(ipt, f: Gamble, t=None, cap=None) -> EnumerationResult:
    r = credal_enumeration_lower(ipt, -f, t, cap)
    return EnumerationResult(-r.value, r.assignment, r.count)


def enumerate_prefix(ipt: ImpreciseProbabilityTree, f: Gamble, limit: int, t=None):
    """Evaluate only the first ``limit`` assignments in lexicographic order.

    Used for timing: the full enumeration does at least this much work.
    Returns the minimum over the prefix and the number of assignments seen.
    """
    tree = ipt.tree
    t = tree.root if t is None else tree.check(t)
    nodes, verts = _vertex_lists(ipt, t)
    total = math.prod(len(v) for v in verts)
    n = min(limit, total)
    mins, _, _ = _enumerate_float(tree, t, nodes, verts, [f], n)
    return mins[t][0], n



# ---------------------------------------------------------------------------
# gamble processes and selections


def gamble_process(ipt: ImpreciseProbabilityTree, sigma: Selection, t=None):
    """The process G(t) = 0, G(sw) = G(s) + sigma(s)(w), and its terminal gamble."""
    tree = ipt.tree
    check_selection(ipt, sigma, tol=FLOAT_TOL)
    t = sigma.base if t is None else tree.check(t)
    G = {t: 0}
    for s in tree.subtree(t):
        cs = tree._children[s]
        if cs:
            g = sigma.choices.get(s)
            for c in cs:
                G[c] = G[s] + (g[c] if g is not None else 0)
    proc = TreeProcess(tree, G, base=t)
    return proc, proc.on_terminals()


def selection_lower_bound(ipt, f: Gamble, sigma: Selection):
    """sup{alpha : f - alpha >= G^sigma} = min over paths of f - G^sigma."""
    _, G = gamble_process(ipt, sigma)
    return min(f[w] - G[w] for w in G)


def call_off_selection(tree: EventTree, sigma: Selection, U: Cut) -> Selection:
    """Keep sigma strictly before U and select zero gambles from U on."""
    U = validate_cut(tree, U.base, U.members)
    if U.base != sigma.base:
        raise CarrierMismatch(f"cut is based at {U.base!r}, selection at {sigma.base!r}")
    return Selection(
        sigma.base, {s: g for s, g in sigma.choices.items() if strictly_before_cut(tree, s, U)}
    )


def restrict_selection(tree: EventTree, sigma: Selection, u) -> Selection:
    """The u-selection that sigma induces on the situations following u."""
    keep = set(tree.subtree(u))
    return Selection(u, {s: g for s, g in sigma.choices.items() if s in keep})


def decomposition_holds(ipt, sigma: Selection, U: Cut) -> bool:
    """G^sigma = G^{sigma^U} + sum over non-terminal u in U of I_{up u} G^{sigma_u}."""
    tree = ipt.tree
    _, full = gamble_process(ipt, sigma)
    _, early = gamble_process(ipt, call_off_selection(tree, sigma, U))
    rhs = early.as_dict()
    for u in U.members:
        if tree._children[u]:
            _, late = gamble_process(ipt, restrict_selection(tree, sigma, u))
            for w, v in late.items():
                rhs[w] = rhs[w] + v
    return all(close(full[w], rhs[w]) for w in full)


def avoids_sure_loss_at(ipt, sigma: Selection) -> bool:
    """True unless the terminal gamble process is negative on every path."""
    _, G = gamble_process(ipt, sigma)
    vals = list(G.values())
    tol = 0 if all_exact(vals) else FLOAT_TOL
    return max(vals) >= -tol


def avoids_partial_loss_at(ipt, sigma: Selection) -> bool:
    """False iff G^sigma <= 0 everywhere and < 0 somewhere.

    Stronger than :func:`avoids_sure_loss_at`. It holds for every valid
    selection only when each move has positive upper probability.
    """
    _, G = gamble_process(ipt, sigma)
    vals = list(G.values())
    tol = 0 if all_exact(vals) else FLOAT_TOL
    if all(abs(v) <= tol for v in vals):
        return True
    return max(vals) > tol


# ---------------------------------------------------------------------------
# seeded random instances


def _positive_mass(rng: random.Random, carrier, exact: bool) -> dict:
    if exact:
        ks = [rng.randint(1, 9) for _ in carrier]
        tot = sum(ks)
        return {c: Fraction(k, tot) for c, k in zip(carrier, ks)}
    xs = [rng.random() + 0.05 for _ in carrier]
    tot = sum(xs)
    return {c: x / tot for c, x in zip(carrier, xs)}


def random_local_model(rng: random.Random, carrier, max_vertices: int = 3, exact: bool = False) -> LocalModel:
    """One of the four variants, with at most ``max_vertices`` extreme points.

    Every child keeps positive upper probability (see the no-partial-loss
    check), so precise masses are strictly positive.
    """
    carrier = tuple(carrier)
    kinds = ["precise", "linvac", "credal"]
    if len(carrier) <= max_vertices:
        kinds.append("vacuous")
    kind = rng.choice(kinds)
    if kind == "linvac" and len(carrier) > max_vertices:
        kind = "credal"
    if kind == "vacuous":
        return Vacuous(carrier)
    if kind == "precise":
        return Precise(carrier, _positive_mass(rng, carrier, exact))
    if kind == "linvac":
        delta = Fraction(rng.randint(0, 10), 10) if exact else rng.random()
        return LinearVacuous(carrier, _positive_mass(rng, carrier, exact), delta)
    k = rng.randint(1, max_vertices)
    return Credal(carrier, tuple(_positive_mass(rng, carrier, exact) for _ in range(k)))


def random_tree(rng: random.Random, max_depth: int = 4, max_branching: int = 3, p_stop: float = 0.35) -> EventTree:
    children: dict = {}
    counter = itertools.count(1)
    root = "s0"
    stack = [(root, 0)]
    while stack:
        s, d = stack.pop()
        if d >= max_depth or (d > 0 and rng.random() < p_stop):
            continue
        cs = [f"s{next(counter)}" for _ in range(rng.randint(2, max_branching))]
        children[s] = cs
        stack.extend((c, d + 1) for c in cs)
    return build_tree(root, children, depth_bound=max_depth)


def random_ipt(
    rng: random.Random,
    max_depth: int = 4,
    max_branching: int = 3,
    max_vertices: int = 3,
    exact: bool = False,
    max_assignments: int | None = None,
) -> ImpreciseProbabilityTree:
    """A random tree with random local models; resampled until the oracle fits ``max_assignments``."""
    while True:
        tree = random_tree(rng, max_depth, max_branching)
        locals = {s: random_local_model(rng, tree.children(s), max_vertices, exact) for s in tree.nonterminals}
        ipt = ImpreciseProbabilityTree(tree, locals)
        if max_assignments is None or enumeration_count(ipt) <= max_assignments:
            return ipt


def random_value(rng: random.Random, exact: bool, lo: int = -5, hi: int = 5):
    if exact:
        return Fraction(rng.randint(lo * 4, hi * 4), 4)
    return rng.uniform(lo, hi)


def random_gamble(rng: random.Random, carrier, exact: bool = False) -> Gamble:
    return Gamble({w: random_value(rng, exact) for w in carrier})


def random_selection(rng: random.Random, ipt: ImpreciseProbabilityTree, t=None, exact: bool = False, p_zero: float = 0.2) -> Selection:
    """Random valid selection: each choice is g - local_lower(g) plus a non-negative slack."""
    tree = ipt.tree
    t = tree.root if t is None else t
    choices = {}
    for s in tree.subtree(t):
        cs = tree._children[s]
        if not cs or rng.random() < p_zero:
            continue
        g = random_gamble(rng, cs, exact)
        slack = random_value(rng, exact, 0, 1) if rng.random() < 0.5 else 0
        choices[s] = g - local_lower(ipt.locals[s], g) + slack
    return Selection(t, choices)


def random_cut(rng: random.Random, tree: EventTree, t=None, p_stop: float = 0.4) -> Cut:
    t = tree.root if t is None else t
    members = []
    stack = [t]
    while stack:
        s = stack.pop()
        cs = tree._children[s]
        if not cs or rng.random() < p_stop:
            members.append(s)
        else:
            stack.extend(cs)
    return validate_cut(tree, t, members)


def is_exact_ipt(ipt: ImpreciseProbabilityTree) -> bool:
    return all(
        all_exact(p.values()) for m in ipt.locals.values() for p in as_credal(m).extreme_points
    )


__all__ = [
    "DEFAULT_CAP",
    "EnumerationResult",
    "PreciseTree",
    "avoids_partial_loss_at",
    "avoids_sure_loss_at",
    "call_off_selection",
    "credal_enumeration_lower",
    "credal_enumeration_table",
    "credal_enumeration_upper",
    "decomposition_holds",
    "enumerate_prefix",
    "enumeration_count",
    "gamble_process",
    "oracle_cap",
    "precise_expectation",
    "random_cut",
    "random_gamble",
    "random_ipt",
    "random_local_model",
    "random_selection",
    "random_tree",
    "restrict_selection",
    "selection_lower_bound",
]
