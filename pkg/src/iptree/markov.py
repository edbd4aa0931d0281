"""Imprecise Markov chains: transition operator, iteration, unrolling and timing.

The lower prevision of a gamble f_n on the state at time n is

    P(f_n) = P_1(T^{n-1} f_n),   T(f)(x) = P_x(f),

so n - 1 applications of T and one of the initial model: linear in n. The
same number comes out of the backwards recursion on the unrolled event
tree, and of credal enumeration on that tree, whose cost is exponential
in the number of non-terminal situations.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._numeric import all_exact
from .errors import CarrierMismatch, InvalidModel, NonPositiveHorizon, SizeCapExceeded
from .gambles import Gamble
from .inference import ImpreciseProbabilityTree, predictive_lower
from .local_models import LocalModel, as_credal, local_lower
from .tree import Cut, build_tree

DEFAULT_NODE_CAP = 2**21


class ImpreciseMarkovChain:
    """A finite state space, an initial model and one transition model per state."""

    def __init__(self, states: Sequence, initial: LocalModel, per_state: Mapping[str, LocalModel]):
        states = tuple(states)
        if len(set(states)) != len(states):
            raise InvalidModel("states must be distinct")
        if set(per_state) != set(states):
            raise InvalidModel(f"transition models given for {sorted(per_state)}, states are {list(states)}")
        for name, m in [("initial", initial)] + [(f"state {x!r}", per_state[x]) for x in states]:
            if set(m.carrier) != set(states):
                raise CarrierMismatch(f"{name} model is on {list(m.carrier)}, not on the states {list(states)}")
        self.states = states
        self.initial = initial
        self.per_state = {x: per_state[x] for x in states}
        self._tensor = None

    @property
    def exact(self) -> bool:
        models = [self.initial, *self.per_state.values()]
        return all(all_exact(p.values()) for m in models for p in as_credal(m).extreme_points)

    def tensor(self):
        """Vertices as an array of shape (states, max vertices, states).

        Short vertex lists are padded by repeating their first vertex, which
        leaves every minimum unchanged.
        """
        if self._tensor is None:
            self._tensor = _vertex_tensor(self.states, [self.per_state[x] for x in self.states])
        return self._tensor

    def __repr__(self):
        return f"ImpreciseMarkovChain(states={list(self.states)})"


def _vertex_tensor(states, models):
    pts = [as_credal(m).extreme_points for m in models]
    k = max(len(p) for p in pts)
    out = np.empty((len(models), k, len(states)))
    for i, ps in enumerate(pts):
        for j in range(k):
            p = ps[j] if j < len(ps) else ps[0]
            out[i, j] = [float(p[y]) for y in states]
    return out


def _check(chain: ImpreciseMarkovChain, f: Gamble):
    if set(f.carrier) != set(chain.states):
        raise CarrierMismatch(
            f"gamble is on {list(f.carrier)}, not on the states {list(chain.states)}; "
            "gambles on whole paths belong on the unrolled tree"
        )


def apply_T(chain: ImpreciseMarkovChain, f: Gamble) -> Gamble:
    """T(f)(x) = lower prevision of f under the transition model of x."""
    _check(chain, f)
    g = f.restrict(chain.states)
    return Gamble({x: local_lower(chain.per_state[x], g) for x in chain.states})


def apply_T_upper(chain: ImpreciseMarkovChain, f: Gamble) -> Gamble:
    return -apply_T(chain, -f)


def _use_fast(chain, f, fast):
    if fast is None:
        return not (f.is_exact and chain.exact)
    return fast


def state_lower_prevision(chain: ImpreciseMarkovChain, f: Gamble, n: int, fast: bool | None = None):
    """Lower prevision of f(X(n)) by n - 1 operator steps and the initial model.

    ``fast`` selects the numpy path; by default it is used unless every
    number involved is rational, in which case the result is exact.
    """
    if not isinstance(n, int) or n < 1:
        raise NonPositiveHorizon(f"horizon must be a positive integer, got {n!r}")
    _check(chain, f)
    if _use_fast(chain, f, fast):
        V = chain.tensor()
        v = np.array([float(f[x]) for x in chain.states])
        for _ in range(n - 1):
            v = (V @ v).min(axis=1)
        return local_lower(chain.initial, Gamble(dict(zip(chain.states, v.tolist()))))
    g = f.restrict(chain.states)
    for _ in range(n - 1):
        g = apply_T(chain, g)
    return local_lower(chain.initial, g)


def state_upper_prevision(chain: ImpreciseMarkovChain, f: Gamble, n: int, fast: bool | None = None):
    return -state_lower_prevision(chain, -f, n, fast)


# ---------------------------------------------------------------------------
# unrolled tree


@dataclass
class UnrolledChain:
    ipt: ImpreciseProbabilityTree
    cuts: list  # cuts[k - 1] is X^k, the situations at time k
    states: tuple

    def lift(self, f: Gamble, n: int) -> Gamble:
        """The gamble on terminal paths equal to f(x_n)."""
        if not 1 <= n <= len(self.cuts):
            raise NonPositiveHorizon(f"time {n} outside 1..{len(self.cuts)}")
        return Gamble({w: f[w.split(",")[n - 1]] for w in self.ipt.tree.terminals})


def node_count(n_states: int, N: int) -> int:
    return sum(n_states**k for k in range(N + 1))


def unroll_to_tree(chain: ImpreciseMarkovChain, N: int, node_cap: int = DEFAULT_NODE_CAP) -> UnrolledChain:
    """Event tree of all state sequences up to time N.

    The root is labelled "root"; a situation at time k is labelled by its
    comma-separated state history, e.g. "a,b". States must not contain commas.
    """
    if not isinstance(N, int) or N < 1:
        raise NonPositiveHorizon(f"horizon must be a positive integer, got {N!r}")
    if any("," in str(x) or str(x) == "root" for x in chain.states):
        raise InvalidModel("state labels used for unrolling must not contain commas or equal 'root'")
    total = node_count(len(chain.states), N)
    if total > node_cap:
        raise SizeCapExceeded(f"unrolled tree would have {total} situations, cap is {node_cap}")
    children = {}
    locals = {}
    layer = ["root"]
    cuts = []
    for k in range(N):
        nxt = []
        for s in layer:
            prefix = "" if s == "root" else s + ","
            cs = [prefix + x for x in chain.states]
            children[s] = cs
            model = chain.initial if s == "root" else chain.per_state[s.rsplit(",", 1)[-1]]
            locals[s] = _relabel(model, chain.states, cs)
            nxt.extend(cs)
        layer = nxt
        cuts.append(tuple(layer))
    tree = build_tree("root", children, depth_bound=N)
    ipt = ImpreciseProbabilityTree(tree, locals)
    idx = tree._order_index
    cut_objs = [Cut("root", tuple(sorted(c, key=idx.__getitem__))) for c in cuts]
    return UnrolledChain(ipt, cut_objs, chain.states)


def _relabel(model: LocalModel, states, labels) -> LocalModel:
    """The same model with each state renamed to the matching child label."""
    from .local_models import Credal, LinearVacuous, Precise, Vacuous

    ren = dict(zip(states, labels))
    lab = tuple(labels)
    if isinstance(model, Vacuous):
        return Vacuous(lab)
    if isinstance(model, Precise):
        return Precise(lab, {ren[x]: p for x, p in model.mass.items()})
    if isinstance(model, LinearVacuous):
        return LinearVacuous(lab, {ren[x]: p for x, p in model.mass.items()}, model.delta)
    if isinstance(model, Credal):
        return Credal(lab, tuple({ren[x]: p for x, p in pt.items()} for pt in model.extreme_points))
    raise TypeError(f"unknown local model {model!r}")


def tree_lower_prevision(chain: ImpreciseMarkovChain, f: Gamble, n: int):
    u = unroll_to_tree(chain, n)
    return predictive_lower(u.ipt, u.lift(f, n))


# ---------------------------------------------------------------------------
# benchmarks


def enumeration_count_unrolled(chain: ImpreciseMarkovChain, N: int) -> int:
    """Vertex assignments of the unrolled tree, computed without building it."""
    from .local_models import vertex_count

    per = {x: vertex_count(chain.per_state[x]) for x in chain.states}
    total = vertex_count(chain.initial)
    # number of situations at time k ending in state x is (|X|^(k-1)) per state for k >= 1
    for k in range(1, N):
        layer = len(chain.states) ** (k - 1)
        for x in chain.states:
            total *= per[x] ** layer
    return total


def benchmark_scaling(
    chain: ImpreciseMarkovChain,
    horizons: Sequence[int],
    f: Gamble | None = None,
    cap: int | None = None,
    repeat: int = 3,
) -> list[dict]:
    """Time the operator iteration against full credal enumeration.

    Enumeration runs only while the assignment count stays within ``cap``;
    other rows leave its columns as None.
    """
    from .oracle import credal_enumeration_lower, oracle_cap

    cap = oracle_cap() if cap is None else cap
    if f is None:
        f = Gamble({x: (1.0 if i == 0 else 0.0) for i, x in enumerate(chain.states)})
    rows = []
    for n in horizons:
        best = math.inf
        for _ in range(repeat):
            t0 = time.perf_counter()
            v_op = state_lower_prevision(chain, f, n)
            best = min(best, time.perf_counter() - t0)
        count = enumeration_count_unrolled(chain, n)
        row = {"n": n, "t_operator_ms": best * 1e3, "t_enum_ms": None,
               "value_operator": float(v_op), "value_enum": None, "enum_count": count}
        if count <= cap and node_count(len(chain.states), n) <= DEFAULT_NODE_CAP:
            t0 = time.perf_counter()
            u = unroll_to_tree(chain, n)
            res = credal_enumeration_lower(u.ipt, u.lift(f, n), cap=cap)
            row["t_enum_ms"] = (time.perf_counter() - t0) * 1e3
            row["value_enum"] = float(res.value)
        rows.append(row)
    return rows


def time_enumeration_prefix(chain: ImpreciseMarkovChain, n: int, limit: int, f: Gamble | None = None):
    """Seconds spent on the first ``limit`` assignments at horizon n.

    The full enumeration visits every one of these assignments and more, so
    this is a lower bound on its running time.
    """
    from .oracle import enumerate_prefix

    if f is None:
        f = Gamble({x: (1.0 if i == 0 else 0.0) for i, x in enumerate(chain.states)})
    t0 = time.perf_counter()
    u = unroll_to_tree(chain, n)
    _, seen = enumerate_prefix(u.ipt, u.lift(f, n), limit)
    return time.perf_counter() - t0, seen


def random_chain(rng: random.Random, max_states: int = 3, max_vertices: int = 3, exact: bool = False) -> ImpreciseMarkovChain:
    from .oracle import random_local_model

    states = tuple("abcdefghij"[: rng.randint(2, max_states)])
    initial = random_local_model(rng, states, max_vertices, exact)
    per = {x: random_local_model(rng, states, max_vertices, exact) for x in states}
    return ImpreciseMarkovChain(states, initial, per)


def two_state_chain(delta=0.2) -> ImpreciseMarkovChain:
    """Both states move by a linear-vacuous model around the uniform mass."""
    from .local_models import LinearVacuous

    X = ("a", "b")
    m = LinearVacuous(X, {"a": 0.5, "b": 0.5}, delta)
    return ImpreciseMarkovChain(X, m, {x: m for x in X})


def scale_chain(n_states: int = 10, n_vertices: int = 4, seed: int = 0) -> ImpreciseMarkovChain:
    """A larger random float chain for the linear-time check."""
    from .local_models import Credal

    rng = random.Random(seed)
    states = tuple(f"x{i}" for i in range(n_states))

    def model():
        pts = []
        for _ in range(n_vertices):
            w = [rng.random() + 0.01 for _ in states]
            tot = sum(w)
            pts.append({x: v / tot for x, v in zip(states, w)})
        return Credal(states, tuple(pts))

    return ImpreciseMarkovChain(states, model(), {x: model() for x in states})
