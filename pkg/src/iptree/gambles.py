"""Gambles on finite carriers, cut measurability, and stopped processes."""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable, Mapping

from ._numeric import FLOAT_TOL, check_real, is_exact
from .errors import CarrierMismatch, NotMeasurable
from .tree import Cut, EventTree, cut_of, paths_through, precedes


class Gamble:
    """A real-valued map on a finite carrier.

    Carrier order is the insertion order of ``values``; binary operations
    require equal carrier *sets* and keep the left operand's order.
    Values may be ints, Fractions or floats; keeping them rational keeps
    every derived quantity exact.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[Hashable, Any]):
        vals = dict(values)
        for k, v in vals.items():
            check_real(v, f"gamble value at {k!r}")
        self._values = vals

    # construction helpers
    @classmethod
    def constant(cls, carrier: Iterable, c) -> "Gamble":
        return cls({w: c for w in carrier})

    @classmethod
    def indicator(cls, carrier: Iterable, event: Iterable) -> "Gamble":
        ev = set(event)
        return cls({w: (1 if w in ev else 0) for w in carrier})

    @classmethod
    def from_function(cls, carrier: Iterable, fn: Callable) -> "Gamble":
        return cls({w: fn(w) for w in carrier})

    # mapping protocol
    @property
    def carrier(self) -> tuple:
        return tuple(self._values)

    def __getitem__(self, w):
        try:
            return self._values[w]
        except KeyError:
            raise CarrierMismatch(f"{w!r} is not in the gamble's carrier") from None

    def __contains__(self, w) -> bool:
        return w in self._values

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def items(self):
        return self._values.items()

    def values(self):
        return self._values.values()

    def as_dict(self) -> dict:
        return dict(self._values)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self._values.values())

    def min(self):
        return min(self._values.values())

    def max(self):
        return max(self._values.values())

    def restrict(self, carrier: Iterable) -> "Gamble":
        return Gamble({w: self[w] for w in carrier})

    # arithmetic
    def _check(self, other: "Gamble"):
        if self._values.keys() != other._values.keys():
            raise CarrierMismatch(
                f"carriers differ: {sorted(map(str, self._values))} vs {sorted(map(str, other._values))}"
            )

    def __add__(self, other):
        if isinstance(other, Gamble):
            self._check(other)
            return Gamble({w: v + other._values[w] for w, v in self._values.items()})
        return Gamble({w: v + other for w, v in self._values.items()})

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Gamble):
            self._check(other)
            return Gamble({w: v - other._values[w] for w, v in self._values.items()})
        return Gamble({w: v - other for w, v in self._values.items()})

    def __rsub__(self, other):
        return Gamble({w: other - v for w, v in self._values.items()})

    def __neg__(self):
        return Gamble({w: -v for w, v in self._values.items()})

    def __mul__(self, other):
        if isinstance(other, Gamble):
            self._check(other)
            return Gamble({w: v * other._values[w] for w, v in self._values.items()})
        return Gamble({w: v * other for w, v in self._values.items()})

    __rmul__ = __mul__

    def minimum(self, other: "Gamble") -> "Gamble":
        self._check(other)
        return Gamble({w: min(v, other._values[w]) for w, v in self._values.items()})

    def __eq__(self, other):
        if not isinstance(other, Gamble):
            return NotImplemented
        return self._values == other._values

    def __ge__(self, other: "Gamble") -> bool:
        self._check(other)
        return all(v >= other._values[w] for w, v in self._values.items())

    def __le__(self, other: "Gamble") -> bool:
        self._check(other)
        return all(v <= other._values[w] for w, v in self._values.items())

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(f"{w!r}: {v}" for w, v in self._values.items())
        return f"Gamble({{{inner}}})"


def gamble_arith(f: Gamble, g: Gamble | None = None, op: str = "add", scalar=None) -> Gamble:
    """Named-operation front end over the Gamble operators.

    ``op`` is one of add, sub, min (binary) or scale, shift, negate (unary;
    ``scale`` and ``shift`` take ``scalar``).
    """
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "min":
        return f.minimum(g)
    if op == "scale":
        return f * scalar
    if op == "shift":
        return f + scalar
    if op == "negate":
        return -f
    raise ValueError(f"unknown gamble operation {op!r}")


def _same(a, b) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= FLOAT_TOL


def _terminals_of(tree: EventTree, f: Gamble, t) -> tuple:
    ws = paths_through(tree, t)
    missing = [w for w in ws if w not in f]
    if missing:
        raise CarrierMismatch(f"gamble undefined on paths {missing} through {t!r}")
    return ws


def is_cut_measurable(tree: EventTree, f: Gamble, U: Cut) -> bool:
    """True iff ``f`` is constant on the paths through each member of ``U``."""
    _terminals_of(tree, f, U.base)
    for u in U.members:
        ws = paths_through(tree, u)
        first = f[ws[0]]
        if any(not _same(first, f[w]) for w in ws[1:]):
            return False
    return True


def project_to_cut(tree: EventTree, f: Gamble, U: Cut) -> Gamble:
    """View a U-measurable gamble on the paths through U's base as a gamble on U."""
    if not is_cut_measurable(tree, f, U):
        raise NotMeasurable(f"gamble is not measurable with respect to cut {U.members}")
    return Gamble({u: f[paths_through(tree, u)[0]] for u in U.members})


def embed_from_cut(tree: EventTree, g: Gamble, U: Cut) -> Gamble:
    """Lift a gamble on the members of ``U`` to the paths through U's base."""
    if set(g.carrier) != set(U.members):
        raise CarrierMismatch("gamble carrier is not the cut")
    out = {}
    for u in U.members:
        for w in paths_through(tree, u):
            out[w] = g[u]
    return Gamble({w: out[w] for w in paths_through(tree, U.base)})


class TreeProcess:
    """A process: values on every situation following ``base``.

    Values are usually reals, but any comparable labels work (used for the
    outcome processes of the coin examples).
    """

    __slots__ = ("tree", "base", "_values")

    def __init__(self, tree: EventTree, values: Mapping, base=None):
        self.tree = tree
        self.base = tree.root if base is None else tree.check(base)
        vals = dict(values)
        missing = [s for s in tree.subtree(self.base) if s not in vals]
        if missing:
            raise CarrierMismatch(f"process undefined at {missing}")
        self._values = vals

    def __getitem__(self, s):
        return self._values[s]

    def items(self):
        return ((s, self._values[s]) for s in self.tree.subtree(self.base))

    def as_dict(self) -> dict:
        return dict(self.items())

    def on_terminals(self) -> Gamble:
        """Restriction to the terminal situations following ``base``."""
        return Gamble({w: self._values[w] for w in paths_through(self.tree, self.base)})

    def at_cut(self, U: Cut) -> Gamble:
        """The U-measurable variable taking value F(u) on every path through u."""
        out = {}
        for u in U.members:
            for w in paths_through(self.tree, u):
                out[w] = self._values[u]
        return Gamble({w: out[w] for w in paths_through(self.tree, U.base)})

    def __eq__(self, other):
        if not isinstance(other, TreeProcess):
            return NotImplemented
        return self.base == other.base and self.as_dict() == other.as_dict()

    __hash__ = None

    def __repr__(self):
        return f"TreeProcess(base={self.base!r}, values={self.as_dict()!r})"


def distance_process(tree: EventTree, t=None) -> TreeProcess:
    """The process d(t, .) counting arcs from ``t``."""
    t = tree.root if t is None else t
    d0 = tree.depth(t)
    return TreeProcess(tree, {s: tree.depth(s) - d0 for s in tree.subtree(t)}, base=t)


def stop_process(tree: EventTree, F: TreeProcess, U: Cut) -> TreeProcess:
    """The U-stopped process: F up to U, frozen at F(u) from each u in U onwards."""
    if not precedes(tree, F.base, U.base):
        raise CarrierMismatch(f"process based at {F.base!r} does not cover cut base {U.base!r}")
    vals = {}
    for s in tree.subtree(U.base):
        u = cut_of(tree, s, U)
        vals[s] = F[s] if u is None else F[u]
    return TreeProcess(tree, vals, base=U.base)
