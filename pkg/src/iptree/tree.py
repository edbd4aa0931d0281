"""Finite event trees: situations, precedence, cuts, children and paths.

Situations are identified by string labels. Children are kept as ordered
tuples so every traversal (and every tie-break further down the stack) is
deterministic. Trees are immutable once built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import (
    Cycle,
    DepthBoundExceeded,
    Disconnected,
    DuplicateId,
    NotADescendant,
    NotAPartition,
    SingletonMoveSpace,
    TerminalSituation,
    UnknownId,
)

SituationId = str


@dataclass(frozen=True)
class Cut:
    """A set of situations partitioning the paths through ``base``.

    ``members`` is ordered by the tree's preorder.
    """

    base: SituationId
    members: tuple[SituationId, ...]

    def __contains__(self, s) -> bool:
        return s in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


class EventTree:
    """A finite rooted tree of situations; terminal situations form the sample space."""

    __slots__ = ("root", "_children", "_parent", "_depth", "_order", "_order_index", "depth_bound", "_terminals", "_size")

    def __init__(self, root, children, parent, depth, order, depth_bound):
        self.root = root
        self._children = children
        self._parent = parent
        self._depth = depth
        self._order = order
        self._order_index = {s: i for i, s in enumerate(order)}
        self.depth_bound = depth_bound
        self._terminals = tuple(s for s in order if not children[s])
        size = {}
        for s in reversed(order):
            size[s] = 1 + sum(size[c] for c in children[s])
        self._size = size

    # --- basic queries -------------------------------------------------
    def __contains__(self, s) -> bool:
        return s in self._children

    def __len__(self) -> int:
        return len(self._order)

    def __repr__(self) -> str:
        return f"EventTree(root={self.root!r}, situations={len(self)}, terminals={len(self._terminals)})"

    def check(self, s) -> SituationId:
        if s not in self._children:
            raise UnknownId(f"unknown situation {s!r}")
        return s

    @property
    def situations(self) -> tuple[SituationId, ...]:
        """All situations in preorder (parents before children)."""
        return self._order

    @property
    def terminals(self) -> tuple[SituationId, ...]:
        """The sample space, in preorder."""
        return self._terminals

    @property
    def nonterminals(self) -> tuple[SituationId, ...]:
        return tuple(s for s in self._order if self._children[s])

    def children(self, s) -> tuple[SituationId, ...]:
        return self._children[self.check(s)]

    def parent(self, s) -> SituationId | None:
        return self._parent[self.check(s)]

    def depth(self, s) -> int:
        return self._depth[self.check(s)]

    def is_terminal(self, s) -> bool:
        return not self._children[self.check(s)]

    def order_index(self, s) -> int:
        return self._order_index[s]

    def path_to(self, s) -> list[SituationId]:
        """Situations from the root down to ``s`` inclusive."""
        path = [self.check(s)]
        while self._parent[path[-1]] is not None:
            path.append(self._parent[path[-1]])
        path.reverse()
        return path

    def subtree(self, t) -> list[SituationId]:
        """All situations following ``t`` (inclusive), in preorder."""
        i = self._order_index[self.check(t)]
        return list(self._order[i : i + self._size[t]])

    def child_towards(self, s, u) -> SituationId:
        """The child of ``s`` on the root-path of ``u`` (requires s strictly before u)."""
        if self._depth[u] <= self._depth[s]:
            raise NotADescendant(f"{u!r} does not strictly follow {s!r}")
        x = u
        while self._depth[x] > self._depth[s] + 1:
            x = self._parent[x]
        if self._parent[x] != s:
            raise NotADescendant(f"{u!r} does not strictly follow {s!r}")
        return x


def build_tree(
    root: SituationId,
    children: Mapping[SituationId, Sequence[SituationId]],
    depth_bound: int | None = None,
) -> EventTree:
    """Build and validate an event tree from a parent -> ordered children map.

    Terminal situations may be listed with an empty child list or omitted.
    """
    kids: dict[SituationId, tuple] = {}
    parent: dict[SituationId, SituationId | None] = {root: None}
    depth = {root: 0}
    order = []
    stack = [root]
    while stack:
        s = stack.pop()
        order.append(s)
        cs = tuple(children.get(s, ()))
        if len(cs) == 1:
            raise SingletonMoveSpace(f"situation {s!r} has a single child; move spaces need at least two moves")
        if len(set(cs)) != len(cs):
            raise DuplicateId(f"situation {s!r} lists a child twice")
        for c in cs:
            if c in parent:
                # c already placed: either an ancestor of s (cycle) or elsewhere (duplicate)
                a = s
                while a is not None and a != c:
                    a = parent[a]
                if a == c:
                    raise Cycle(f"edge {s!r} -> {c!r} closes a cycle")
                raise DuplicateId(f"situation {c!r} appears more than once")
            parent[c] = s
            depth[c] = depth[s] + 1
        kids[s] = cs
        stack.extend(reversed(cs))
    stray = [s for s in children if s not in kids]
    if stray:
        raise Disconnected(f"situations not reachable from root {root!r}: {sorted(map(str, stray))}")
    max_depth = max(depth.values())
    if depth_bound is None:
        depth_bound = max_depth
    elif max_depth > depth_bound:
        raise DepthBoundExceeded(f"tree depth {max_depth} exceeds bound {depth_bound}")
    return EventTree(root, kids, parent, depth, tuple(order), depth_bound)


def precedes(tree: EventTree, s, t) -> bool:
    """True iff ``s`` lies on the root-path of ``t`` (reflexive)."""
    tree.check(s)
    tree.check(t)
    ds, x = tree._depth[s], t
    if tree._depth[t] < ds:
        return False
    while tree._depth[x] > ds:
        x = tree._parent[x]
    return x == s


def strictly_precedes(tree: EventTree, s, t) -> bool:
    return s != t and precedes(tree, s, t)


def paths_through(tree: EventTree, t) -> tuple[SituationId, ...]:
    """Terminal situations following ``t``, in preorder."""
    return tuple(s for s in tree.subtree(t) if not tree._children[s])


def distance(tree: EventTree, t, s) -> int:
    """Number of arcs from ``t`` down to ``s``."""
    if not precedes(tree, t, s):
        raise NotADescendant(f"{s!r} does not follow {t!r}")
    return tree._depth[s] - tree._depth[t]


def validate_cut(tree: EventTree, base, members) -> Cut:
    tree.check(base)
    members = list(members)
    for u in members:
        tree.check(u)
        if not precedes(tree, base, u):
            raise NotAPartition(f"{u!r} does not follow {base!r}")
    if len(set(members)) != len(members):
        raise NotAPartition("cut lists a member twice")
    hits = dict.fromkeys(paths_through(tree, base), 0)
    for u in members:
        for w in paths_through(tree, u):
            hits[w] += 1
    missed = [w for w, n in hits.items() if n == 0]
    doubled = [w for w, n in hits.items() if n > 1]
    if missed or doubled:
        raise NotAPartition(
            f"not a cut of {base!r}: paths missed {missed}, paths hit more than once {doubled}"
        )
    idx = tree._order_index
    return Cut(base, tuple(sorted(members, key=idx.__getitem__)))


def children_cut(tree: EventTree, t) -> Cut:
    cs = tree.children(t)
    if not cs:
        raise TerminalSituation(f"{t!r} is terminal and has no children cut")
    return Cut(t, cs)


def terminal_cut(tree: EventTree, t=None) -> Cut:
    t = tree.root if t is None else t
    return Cut(t, paths_through(tree, t))


def trivial_cut(tree: EventTree, t) -> Cut:
    return Cut(tree.check(t), (t,))


def cut_of(tree: EventTree, s, U: Cut) -> SituationId | None:
    """The member of ``U`` on the root-path of ``s`` (s at or after U), else None."""
    for u in U.members:
        if precedes(tree, u, s):
            return u
    return None


def strictly_before_cut(tree: EventTree, s, U: Cut) -> bool:
    """True iff ``s`` strictly precedes some member of ``U``."""
    return any(strictly_precedes(tree, s, u) for u in U.members)


def cut_precedes(tree: EventTree, U: Cut, V: Cut) -> bool:
    """U precedes V when every member of U is followed by some member of V."""
    return all(any(precedes(tree, u, v) for v in V.members) for u in U.members)


def iter_cuts(tree: EventTree, t) -> Iterator[Cut]:
    """Every cut of ``t``; the trivial cut ``{t}`` comes first.

    The count grows very fast with tree size; callers should bound it.
    """
    idx = tree._order_index

    def rec(s):
        yield (s,)
        cs = tree._children[s]
        if cs:
            for combo in itertools.product(*(list(rec(c)) for c in cs)):
                yield tuple(itertools.chain.from_iterable(combo))

    for members in rec(tree.check(t)):
        yield Cut(t, tuple(sorted(members, key=idx.__getitem__)))


def count_cuts(tree: EventTree, t) -> int:
    def rec(s):
        cs = tree._children[s]
        n = 1
        for c in cs:
            n *= rec(c)
        return 1 + (n if cs else 0)

    return rec(tree.check(t))
