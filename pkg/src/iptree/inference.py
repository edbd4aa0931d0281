"""Predictive lower and upper previsions in imprecise probability trees.

Everything here rests on one backwards pass: the value at a terminal
situation is the gamble's value there, and the value at a non-terminal
situation is the local lower prevision of its children's values. The pass
visits each situation once, so cost is linear in the size of the subtree.

Local cones are treated as closed: a gamble on a move space is desirable
when its local lower prevision is non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ._numeric import FLOAT_TOL, all_exact, is_exact
from .errors import CarrierMismatch, EpsilonNegative, InvalidModel, InvalidSelection
from .gambles import Gamble
from .local_models import LocalModel, local_lower
from .tree import Cut, EventTree, paths_through, validate_cut


class ImpreciseProbabilityTree:
    """An event tree with a local model in every non-terminal situation."""

    __slots__ = ("tree", "locals")

    def __init__(self, tree: EventTree, locals: Mapping[str, LocalModel]):
        locals = dict(locals)
        for s in tree.nonterminals:
            if s not in locals:
                raise InvalidModel(f"no local model at non-terminal situation {s!r}")
            if set(locals[s].carrier) != set(tree.children(s)):
                raise CarrierMismatch(
                    f"local model at {s!r} is on {list(locals[s].carrier)}, children are {list(tree.children(s))}"
                )
        extra = [s for s in locals if s not in tree or tree.is_terminal(s)]
        if extra:
            raise InvalidModel(f"local models given at terminal or unknown situations {extra}")
        self.tree = tree
        self.locals = locals

    def replace(self, **new_locals) -> "ImpreciseProbabilityTree":
        return ImpreciseProbabilityTree(self.tree, {**self.locals, **new_locals})

    def with_locals(self, updates: Mapping[str, LocalModel]) -> "ImpreciseProbabilityTree":
        return ImpreciseProbabilityTree(self.tree, {**self.locals, **updates})

    def __repr__(self):
        return f"ImpreciseProbabilityTree({self.tree!r})"


@dataclass
class Selection:
    """A desirable gamble on the children of each non-terminal situation after ``base``.

    Missing entries stand for the zero gamble.
    """

    base: str
    choices: dict = field(default_factory=dict)

    def choice(self, tree: EventTree, s) -> Gamble:
        g = self.choices.get(s)
        if g is None:
            return Gamble.constant(tree.children(s), 0)
        return g


def check_selection(ipt: ImpreciseProbabilityTree, sigma: Selection, tol=FLOAT_TOL) -> None:
    """Raise InvalidSelection unless every chosen gamble is locally desirable."""
    tree = ipt.tree
    covered = set(tree.subtree(sigma.base))
    for s, g in sigma.choices.items():
        if s not in covered or tree.is_terminal(s):
            raise InvalidSelection(f"selection chooses a gamble at {s!r}, outside the non-terminals after {sigma.base!r}")
        if set(g.carrier) != set(tree.children(s)):
            raise InvalidSelection(f"gamble chosen at {s!r} is not on its children")
        low = local_lower(ipt.locals[s], g)
        slack = 0 if (is_exact(low) and g.is_exact) else tol
        if low < -slack:
            raise InvalidSelection(f"gamble chosen at {s!r} has local lower prevision {low} < 0")


def _terminal_values(tree: EventTree, f: Gamble, t) -> dict:
    vals = {}
    for w in paths_through(tree, t):
        if w not in f:
            raise CarrierMismatch(f"gamble is undefined at path {w!r} through {t!r}")
        vals[w] = f[w]
    return vals


def backward_values(ipt: ImpreciseProbabilityTree, f: Gamble, t=None, upper: bool = False) -> dict:
    """Predictive lower (or upper) previsions at every situation following ``t``."""
    tree = ipt.tree
    t = tree.root if t is None else tree.check(t)
    V = _terminal_values(tree, f, t)
    for s in reversed(tree.subtree(t)):
        cs = tree._children[s]
        if cs:
            g = Gamble({c: V[c] for c in cs})
            V[s] = -local_lower(ipt.locals[s], -g) if upper else local_lower(ipt.locals[s], g)
    return V


def predictive_lower(ipt: ImpreciseProbabilityTree, f: Gamble, t=None):
    """Lower prevision of ``f`` conditional on reaching ``t`` (default: the root)."""
    t = ipt.tree.root if t is None else t
    return backward_values(ipt, f, t)[t]


def predictive_upper(ipt: ImpreciseProbabilityTree, f: Gamble, t=None):
    return -predictive_lower(ipt, -f, t)


def predictive_lower_on_cut(ipt: ImpreciseProbabilityTree, f: Gamble, U: Cut) -> Gamble:
    """The gamble on U whose value at u is the predictive lower prevision at u."""
    validate_cut(ipt.tree, U.base, U.members)
    V = backward_values(ipt, f, U.base)
    return Gamble({u: V[u] for u in U.members})


def natural_extension_member(ipt: ImpreciseProbabilityTree, f: Gamble) -> bool:
    """Does ``f`` dominate the terminal gamble of some selection from the root?"""
    low = predictive_lower(ipt, f)
    return low >= (0 if is_exact(low) else -FLOAT_TOL)


def optimal_selection(ipt: ImpreciseProbabilityTree, f: Gamble, t=None, epsilon=0) -> Selection:
    """A selection certifying the predictive lower prevision of ``f`` at ``t``.

    At each non-terminal s it picks the children's backward values recentred
    by V(s). That gamble has local lower prevision exactly zero, and the
    terminal gamble process telescopes to f - P(f|t).

    With ``epsilon > 0`` the choice at depth k below t is raised by
    epsilon / 2^(k+1). Every choice is then strictly desirable, and the
    slack collected along any path stays below epsilon, so
    f - P(f|t) + epsilon >= G still holds.
    """
    if epsilon < 0:
        raise EpsilonNegative(f"epsilon must be non-negative, got {epsilon}")
    tree = ipt.tree
    t = tree.root if t is None else tree.check(t)
    V = backward_values(ipt, f, t)
    d0 = tree._depth[t]
    if epsilon and all_exact([epsilon]):
        epsilon = Fraction(epsilon)
    choices = {}
    for s in tree.subtree(t):
        cs = tree._children[s]
        if cs:
            bump = epsilon / 2 ** (tree._depth[s] - d0 + 1) if epsilon else 0
            choices[s] = Gamble({c: V[c] - V[s] + bump for c in cs})
    return Selection(t, choices)
