"""JSON documents for trees, gambles, chains, plans and selections.

Every document carries ``"version": 1`` and a ``"kind"``. Masses are arrays
aligned with the children order of their node (or the state order of a
chain). Numbers may be JSON numbers or strings such as ``"1/4"`` or
``"0.1"``; with ``exact=True`` all of them become Fractions (floats are read
by their decimal representation), otherwise floats.

:func:`dumps` writes the canonical form: two-space indent, keys in a fixed
order, exact numbers as integers or ``"p/q"`` strings. Parsing a canonical
file in the mode it was written in and dumping it again gives the same bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from ._numeric import is_exact, normalize, to_fraction
from .errors import IPTreeError, SpecParseError
from .gambles import Gamble, embed_from_cut
from .inference import ImpreciseProbabilityTree, Selection
from .laws import CommitmentPlan
from .local_models import Credal, LinearVacuous, LocalModel, Precise, Vacuous
from .markov import ImpreciseMarkovChain
from .tree import Cut, EventTree, build_tree, terminal_cut, validate_cut

VERSION = 1


# ---------------------------------------------------------------------------
# numbers


def parse_number(x, exact: bool, where: str):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise SpecParseError(f"expected a number, got {x!r}", where)
    try:
        if exact:
            return normalize(to_fraction(x))
        if isinstance(x, str):
            return float(Fraction(x.strip()))
        return float(x)
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"cannot read {x!r} as a number", where) from None


def dump_number(x):
    if is_exact(x):
        x = normalize(Fraction(x))
        return x if isinstance(x, int) else f"{x.numerator}/{x.denominator}"
    return float(x)


# ---------------------------------------------------------------------------
# helpers


def _get(d: dict, key: str, where: str, kind=None):
    if not isinstance(d, dict):
        raise SpecParseError("expected an object", where)
    if key not in d:
        raise SpecParseError(f"missing field {key!r}", where)
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SpecParseError(f"field {key!r} must be {names}", where)
    return v


def _header(doc, kind: str):
    if not isinstance(doc, dict):
        raise SpecParseError("document must be a JSON object", "$")
    v = doc.get("version")
    if v != VERSION:
        raise SpecParseError(f"unsupported version {v!r} (expected {VERSION})", "$.version")
    k = doc.get("kind")
    if k != kind:
        raise SpecParseError(f"expected kind {kind!r}, got {k!r}", "$.kind")


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def load_file(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(str(exc.strerror or exc), str(path)) from None
    return loads(text)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# local models


def parse_model(d, carrier: tuple, exact: bool, where: str) -> LocalModel:
    typ = _get(d, "type", where, str)

    def mass(arr, w):
        if not isinstance(arr, list) or len(arr) != len(carrier):
            raise SpecParseError(f"expected {len(carrier)} masses aligned with {list(carrier)}", w)
        return {c: parse_number(x, exact, f"{w}[{i}]") for i, (c, x) in enumerate(zip(carrier, arr))}

    try:
        if typ == "vacuous":
            return Vacuous(carrier)
        if typ == "precise":
            return Precise(carrier, mass(_get(d, "mass", where), where + ".mass"))
        if typ == "linvac":
            delta = parse_number(_get(d, "delta", where), exact, where + ".delta")
            return LinearVacuous(carrier, mass(_get(d, "mass", where), where + ".mass"), delta)
        if typ == "credal":
            pts = _get(d, "points", where, list)
            return Credal(carrier, tuple(mass(p, f"{where}.points[{i}]") for i, p in enumerate(pts)))
    except SpecParseError:
        raise
    except (IPTreeError, TypeError, ValueError) as exc:
        raise SpecParseError(str(exc), where) from None
    raise SpecParseError(f"unknown model type {typ!r}", where + ".type")


def dump_model(m: LocalModel, carrier: tuple) -> dict:
    if isinstance(m, Vacuous):
        return {"type": "vacuous"}
    if isinstance(m, Precise):
        return {"type": "precise", "mass": [dump_number(m.mass[c]) for c in carrier]}
    if isinstance(m, LinearVacuous):
        return {
            "type": "linvac",
            "mass": [dump_number(m.mass[c]) for c in carrier],
            "delta": dump_number(m.delta),
        }
    if isinstance(m, Credal):
        return {"type": "credal", "points": [[dump_number(p[c]) for c in carrier] for p in m.extreme_points]}
    raise TypeError(f"unknown local model {m!r}")


# ---------------------------------------------------------------------------
# trees


class TreeDocument:
    """A parsed tree document: the imprecise probability tree and its named cuts."""

    def __init__(self, ipt: ImpreciseProbabilityTree, cuts: dict | None = None):
        self.ipt = ipt
        self.cuts = dict(cuts or {})

    @property
    def tree(self) -> EventTree:
        return self.ipt.tree


def parse_tree(doc, exact: bool = False) -> TreeDocument:
    _header(doc, "tree")
    root = _get(doc, "root", "$", str)
    nodes = _get(doc, "nodes", "$", dict)
    children = {}
    for s, nd in nodes.items():
        where = f"$.nodes.{s}"
        if not isinstance(nd, dict):
            raise SpecParseError("node must be an object", where)
        cs = nd.get("children", [])
        if not isinstance(cs, list) or not all(isinstance(c, str) for c in cs):
            raise SpecParseError("children must be a list of ids", where + ".children")
        if cs:
            children[s] = cs
    for s, cs in children.items():
        for c in cs:
            if c not in nodes:
                raise SpecParseError(f"child {c!r} has no node entry", f"$.nodes.{s}.children")
    for s in nodes:
        if s != root and not any(s in cs for cs in children.values()):
            raise SpecParseError(f"node {s!r} is not reachable from the root", f"$.nodes.{s}")
    try:
        tree = build_tree(root, children, depth_bound=doc.get("depth_bound"))
    except IPTreeError as exc:
        raise SpecParseError(str(exc), "$.nodes") from None
    locals = {}
    for s in tree.nonterminals:
        where = f"$.nodes.{s}"
        locals[s] = parse_model(_get(nodes[s], "model", where), tree.children(s), exact, where + ".model")
    for s in tree.terminals:
        if "model" in nodes[s]:
            raise SpecParseError("terminal situations take no model", f"$.nodes.{s}.model")
    ipt = ImpreciseProbabilityTree(tree, locals)
    cuts = {}
    for name, cd in (doc.get("cuts") or {}).items():
        where = f"$.cuts.{name}"
        base = cd.get("base", root) if isinstance(cd, dict) else root
        members = _get(cd, "members", where, list) if isinstance(cd, dict) else cd
        try:
            cuts[name] = validate_cut(tree, base, members)
        except IPTreeError as exc:
            raise SpecParseError(str(exc), where) from None
    return TreeDocument(ipt, cuts)


def dump_tree(ipt: ImpreciseProbabilityTree, cuts: dict | None = None) -> dict:
    tree = ipt.tree
    nodes = {}
    for s in tree.situations:
        cs = tree.children(s)
        nd: dict = {"children": list(cs)}
        if cs:
            nd["model"] = dump_model(ipt.locals[s], cs)
        nodes[s] = nd
    doc = {"version": VERSION, "kind": "tree", "root": tree.root}
    if tree.depth_bound is not None:
        doc["depth_bound"] = tree.depth_bound
    doc["nodes"] = nodes
    if cuts:
        doc["cuts"] = {name: {"base": U.base, "members": list(U.members)} for name, U in cuts.items()}
    return doc


# ---------------------------------------------------------------------------
# gambles


def parse_gamble_values(doc, exact: bool) -> tuple[str, dict]:
    _header(doc, "gamble")
    on = _get(doc, "on", "$", str)
    vals = _get(doc, "values", "$", dict)
    return on, {k: parse_number(v, exact, f"$.values.{k}") for k, v in vals.items()}


def parse_gamble(doc, exact: bool = False, tree_doc: TreeDocument | None = None) -> Gamble:
    """A gamble on terminals, on a named cut (lifted to terminals), or on states."""
    on, vals = parse_gamble_values(doc, exact)
    if on in ("terminals", "states") or tree_doc is None:
        return Gamble(vals)
    if on not in tree_doc.cuts:
        raise SpecParseError(f"unknown cut {on!r}; known cuts: {sorted(tree_doc.cuts)}", "$.on")
    U = tree_doc.cuts[on]
    return embed_from_cut(tree_doc.tree, Gamble(vals), U)


def dump_gamble(g: Gamble, on: str = "terminals") -> dict:
    return {
        "version": VERSION,
        "kind": "gamble",
        "on": on,
        "values": {str(w): dump_number(v) for w, v in g.items()},
    }


# ---------------------------------------------------------------------------
# chains


def parse_chain(doc, exact: bool = False) -> ImpreciseMarkovChain:
    _header(doc, "chain")
    states = _get(doc, "states", "$", list)
    if not all(isinstance(x, str) for x in states):
        raise SpecParseError("states must be strings", "$.states")
    X = tuple(states)
    initial = parse_model(_get(doc, "initial", "$"), X, exact, "$.initial")
    trans = _get(doc, "transitions", "$", dict)
    per = {}
    for x in X:
        if x not in trans:
            raise SpecParseError(f"no transition model for state {x!r}", "$.transitions")
        per[x] = parse_model(trans[x], X, exact, f"$.transitions.{x}")
    extra = sorted(set(trans) - set(X))
    if extra:
        raise SpecParseError(f"transition models for unknown states {extra}", "$.transitions")
    return ImpreciseMarkovChain(X, initial, per)


def dump_chain(chain: ImpreciseMarkovChain) -> dict:
    X = chain.states
    return {
        "version": VERSION,
        "kind": "chain",
        "states": list(X),
        "initial": dump_model(chain.initial, X),
        "transitions": {x: dump_model(chain.per_state[x], X) for x in X},
    }


# ---------------------------------------------------------------------------
# plans


def parse_plan(doc, tree_doc: TreeDocument, exact: bool = False) -> CommitmentPlan:
    _header(doc, "plan")
    tree = tree_doc.tree
    base = doc.get("base", tree.root)
    if not isinstance(base, str) or base not in tree:
        raise SpecParseError(f"unknown base situation {base!r}", "$.base")
    hz = _get(doc, "horizon", "$")
    if isinstance(hz, str):
        if hz == "terminals":
            U = terminal_cut(tree, base)
        elif hz in tree_doc.cuts:
            U = tree_doc.cuts[hz]
        else:
            raise SpecParseError(f"unknown cut {hz!r}", "$.horizon")
    elif isinstance(hz, list):
        try:
            U = validate_cut(tree, base, hz)
        except IPTreeError as exc:
            raise SpecParseError(str(exc), "$.horizon") from None
    else:
        raise SpecParseError("horizon must be a cut name or a list of situations", "$.horizon")
    comm = {}
    for s, cd in _get(doc, "commitments", "$", dict).items():
        where = f"$.commitments.{s}"
        if s not in tree or tree.is_terminal(s):
            raise SpecParseError(f"{s!r} is not a non-terminal situation", where)
        gv = _get(cd, "gamble", where, dict)
        h = Gamble({c: parse_number(v, exact, f"{where}.gamble.{c}") for c, v in gv.items()})
        m = parse_number(_get(cd, "price", where), exact, where + ".price")
        comm[s] = (h, m)
    B = doc.get("B")
    B = None if B is None else parse_number(B, exact, "$.B")
    return CommitmentPlan(base, U, comm, B)


def dump_plan(plan: CommitmentPlan) -> dict:
    doc = {"version": VERSION, "kind": "plan", "base": plan.base, "horizon": list(plan.horizon.members)}
    doc["B"] = None if plan.B is None else dump_number(plan.B)
    doc["commitments"] = {
        s: {"gamble": {str(c): dump_number(v) for c, v in h.items()}, "price": dump_number(m)}
        for s, (h, m) in plan.commitments.items()
    }
    return doc


# ---------------------------------------------------------------------------
# selections


def dump_selection(sigma: Selection) -> dict:
    return {
        "version": VERSION,
        "kind": "selection",
        "base": sigma.base,
        "choices": {s: {str(c): dump_number(v) for c, v in g.items()} for s, g in sigma.choices.items()},
    }


def parse_selection(doc, exact: bool = False) -> Selection:
    _header(doc, "selection")
    base = _get(doc, "base", "$", str)
    choices = {}
    for s, gv in _get(doc, "choices", "$", dict).items():
        choices[s] = Gamble({c: parse_number(v, exact, f"$.choices.{s}.{c}") for c, v in gv.items()})
    return Selection(base, choices)
