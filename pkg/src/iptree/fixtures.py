"""Small worked instances used by the tests, the CLI selfcheck and the docs."""

from __future__ import annotations

from fractions import Fraction

from .desirability import Assessment
from .gambles import Gamble, TreeProcess
from .inference import ImpreciseProbabilityTree
from .local_models import Credal, LinearVacuous, Precise
from .tree import Cut, build_tree, validate_cut

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def coin_two_flips(p_heads=HALF) -> ImpreciseProbabilityTree:
    """Two successive flips with a precise model; labels show the outcomes so far."""
    children = {
        "?,?": ["h,?", "t,?"],
        "h,?": ["h,h", "h,t"],
        "t,?": ["t,h", "t,t"],
    }
    tree = build_tree("?,?", children)
    q = 1 - p_heads
    locals = {
        s: Precise(cs, {cs[0]: p_heads, cs[1]: q}) for s, cs in children.items()
    }
    return ImpreciseProbabilityTree(tree, locals)


def heads_count(ipt: ImpreciseProbabilityTree) -> Gamble:
    """Number of heads on each terminal path of :func:`coin_two_flips`."""
    return Gamble({w: w.count("h") for w in ipt.tree.terminals})


def outcome_process(ipt: ImpreciseProbabilityTree) -> TreeProcess:
    """The process whose value in a situation is its label."""
    return TreeProcess(ipt.tree, {s: s for s in ipt.tree.situations})


def coins(n: int, delta=Fraction(1, 10)) -> ImpreciseProbabilityTree:
    """Flip up to n coins, stopping at the first tails.

    Situation h_k means k heads in a row, t_k means tails at flip k. Each
    flip has heads probability somewhere in [1/2 - delta, 1/2 + delta].
    """
    if n < 1:
        raise ValueError("need at least one coin")
    children = {f"h{k}": [f"h{k + 1}", f"t{k + 1}"] for k in range(n)}
    tree = build_tree("h0", children, depth_bound=n)
    locals = {s: LinearVacuous.near_fair(cs, delta) for s, cs in children.items()}
    return ImpreciseProbabilityTree(tree, locals)


def coins_cut(ipt: ImpreciseProbabilityTree, k: int) -> Cut:
    """U_k = {t_1, ..., t_k, h_k}."""
    members = [f"t{j}" for j in range(1, k + 1)] + [f"h{k}"]
    return validate_cut(ipt.tree, ipt.tree.root, members)


URN_SPACE = ("r", "g", "b")


def urn_assessment() -> Assessment:
    """Each colour is drawn with probability at least 1/4."""
    return Assessment(
        URN_SPACE,
        [Gamble.indicator(URN_SPACE, [c]) - QUARTER for c in URN_SPACE],
    )


def urn_tree() -> ImpreciseProbabilityTree:
    """One draw from the urn, with the credal hull of the assessment as local model."""
    tree = build_tree("urn", {"urn": list(URN_SPACE)})
    pts = []
    for c in URN_SPACE:
        pts.append({w: (HALF if w == c else QUARTER) for w in URN_SPACE})
    return ImpreciseProbabilityTree(tree, {"urn": Credal(URN_SPACE, tuple(pts))})


def coins_heads_plan(ipt: ImpreciseProbabilityTree, delta=Fraction(1, 10), k: int | None = None):
    """Buy the heads indicator for 1/2 - delta at every flip, up to the cut U_k."""
    from .laws import CommitmentPlan

    n = ipt.tree.depth_bound
    k = n if k is None else k
    commitments = {}
    for j in range(k):
        s = f"h{j}"
        cs = ipt.tree.children(s)
        commitments[s] = (Gamble.indicator(cs, [f"h{j + 1}"]), HALF - delta)
    return CommitmentPlan("h0", coins_cut(ipt, k), commitments, 1)


def two_state_chain_exact(delta=Fraction(1, 5)):
    """The two-state linear-vacuous chain with rational numbers."""
    from .local_models import LinearVacuous
    from .markov import ImpreciseMarkovChain

    X = ("a", "b")
    m = LinearVacuous(X, {"a": HALF, "b": HALF}, delta)
    return ImpreciseMarkovChain(X, m, {x: m for x in X})


def fixture_documents() -> dict:
    """Canonical JSON documents for the worked examples, keyed by file name."""
    from . import serialize as io

    docs = {}
    c3 = coins(3)
    cuts3 = {f"U{k}": coins_cut(c3, k) for k in range(1, 4)}
    docs["coins3.json"] = io.dump_tree(c3, cuts3)
    docs["coins3_h3.json"] = io.dump_gamble(Gamble.indicator(c3.tree.terminals, ["h3"]))
    docs["const5.json"] = io.dump_gamble(Gamble.constant(c3.tree.terminals, 5))
    bad = coins_heads_plan(c3)
    bad.commitments["h1"] = (bad.commitments["h1"][0], HALF)
    docs["coins3_bad_plan.json"] = io.dump_plan(bad)
    c6 = coins(6)
    docs["coins6.json"] = io.dump_tree(c6)
    docs["coins6_plan.json"] = io.dump_plan(coins_heads_plan(c6))
    docs["coins30.json"] = io.dump_tree(coins(30))
    docs["coins30_h30.json"] = io.dump_gamble(Gamble.indicator(coins(30).tree.terminals, ["h30"]))
    urn = urn_tree()
    docs["urn.json"] = io.dump_tree(urn)
    docs["urn_g.json"] = io.dump_gamble(Gamble.indicator(URN_SPACE, ["g"]))
    c2 = coin_two_flips()
    docs["coin2.json"] = io.dump_tree(c2)
    docs["coin2_heads.json"] = io.dump_gamble(heads_count(c2))
    chain = two_state_chain_exact()
    docs["chain2.json"] = io.dump_chain(chain)
    docs["chain2_a.json"] = io.dump_gamble(Gamble({"a": 1, "b": 0}), on="states")
    return docs


def write_fixture_files(directory) -> list:
    from pathlib import Path

    from .serialize import dumps

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in fixture_documents().items():
        (d / name).write_text(dumps(doc), encoding="utf-8")
        written.append(d / name)
    return written
