import random

import pytest

from iptree.errors import (
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
from iptree.fixtures import coin_two_flips, coins, coins_cut
from iptree.oracle import random_cut, random_tree
from iptree.tree import (
    build_tree,
    children_cut,
    count_cuts,
    cut_of,
    cut_precedes,
    distance,
    iter_cuts,
    paths_through,
    precedes,
    strictly_before_cut,
    strictly_precedes,
    terminal_cut,
    trivial_cut,
    validate_cut,
)


def test_two_coin_flips_has_seven_situations():
    tree = coin_two_flips().tree
    assert len(tree) == 7
    assert tree.terminals == ("h,h", "h,t", "t,h", "t,t")
    assert tree.children("?,?") == ("h,?", "t,?")


def test_single_node_tree_is_its_own_sample_space():
    tree = build_tree("only", {})
    assert tree.terminals == ("only",)
    assert tree.nonterminals == ()
    assert paths_through(tree, "only") == ("only",)


def test_coins_three():
    tree = coins(3).tree
    assert len(tree) == 7
    assert set(tree.terminals) == {"t1", "t2", "t3", "h3"}
    assert tree.depth_bound == 3


@pytest.mark.parametrize(
    "children, err",
    [
        ({"r": ["a"]}, SingletonMoveSpace),
        ({"r": ["a", "a"]}, DuplicateId),
        ({"r": ["a", "b"], "a": ["b", "c"]}, DuplicateId),
        ({"r": ["a", "b"], "a": ["r", "c"]}, Cycle),
        ({"r": ["a", "b"], "z": ["x", "y"]}, Disconnected),
    ],
)
def test_build_tree_rejects(children, err):
    with pytest.raises(err):
        build_tree("r", children)


def test_depth_bound_enforced():
    with pytest.raises(DepthBoundExceeded):
        build_tree("r", {"r": ["a", "b"], "a": ["c", "d"]}, depth_bound=1)


def test_precedence():
    tree = coin_two_flips().tree
    assert precedes(tree, "?,?", "h,t")
    assert precedes(tree, "h,?", "h,?")
    assert not strictly_precedes(tree, "h,?", "h,?")
    assert not precedes(tree, "t,?", "h,t")
    assert not precedes(tree, "h,t", "h,?")
    with pytest.raises(UnknownId):
        precedes(tree, "?,?", "nope")


def test_paths_and_distance():
    tree = coin_two_flips().tree
    assert paths_through(tree, "h,?") == ("h,h", "h,t")
    assert paths_through(tree, "t,t") == ("t,t",)
    assert distance(tree, "?,?", "t,h") == 2
    assert distance(tree, "h,?", "h,?") == 0
    with pytest.raises(NotADescendant):
        distance(tree, "h,?", "t,h")


def test_cuts():
    ipt = coins(3)
    tree = ipt.tree
    U1 = coins_cut(ipt, 1)
    assert set(U1.members) == {"t1", "h1"}
    assert children_cut(tree, "h0").members == ("h1", "t1")
    assert set(terminal_cut(tree).members) == set(tree.terminals)
    assert trivial_cut(tree, "h1").members == ("h1",)
    with pytest.raises(TerminalSituation):
        children_cut(tree, "t1")
    with pytest.raises(NotAPartition):
        validate_cut(tree, "h0", ["h1"])
    with pytest.raises(NotAPartition):
        validate_cut(tree, "h0", ["h1", "h2", "t1"])
    with pytest.raises(NotAPartition):
        validate_cut(tree, "h1", ["t1", "h2", "t2"])
    assert cut_of(tree, "h3", U1) == "h1"
    assert cut_of(tree, "h0", U1) is None
    assert strictly_before_cut(tree, "h0", U1)
    assert not strictly_before_cut(tree, "h1", U1)
    assert cut_precedes(tree, U1, coins_cut(ipt, 2))
    assert not cut_precedes(tree, coins_cut(ipt, 2), U1)


def test_cut_enumeration_count_matches():
    tree = coin_two_flips().tree
    cuts = list(iter_cuts(tree, tree.root))
    # {root}, or for each half either itself or its two leaves
    assert len(cuts) == count_cuts(tree, tree.root) == 1 + 2 * 2
    assert cuts[0].members == (tree.root,)
    for U in cuts:
        validate_cut(tree, U.base, U.members)


def test_random_cuts_are_partitions():
    rng = random.Random(5)
    for _ in range(100):
        tree = random_tree(rng)
        U = random_cut(rng, tree)
        hits = [w for u in U.members for w in paths_through(tree, u)]
        assert sorted(hits) == sorted(tree.terminals)
