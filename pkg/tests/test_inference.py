import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iptree.errors import CarrierMismatch, EpsilonNegative, InvalidModel, NotAPartition, UnknownId
from iptree.fixtures import coin_two_flips, coins, coins_cut, heads_count
from iptree.gambles import Gamble, embed_from_cut, project_to_cut
from iptree.inference import (
    ImpreciseProbabilityTree,
    natural_extension_member,
    optimal_selection,
    predictive_lower,
    predictive_lower_on_cut,
    predictive_upper,
)
from iptree.local_models import Precise, Vacuous, local_lower
from iptree.oracle import call_off_selection, gamble_process, random_cut, random_gamble, random_ipt
from iptree.tree import Cut, children_cut, paths_through, trivial_cut

HALF = Fraction(1, 2)


def indicator(ipt, w):
    return Gamble.indicator(ipt.tree.terminals, [w])


@pytest.mark.parametrize("delta", [Fraction(0), Fraction(1, 10), Fraction(1, 4)])
def test_coins_closed_form(delta):
    for n in range(1, 7):
        ipt = coins(n, delta)
        f = indicator(ipt, f"h{n}")
        for k in range(n):
            assert predictive_lower(ipt, f, f"h{k}") == (HALF - delta) ** (n - k)
            assert predictive_upper(ipt, f, f"h{k}") == (HALF + delta) ** (n - k)
        assert predictive_lower(ipt, f, f"h{n}") == 1
        for k in range(1, n + 1):
            assert predictive_lower(ipt, f, f"t{k}") == 0


def test_coins_three_float():
    ipt = coins(3, 0.1)
    assert predictive_lower(ipt, indicator(ipt, "h3")) == pytest.approx(0.064, abs=1e-15)


def test_constant_and_vacuous():
    rng = random.Random(0)
    for _ in range(20):
        ipt = random_ipt(rng)
        for t in ipt.tree.situations:
            assert predictive_lower(ipt, Gamble.constant(ipt.tree.terminals, 3), t) == pytest.approx(3, abs=1e-12)
        vac = ImpreciseProbabilityTree(ipt.tree, {s: Vacuous(ipt.tree.children(s)) for s in ipt.tree.nonterminals})
        f = random_gamble(rng, ipt.tree.terminals)
        for t in ipt.tree.situations:
            vals = [f[w] for w in paths_through(ipt.tree, t)]
            assert predictive_upper(vac, f, t) == max(vals)
            assert predictive_lower(vac, f, t) == min(vals)
            sigma = optimal_selection(vac, f, t)
            _, G = gamble_process(vac, sigma)
            assert all(f[w] - min(vals) >= G[w] - 1e-12 for w in G)


def test_only_the_subtree_matters():
    ipt = coins(3, Fraction(1, 10))
    f = Gamble({"h3": 1, "t3": 2, "t2": -7, "t1": 100})
    g = Gamble({"h3": 1, "t3": 2, "t2": 0, "t1": 0})
    assert predictive_lower(ipt, f, "h2") == predictive_lower(ipt, g, "h2")
    # a gamble defined only on the paths through h2 is enough there
    assert predictive_lower(ipt, Gamble({"h3": 1, "t3": 2}), "h2") == predictive_lower(ipt, f, "h2")
    with pytest.raises(CarrierMismatch):
        predictive_lower(ipt, Gamble({"h3": 1, "t3": 2}), "h1")
    with pytest.raises(UnknownId):
        predictive_lower(ipt, f, "nowhere")


def test_tree_validation():
    tree = coins(2).tree
    with pytest.raises(InvalidModel):
        ImpreciseProbabilityTree(tree, {"h0": Vacuous(("h1", "t1"))})
    with pytest.raises(CarrierMismatch):
        ImpreciseProbabilityTree(tree, {"h0": Vacuous(("h1", "t1")), "h1": Vacuous(("h2", "x"))})


def test_on_cut():
    d = Fraction(1, 10)
    ipt = coins(3, d)
    U1 = coins_cut(ipt, 1)
    g = predictive_lower_on_cut(ipt, indicator(ipt, "h3"), U1)
    assert g.as_dict() == {"h1": (HALF - d) ** 2, "t1": 0}
    t = trivial_cut(ipt.tree, "h1")
    assert predictive_lower_on_cut(ipt, indicator(ipt, "h3"), t).as_dict() == {"h1": (HALF - d) ** 2}
    c2 = coin_two_flips()
    by_half = predictive_lower_on_cut(c2, heads_count(c2), children_cut(c2.tree, "?,?"))
    assert by_half.as_dict() == {"h,?": Fraction(3, 2), "t,?": HALF}
    with pytest.raises(NotAPartition):
        predictive_lower_on_cut(ipt, indicator(ipt, "h3"), Cut("h0", ("h1",)))


def test_membership_boundary():
    ipt = coins(3, Fraction(1, 10))
    f = indicator(ipt, "h3")
    assert natural_extension_member(ipt, f - Fraction(64, 1000))
    assert not natural_extension_member(ipt, f - Fraction(7, 100))
    assert natural_extension_member(ipt, Gamble.constant(ipt.tree.terminals, 0))
    sigma = optimal_selection(ipt, f - Fraction(64, 1000))
    _, G = gamble_process(ipt, sigma)
    assert all(f[w] - Fraction(64, 1000) >= G[w] for w in G)


def test_optimal_selection_two_coins():
    d = Fraction(1, 10)
    ipt = coins(2, d)
    f = indicator(ipt, "h2")
    sigma = optimal_selection(ipt, f)
    assert sigma.choices["h0"].as_dict() == {"h1": Fraction(24, 100), "t1": Fraction(-16, 100)}
    assert sigma.choices["h1"].as_dict() == {"h2": Fraction(6, 10), "t2": Fraction(-4, 10)}
    _, G = gamble_process(ipt, sigma)
    low = predictive_lower(ipt, f)
    assert low == Fraction(16, 100)
    assert all(f[w] - low == G[w] for w in G)  # telescopes exactly
    with pytest.raises(EpsilonNegative):
        optimal_selection(ipt, f, epsilon=-1)


def test_constant_gamble_gives_zero_selection():
    ipt = coins(3)
    sigma = optimal_selection(ipt, Gamble.constant(ipt.tree.terminals, 2), "h1")
    assert all(v == 0 for g in sigma.choices.values() for v in g.values())


def _instance(seed, exact):
    rng = random.Random(seed)
    ipt = random_ipt(rng, exact=exact)
    f = random_gamble(rng, ipt.tree.terminals, exact)
    g = random_gamble(rng, ipt.tree.terminals, exact)
    t = rng.choice(ipt.tree.situations)
    return rng, ipt, f, g, t


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_prevision_properties(seed, exact):
    rng, ipt, f, g, t = _instance(seed, exact)
    tol = 0 if exact else 1e-9
    lo, up = predictive_lower(ipt, f, t), predictive_upper(ipt, f, t)
    vals = [f[w] for w in paths_through(ipt.tree, t)]
    assert min(vals) - tol <= lo <= up + tol and up <= max(vals) + tol
    assert predictive_lower(ipt, f + g, t) >= lo + predictive_lower(ipt, g, t) - tol
    lam = Fraction(rng.randint(0, 9), 4) if exact else rng.uniform(0, 3)
    assert abs(predictive_lower(ipt, f * lam, t) - lam * lo) <= tol
    c = Fraction(rng.randint(-9, 9), 4) if exact else rng.uniform(-2, 2)
    assert abs(predictive_lower(ipt, f + c, t) - (lo + c)) <= tol
    assert predictive_lower(ipt, f.minimum(g), t) <= lo + tol
    if ipt.tree.is_terminal(t):
        assert lo == up == f[t]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_iterated_lower_prevision_equality(seed, exact):
    rng, ipt, f, _, t = _instance(seed, exact)
    U = random_cut(rng, ipt.tree, t)
    inner = predictive_lower_on_cut(ipt, f, U)
    outer = predictive_lower(ipt, embed_from_cut(ipt.tree, inner, U), t)
    if exact:
        assert outer == predictive_lower(ipt, f, t)
    else:
        assert outer == pytest.approx(predictive_lower(ipt, f, t), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_separate_coherence(seed):
    rng, ipt, f, _, t = _instance(seed, True)
    tree = ipt.tree
    assert predictive_lower(ipt, Gamble.indicator(tree.terminals, paths_through(tree, t)), t) == 1
    U = random_cut(rng, tree, t)
    gU = Gamble({u: Fraction(rng.randint(0, 12), 4) for u in U.members})
    g = embed_from_cut(tree, gU, U)
    full = Gamble({w: g[w] if w in g else 0 for w in tree.terminals})
    assert predictive_lower_on_cut(ipt, full, U) == gU
    assert predictive_lower_on_cut(ipt, f + full, U) == predictive_lower_on_cut(ipt, f, U) + gU
    assert predictive_lower_on_cut(ipt, f * full, U) == predictive_lower_on_cut(ipt, f, U) * gU
    assert project_to_cut(tree, g, U) == gU


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_optimal_selection_guarantee(seed, exact):
    rng, ipt, f, _, t = _instance(seed, exact)
    low = predictive_lower(ipt, f, t)
    sigma = optimal_selection(ipt, f, t)
    _, G = gamble_process(ipt, sigma)
    tol = 0 if exact else 1e-9
    assert all(f[w] - low >= G[w] - tol for w in G)
    assert min(f[w] - G[w] for w in G) == pytest.approx(low, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_called_off_selection_keeps_guarantee_for_cut_measurable_gambles(seed):
    rng, ipt, _, _, t = _instance(seed, True)
    tree = ipt.tree
    U = random_cut(rng, tree, t)
    fU = Gamble({u: Fraction(rng.randint(-8, 8), 2) for u in U.members})
    f = embed_from_cut(tree, fU, U)
    low = predictive_lower(ipt, f, t)
    sigma = call_off_selection(tree, optimal_selection(ipt, f, t), U)
    _, G = gamble_process(ipt, sigma)
    assert all(f[w] - low >= G[w] for w in G)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_strictly_desirable_choices_reach_the_same_value(seed, exact):
    # open local cones give the same predictive lower prevision: any eps > 0 is attainable
    rng, ipt, f, _, t = _instance(seed, exact)
    low = predictive_lower(ipt, f, t)
    eps = Fraction(1, 1000) if exact else 1e-3
    sigma = optimal_selection(ipt, f, t, epsilon=eps)
    assert all(local_lower(ipt.locals[s], g) > 0 for s, g in sigma.choices.items())
    _, G = gamble_process(ipt, sigma)
    tol = 0 if exact else 1e-9
    assert all(f[w] - low + eps >= G[w] - tol for w in G)
    assert min(f[w] - G[w] for w in G) > low - eps - tol
