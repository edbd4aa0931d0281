import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iptree.desirability import (
    Assessment,
    avoids_partial_loss,
    conditional_lower,
    conditional_lower_on_partition,
    conditional_upper,
    lower_prevision,
    natural_extension_contains,
)
from iptree.errors import CarrierMismatch, EmptyConditioningEvent, NotAPartition
from iptree.fixtures import URN_SPACE, urn_assessment
from iptree.gambles import Gamble
from iptree.oracle import random_gamble

RGB = URN_SPACE
Ig = Gamble.indicator(RGB, ["g"])


def test_urn_numbers():
    a = urn_assessment()
    assert lower_prevision(a, Ig) == Fraction(1, 4)
    assert conditional_lower(a, Ig, ["r", "g"]) == Fraction(1, 3)
    assert conditional_lower(a, Ig, ["b"]) == 0
    cond = conditional_lower_on_partition(a, Ig, [["b"], ["r", "g"]])
    assert cond.as_dict() == {"r": Fraction(1, 3), "g": Fraction(1, 3), "b": 0}
    # the iterated value drops strictly below the direct one
    assert lower_prevision(a, cond) == Fraction(1, 6) < lower_prevision(a, Ig)


def test_urn_in_float_mode():
    a = Assessment(RGB, [Gamble.indicator(RGB, [c]) - 0.25 for c in RGB])
    assert abs(lower_prevision(a, Ig) - 0.25) <= 1e-12
    assert abs(conditional_lower(a, Ig, ["r", "g"]) - 1 / 3) <= 1e-12


def test_membership():
    a = urn_assessment()
    assert natural_extension_contains(a, Ig - Fraction(1, 4))
    assert natural_extension_contains(a, Gamble({"r": 0, "g": 2, "b": Fraction(1, 3)}))
    assert not natural_extension_contains(a, Ig - Fraction(26, 100))
    with pytest.raises(CarrierMismatch):
        natural_extension_contains(a, Gamble({"r": 1}))


def test_partial_loss():
    assert avoids_partial_loss(urn_assessment())
    assert not avoids_partial_loss(Assessment(RGB, [Gamble.constant(RGB, -1)]))
    # I_r - 1 is <= 0 everywhere and -1 on {g, b}: a partial loss by itself
    assert not avoids_partial_loss(Assessment(RGB, [Gamble.indicator(RGB, ["r"]) - 1]))
    assert avoids_partial_loss(Assessment(RGB, []))


def test_conditioning_edge_cases():
    a = urn_assessment()
    with pytest.raises(EmptyConditioningEvent):
        conditional_lower(a, Ig, [])
    with pytest.raises(NotAPartition):
        conditional_lower_on_partition(a, Ig, [["r", "g"], ["g", "b"]])
    with pytest.raises(NotAPartition):
        conditional_lower_on_partition(a, Ig, [["r"]])
    f = Gamble({"r": 2, "g": -1, "b": 5})
    assert conditional_lower_on_partition(a, f, [["r"], ["g"], ["b"]]) == f
    assert conditional_lower(a, Gamble.constant(RGB, 7), ["r", "b"]) == 7
    # no assessment at all: vacuous
    assert lower_prevision(Assessment(RGB, []), f) == -1
    # an assessment incurring partial loss makes every price acceptable
    bad = Assessment(RGB, [Gamble.constant(RGB, -1)])
    assert conditional_lower(bad, f, RGB) == math.inf


def test_urn_closed_form():
    a = urn_assessment()
    rng = random.Random(2)
    for _ in range(100):
        f = random_gamble(rng, RGB, exact=True)
        expected = Fraction(3, 4) * sum(f.values()) / 3 + Fraction(1, 4) * f.min()
        assert lower_prevision(a, f) == expected


def _coherent_assessment(rng, space, exact):
    """Gambles with non-negative expectation under one full-support mass."""
    ks = [rng.randint(1, 6) for _ in space]
    p = {w: Fraction(k, sum(ks)) for w, k in zip(space, ks)}
    gs = []
    for _ in range(rng.randint(1, 3)):
        g = random_gamble(rng, space, exact=True)
        gs.append(g - sum(p[w] * g[w] for w in space))
    if not exact:
        gs = [Gamble({w: float(v) for w, v in g.items()}) for g in gs]
    return Assessment(space, gs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_lower_prevision_properties(seed, exact):
    rng = random.Random(seed)
    space = tuple("abcd"[: rng.randint(2, 4)])
    a = _coherent_assessment(rng, space, exact)
    assert avoids_partial_loss(a)
    f, g = random_gamble(rng, space, exact), random_gamble(rng, space, exact)
    B = [w for w in space if rng.random() < 0.7] or [space[0]]
    tol = 0 if exact else 1e-9
    lo = conditional_lower(a, f, B)
    up = conditional_upper(a, f, B)
    fb = [f[w] for w in B]
    assert min(fb) - tol <= lo <= up + tol <= max(fb) + 2 * tol
    assert conditional_lower(a, f + g, B) >= lo + conditional_lower(a, g, B) - tol
    assert abs(conditional_lower(a, f * 3, B) - 3 * lo) <= 10 * tol
    assert abs(conditional_lower(a, f + 2, B) - (lo + 2)) <= 10 * tol
    assert conditional_lower(a, f.minimum(g), B) <= lo + tol
    assert abs(up + conditional_lower(a, -f, B)) <= tol
    # conglomerative inequality on a two-block partition
    blocks = [list(space[:1]), list(space[1:])]
    cond = conditional_lower_on_partition(a, f, blocks)
    assert lower_prevision(a, f) >= lower_prevision(a, cond) - tol
