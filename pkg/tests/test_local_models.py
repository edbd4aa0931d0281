import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iptree.errors import CarrierMismatch, InvalidModel
from iptree.gambles import Gamble
from iptree.local_models import (
    Credal,
    LinearVacuous,
    Precise,
    Vacuous,
    as_credal,
    local_argmin,
    local_lower,
    local_upper,
    vertex_count,
)
from iptree.oracle import random_gamble, random_local_model

HT = ("h", "t")
d = Fraction(1, 10)


def test_near_fair_coin_bounds():
    m = LinearVacuous.near_fair(HT, d)
    Ih = Gamble.indicator(HT, ["h"])
    assert local_lower(m, Ih) == Fraction(1, 2) - d
    assert local_upper(m, Ih) == Fraction(1, 2) + d
    assert m.delta == 2 * d


def test_vacuous_is_min():
    assert local_lower(Vacuous(("a", "b", "c")), Gamble({"a": 1, "b": 2, "c": 3})) == 1


def test_credal_two_points():
    m = Credal(HT, ({"h": 0.4, "t": 0.6}, {"h": 0.6, "t": 0.4}))
    g = Gamble({"h": 1, "t": 0})
    assert local_lower(m, g) == pytest.approx(0.4, abs=1e-15)
    assert local_upper(m, g) == pytest.approx(0.6, abs=1e-15)
    assert local_argmin(m, g) == 0


def test_constant_is_normalised():
    for m in (Vacuous(HT), Precise(HT, {"h": 0.3, "t": 0.7}), LinearVacuous.near_fair(HT, d)):
        assert local_upper(m, Gamble.constant(HT, 7)) == pytest.approx(7)


def test_as_credal_shapes():
    p = {"h": Fraction(1, 3), "t": Fraction(2, 3)}
    assert as_credal(Precise(HT, p)).extreme_points == (p,)
    assert as_credal(Vacuous(("a", "b"))).extreme_points == ({"a": 1, "b": 0}, {"a": 0, "b": 1})
    pts = as_credal(LinearVacuous.near_fair(HT, d)).extreme_points
    assert pts == ({"h": Fraction(3, 5), "t": Fraction(2, 5)}, {"h": Fraction(2, 5), "t": Fraction(3, 5)})
    assert vertex_count(Precise(HT, p)) == 1


def test_linear_vacuous_end_points():
    p = {"h": Fraction(1, 3), "t": Fraction(2, 3)}
    g = Gamble({"h": 5, "t": -1})
    assert local_lower(LinearVacuous(HT, p, 0), g) == local_lower(Precise(HT, p), g)
    assert local_lower(LinearVacuous(HT, p, 1), g) == local_lower(Vacuous(HT), g)


@pytest.mark.parametrize(
    "build",
    [
        lambda: Precise(HT, {"h": 0.5, "t": 0.6}),
        lambda: Precise(HT, {"h": -0.5, "t": 1.5}),
        lambda: Precise(HT, {"h": 1}),
        lambda: LinearVacuous(HT, {"h": 0.5, "t": 0.5}, 1.5),
        lambda: Credal(HT, ()),
    ],
)
def test_invalid_models(build):
    with pytest.raises(InvalidModel):
        build()


def test_duplicates_are_allowed_and_flagged():
    m = Credal(HT, ({"h": 0.5, "t": 0.5}, {"h": 0.5, "t": 0.5}))
    assert m.has_duplicates


def test_carrier_checked():
    with pytest.raises(CarrierMismatch):
        local_lower(Vacuous(HT), Gamble({"h": 1, "x": 0}))


@settings(max_examples=200)
@given(st.integers(0, 10**6), st.booleans())
def test_coherence_properties(seed, exact):
    rng = random.Random(seed)
    carrier = tuple("abc"[: rng.randint(2, 3)])
    m = random_local_model(rng, carrier, exact=exact)
    f, g = random_gamble(rng, carrier, exact), random_gamble(rng, carrier, exact)
    tol = 0 if exact else 1e-12
    lo, up = local_lower(m, f), local_upper(m, f)
    assert f.min() - tol <= lo <= up + tol and up <= f.max() + tol
    assert local_lower(m, f + g) >= lo + local_lower(m, g) - tol
    lam = Fraction(rng.randint(0, 8), 3) if exact else rng.uniform(0, 3)
    assert abs(local_lower(m, f * lam) - lam * lo) <= 10 * tol
    c = Fraction(rng.randint(-9, 9), 2) if exact else rng.uniform(-3, 3)
    assert abs(local_lower(m, f + c) - (lo + c)) <= 10 * tol
    assert abs(local_lower(as_credal(m), f) - lo) <= tol
