"""Local imprecise belief models on finite move spaces.

Four variants share one interface: :func:`local_lower`, :func:`local_upper`
and :func:`as_credal`. Masses are mappings move -> probability; keep them
as Fractions for exact results.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ._numeric import FLOAT_TOL, all_exact, check_real
from .errors import CarrierMismatch, InvalidModel
from .gambles import Gamble

log = logging.getLogger(__name__)


def _check_mass(carrier: tuple, mass: Mapping) -> dict:
    mass = dict(mass)
    if set(mass) != set(carrier):
        raise InvalidModel(f"mass is defined on {sorted(map(str, mass))}, carrier is {list(carrier)}")
    for w, p in mass.items():
        check_real(p, f"mass at {w!r}")
        if p < 0:
            raise InvalidModel(f"negative mass {p} at {w!r}")
    total = sum(mass.values())
    ok = total == 1 if all_exact(mass.values()) else abs(total - 1) <= FLOAT_TOL
    if not ok:
        raise InvalidModel(f"masses sum to {total}, not 1")
    return {w: mass[w] for w in carrier}


def expectation(mass: Mapping, g: Gamble):
    return sum(p * g[w] for w, p in mass.items())


class LocalModel:
    """Base class; subclasses fix the variant."""

    carrier: tuple

    def _check_gamble(self, g: Gamble):
        if set(g.carrier) != set(self.carrier):
            raise CarrierMismatch(
                f"gamble carrier {list(g.carrier)} does not match model carrier {list(self.carrier)}"
            )


@dataclass(frozen=True)
class Vacuous(LocalModel):
    carrier: tuple

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))


@dataclass(frozen=True)
class Precise(LocalModel):
    carrier: tuple
    mass: Mapping = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "mass", _check_mass(self.carrier, self.mass))


@dataclass(frozen=True)
class LinearVacuous(LocalModel):
    """Contamination of a precise model: (1 - delta) E_mass + delta min."""

    carrier: tuple
    mass: Mapping = field(hash=False)
    delta: object = 0

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "mass", _check_mass(self.carrier, self.mass))
        check_real(self.delta, "delta")
        if not 0 <= self.delta <= 1:
            raise InvalidModel(f"delta must lie in [0, 1], got {self.delta}")

    @classmethod
    def near_fair(cls, carrier: Sequence, half_width) -> "LinearVacuous":
        """Two-outcome model whose probabilities lie in [1/2 - w, 1/2 + w].

        This is the uniform centre contaminated by ``2 * half_width``.
        """
        carrier = tuple(carrier)
        if len(carrier) != 2:
            raise InvalidModel("near_fair needs exactly two outcomes")
        half = Fraction(1, 2) if all_exact([half_width]) else 0.5
        return cls(carrier, {w: half for w in carrier}, 2 * half_width)


@dataclass(frozen=True)
class Credal(LocalModel):
    """Finitely generated credal set given by its extreme points."""

    carrier: tuple
    extreme_points: tuple = field(hash=False)

    def __post_init__(self):
        carrier = tuple(self.carrier)
        object.__setattr__(self, "carrier", carrier)
        pts = tuple(_check_mass(carrier, p) for p in self.extreme_points)
        if not pts:
            raise InvalidModel("credal set needs at least one extreme point")
        object.__setattr__(self, "extreme_points", pts)
        if self.has_duplicates:
            log.debug("credal set on %s lists a point more than once", carrier)

    @property
    def has_duplicates(self) -> bool:
        seen = [tuple(p[w] for w in self.carrier) for p in self.extreme_points]
        return len(set(seen)) != len(seen)


def local_lower(model: LocalModel, g: Gamble):
    """Lower prevision of ``g`` under the local model."""
    model._check_gamble(g)
    if isinstance(model, Vacuous):
        return g.min()
    if isinstance(model, Precise):
        return expectation(model.mass, g)
    if isinstance(model, LinearVacuous):
        d = model.delta
        return (1 - d) * expectation(model.mass, g) + d * g.min()
    if isinstance(model, Credal):
        return min(expectation(p, g) for p in model.extreme_points)
    raise TypeError(f"unknown local model {model!r}")


def local_argmin(model: LocalModel, g: Gamble) -> int:
    """Index of the first extreme point of ``as_credal(model)`` attaining the lower prevision."""
    pts = as_credal(model).extreme_points
    vals = [expectation(p, g) for p in pts]
    return vals.index(min(vals))


def local_upper(model: LocalModel, g: Gamble):
    return -local_lower(model, -g)


def _degenerate(carrier: tuple, w, one) -> dict:
    zero = one - one
    return {v: (one if v == w else zero) for v in carrier}


def as_credal(model: LocalModel) -> Credal:
    """Extreme-point representation generating the same lower prevision."""
    if isinstance(model, Credal):
        return model
    if isinstance(model, Precise):
        return Credal(model.carrier, (model.mass,))
    if isinstance(model, Vacuous):
        return Credal(model.carrier, tuple(_degenerate(model.carrier, w, 1) for w in model.carrier))
    if isinstance(model, LinearVacuous):
        d = model.delta
        pts = []
        for w in model.carrier:
            pts.append({v: (1 - d) * model.mass[v] + (d if v == w else 0) for v in model.carrier})
        return Credal(model.carrier, tuple(pts))
    raise TypeError(f"unknown local model {model!r}")


def vertex_count(model: LocalModel) -> int:
    if isinstance(model, Credal):
        return len(model.extreme_points)
    if isinstance(model, Precise):
        return 1
    return len(model.carrier)
