"""Gluing lower bounds on real embedding counts.

Joining copies of a graph G along a common rigid subgraph H multiplies
real embedding counts: a glued graph on n vertices has at least
2^((n-nH) mod (nG-nH)) * rH * (rG/rH)^floor((n-nH)/(nG-nH)) real
embeddings, which grows asymptotically like (rG/rH)^(n/(nG-nH)).

Note on printed constants: the asymptotic bases below match the
corollary formulas (430^(1/7) ~ 2.378, 16^(1/3) ~ 2.51984,
132^(1/5) ~ 2.6553); abstracts elsewhere print 2.3811 and 2.6390,
which do not follow from these formulas and are not reproduced here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import PLANE, SPACE, SPHERE


@dataclass(frozen=True)
class GluingSpec:
    """Gluing of copies of G along a rigid subgraph H, grown to n vertices.

    rH is the real count of H itself (triangle: 2 in the plane and on the
    sphere, 1 in space); it is an explicit input, never inferred.
    """

    nG: int
    nH: int
    rG: int
    rH: int
    n: int
    geometry: str = SPACE

    def __post_init__(self):
        if not self.nG > self.nH >= 1:
            raise ValueError("need nG > nH >= 1")
        if not self.rG >= self.rH >= 1:
            raise ValueError("need rG >= rH >= 1")
        if self.n < self.nH:
            raise ValueError("target vertex count n must be at least nH")


@dataclass(frozen=True)
class BoundResult:
    value: int
    exact: bool  # False when the rational bound was floored


def glued_lower_bound(spec: GluingSpec) -> BoundResult:
    """Lower bound on real embeddings of the glued graph on n vertices."""
    step = spec.nG - spec.nH
    k, rem = divmod(spec.n - spec.nH, step)
    ratio = Fraction(spec.rG, spec.rH)
    bound = Fraction(2) ** rem * spec.rH * ratio**k
    if bound.denominator == 1:
        return BoundResult(int(bound), True)
    return BoundResult(int(bound), False)


def asymptotic_base(spec: GluingSpec) -> float:
    """Growth base (rG/rH)^(1/(nG-nH)) of the glued family."""
    return float(Fraction(spec.rG, spec.rH)) ** (1.0 / (spec.nG - spec.nH))


# Presets for the published glued families; n is the free parameter.


def preset(name: str, n: int | None = None) -> GluingSpec:
    """Named gluing specs: L880, L24S, G160, G48; n defaults to nG."""
    table = {
        "L880": dict(nG=10, nH=3, rG=860, rH=2, geometry=PLANE),
        "L24S": dict(nG=6, nH=3, rG=32, rH=2, geometry=SPHERE),
        "G160": dict(nG=8, nH=3, rG=132, rH=1, geometry=SPACE),
        "G48": dict(nG=7, nH=3, rG=48, rH=1, geometry=SPACE),
    }
    if name not in table:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(table)}")
    fields = table[name]
    if n is None:
        n = fields["nG"]
    return GluingSpec(n=n, **fields)


PRESETS = ("L880", "L24S", "G160", "G48")
