"""Degeneration fans in N + Z with the t-direction as last coordinate."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from .cone import Cone, NotStronglyConvex, product_cone
from .fan import Fan, carrier_map, product_fan, psi_scale, unimodularize
from .normalfan import PointConfiguration, refined_normal_fan


class UnknownCone(KeyError):
    pass


def half_line_fan() -> Fan:
    return Fan(1, [Cone.zero(1), Cone(1, ((1,),), ())], last_coordinate_distinguished=True)


@dataclass
class DegenerationFan:
    """A fan in N + Z supported in t >= 0 with per-cone height flags.

    ``z_rank`` is the number of leading coordinates that belong to the
    lattice of the variety being degenerated; it is only used to decide
    whether a stratum splits off as a product.
    """

    fan: Fan
    l: int = 1
    z_rank: int = 0
    zero: frozenset = field(init=False)
    spe: frozenset = field(init=False)
    bdd: frozenset = field(init=False)

    def __post_init__(self):
        zero, spe, bdd = set(), set(), set()
        for c in self.fan:
            if all(r[-1] == 0 for r in c.rays) and all(x[-1] == 0 for x in c.lineality):
                zero.add(c)
                continue
            spe.add(c)
            if not c.lineality and all(r[-1] > 0 for r in c.rays):
                bdd.add(c)
        self.zero, self.spe, self.bdd = frozenset(zero), frozenset(spe), frozenset(bdd)

    def __contains__(self, c):
        return c in self.fan

    def flags(self, c: Cone) -> dict:
        if c not in self.fan:
            raise UnknownCone(repr(c))
        return {"zero": c in self.zero, "spe": c in self.spe, "bdd": c in self.bdd}

    def bounded_cones(self) -> list[Cone]:
        return sorted(self.bdd)


def build_degeneration(delta: Fan, u_kappa: PointConfiguration, l: int = 1, workers: int = 1, z_rank: int | None = None) -> DegenerationFan:
    """Sigma_{l,+}: the cones of Sigma(delta x line, (u, l kappa)) inside t >= 0.

    Only the half-space part is computed, from the maximal cones of
    delta x [0, inf); every cone of the full fan lying in t >= 0 is a face of
    one of them.
    """
    if u_kappa.kappa is None:
        raise ValueError("degeneration needs a weighted configuration")
    if l <= 0:
        raise ValueError("l must be positive")
    base = product_fan(delta, half_line_fan(), last_coordinate_distinguished=True)
    sigma = refined_normal_fan(base, u_kappa.scale_kappa(l), workers=workers)
    for c in sigma:
        if c.lineality:
            raise NotStronglyConvex("degeneration fan is not strongly convex", c.lineality[0])
    f = Fan(sigma.n, sigma.cones, last_coordinate_distinguished=True)
    return DegenerationFan(f, l, delta.n if z_rank is None else z_rank)


def is_generically_unimodular(df: DegenerationFan) -> bool:
    return all(c.is_unimodular() for c in df.zero)


def is_specifically_reduced(df: DegenerationFan) -> bool:
    return all(r[-1] == 1 for c in df.bdd for r in c.rays)


def is_compactly_arranged(df: DegenerationFan) -> bool:
    bdd = [(c, frozenset(c.rays)) for c in sorted(df.bdd)]
    allc = [frozenset(c.rays) for c in df.fan]
    for i, (a, sa) in enumerate(bdd):
        for b, sb in bdd[i + 1 :]:
            both = sa | sb
            if any(both <= t for t in allc) and not any(both <= s for _, s in bdd):
                return False
    return True


def spe_ray_heights(df: DegenerationFan) -> list[int]:
    return sorted({r[-1] for c in df.spe for r in c.rays if r[-1] != 0})


def prepare_model(delta: Fan, u_kappa: PointConfiguration, budget: int = 10_000, workers: int = 1, z_rank: int | None = None) -> tuple[int, DegenerationFan]:
    """Unimodular refinement of Sigma_{1,+}, then psi-scaling by the lcm of ray heights."""
    df1 = build_degeneration(delta, u_kappa, 1, workers=workers, z_rank=z_rank)
    fine = DegenerationFan(unimodularize(df1.fan, budget), 1, df1.z_rank)
    m0 = lcm(*spe_ray_heights(fine)) if fine.spe else 1
    return m0, DegenerationFan(psi_scale(fine.fan, m0), m0, df1.z_rank)


def slice_euler(sigma: Cone, df: DegenerationFan) -> int:
    if sigma not in df.fan:
        raise UnknownCone(repr(sigma))
    if sigma in df.bdd:
        return (-1) ** (sigma.dim - 1)
    return 0


def euler_defects(coarse: DegenerationFan, fine: DegenerationFan) -> list[tuple[Cone, int, int]]:
    """Coarse spe cones whose bounded fine cones do not sum to the slice Euler number."""
    car = carrier_map(fine.fan, coarse.fan)
    sums = {s: 0 for s in coarse.spe}
    for t in fine.bdd:
        s = car[t]
        if s in sums:
            sums[s] += (-1) ** (t.dim - 1)
    return [(s, v, slice_euler(s, coarse)) for s, v in sorted(sums.items()) if v != slice_euler(s, coarse)]
