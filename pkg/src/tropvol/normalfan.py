"""Normal fans of labelled point configurations, minimizer convention.

The cone of w consists of directions minimized on a common face of the
convex hull.  Everything goes through the lifted cone
C(u) = {(v, s) : <v, u(i)> + s >= 0 for all i}: projections of its faces that
avoid (0, 1) are exactly the normal cones.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .cone import Cone
from .exactlat import DimensionMismatch, Vec, dot
from .fan import Fan, common_refinement


class NotInSingleNormalCone(ValueError):
    pass


class LabelMismatch(ValueError):
    pass


class PointConfiguration:
    """A labelled family u: S -> Z^m with an optional integer weight kappa.

    With kappa present the configuration is read as (u, kappa) in Z^m + Z,
    the weight being the last coordinate.
    """

    def __init__(self, points: Mapping[Hashable, Sequence[int]], kappa: Mapping[Hashable, int] | None = None, m_rank: int | None = None):
        if not points:
            raise ValueError("a configuration needs at least one point")
        self.labels = tuple(sorted(points))
        self.u = {a: tuple(points[a]) for a in self.labels}
        ranks = {len(v) for v in self.u.values()}
        if m_rank is None:
            m_rank = ranks.pop() if len(ranks) == 1 else -1
        if len(ranks) > 1 or any(len(v) != m_rank for v in self.u.values()):
            raise DimensionMismatch("points have different lengths")
        self.m_rank = m_rank
        if kappa is not None:
            if set(kappa) != set(self.labels):
                raise LabelMismatch("kappa labels differ from point labels")
            kappa = {a: int(kappa[a]) for a in self.labels}
        self.kappa = kappa

    @property
    def rank(self) -> int:
        """Rank of the lattice the full vectors live in."""
        return self.m_rank + (self.kappa is not None)

    def vector(self, a) -> Vec:
        return self.u[a] + ((self.kappa[a],) if self.kappa is not None else ())

    def vectors(self) -> dict:
        return {a: self.vector(a) for a in self.labels}

    def scale_kappa(self, l: int) -> "PointConfiguration":
        if self.kappa is None:
            raise ValueError("configuration carries no weight")
        return PointConfiguration(self.u, {a: l * k for a, k in self.kappa.items()}, self.m_rank)

    def flattened(self) -> "PointConfiguration":
        """Unweighted configuration with kappa folded in as a coordinate."""
        return PointConfiguration(self.vectors(), None, self.rank)

    def translate(self, w: Sequence[int]) -> "PointConfiguration":
        if len(w) != self.rank:
            raise DimensionMismatch("translation vector has wrong length")
        pts = {a: tuple(x + y for x, y in zip(self.vector(a), w)) for a in self.labels}
        if self.kappa is None:
            return PointConfiguration(pts, None, self.m_rank)
        return PointConfiguration({a: v[:-1] for a, v in pts.items()}, {a: v[-1] for a, v in pts.items()}, self.m_rank)

    def __eq__(self, other):
        return isinstance(other, PointConfiguration) and (self.u, self.kappa, self.m_rank) == (other.u, other.kappa, other.m_rank)

    def __repr__(self):
        return f"PointConfiguration({len(self.labels)} points, rank {self.rank})"


@dataclass(frozen=True)
class FacePlacement:
    cone: Cone
    omega: Vec
    support: tuple
    reduced_map: dict

    def reduced_exponents(self) -> set[Vec]:
        return set(self.reduced_map.values())


def lifted_cone(u: PointConfiguration, tau: Cone | None = None) -> Cone:
    """C(u), or C(tau, u) = C(u) cut down to tau x R."""
    n = u.rank
    ineqs = [v + (1,) for v in u.vectors().values()]
    eqs = []
    if tau is not None:
        if tau.n != n:
            raise DimensionMismatch("tau does not live in the dual of the configuration lattice")
        ineqs += [f + (0,) for f in tau.facets]
        eqs = [e + (0,) for e in tau.equations]
    return Cone.from_inequalities(ineqs, n + 1, eqs)


def lower_faces(c: Cone) -> list[Cone]:
    """Projections of the faces of a lifted cone that avoid (0, ..., 0, 1)."""
    facets = c.facets
    inc = c._incidence()
    vertical = [f[-1] == 0 for f in facets]
    out = []
    for mask in c._face_masks():
        tight = [i for i, m in enumerate(inc) if m & mask == mask]
        if all(vertical[i] for i in tight):
            continue
        out.append(c._face(mask).project_last())
    return out


def normal_fan(u: PointConfiguration) -> Fan:
    return Fan(u.rank, lower_faces(lifted_cone(u)))


def _lifted_job(args):
    tau, u = args
    return lower_faces(lifted_cone(u, tau))


def refined_normal_fan(delta: Fan, u: PointConfiguration, method: str = "lifted", workers: int = 1) -> Fan:
    """Sigma(delta, u): common refinement of delta with the normal fan of u."""
    if delta.n != u.rank:
        raise DimensionMismatch("base fan and configuration ranks differ")
    if method == "refinement":
        return common_refinement(delta, normal_fan(u))
    if method != "lifted":
        raise ValueError(f"unknown method {method!r}")
    jobs = [(tau, u) for tau in delta.maximal_cones()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_lifted_job, jobs))
    else:
        parts = [_lifted_job(j) for j in jobs]
    return Fan(delta.n, (c for p in parts for c in p), delta.last_coordinate_distinguished)


def placement(sigma: Cone, u: PointConfiguration) -> FacePlacement:
    if sigma.n != u.rank:
        raise DimensionMismatch("cone and configuration ranks differ")
    vecs = u.vectors()
    w = sigma.relative_interior_point()
    vals = {a: dot(w, v) for a, v in vecs.items()}
    low = min(vals.values())
    argmin = [a for a in u.labels if vals[a] == low]
    omega = vecs[argmin[0]]
    diffs = {a: tuple(x - y for x, y in zip(v, omega)) for a, v in vecs.items()}
    for a, d in diffs.items():
        if any(dot(r, d) < 0 for r in sigma.rays) or any(dot(l, d) for l in sigma.lineality):
            raise NotInSingleNormalCone(f"cone {sigma} meets several normal cones (label {a!r})")
    support = tuple(a for a in u.labels if all(dot(r, diffs[a]) == 0 for r in sigma.rays))
    if list(support) != argmin:
        raise NotInSingleNormalCone(f"cone {sigma} is not inside a single normal cone")
    return FacePlacement(sigma, omega, support, {a: diffs[a] for a in support})


def config_equivalent(u: PointConfiguration, v: PointConfiguration) -> bool:
    if u.labels != v.labels:
        raise LabelMismatch("configurations have different label sets")
    if u.rank != v.rank:
        return False
    a0 = u.labels[0]
    shift = tuple(x - y for x, y in zip(u.vector(a0), v.vector(a0)))
    return all(tuple(x - y for x, y in zip(u.vector(a), v.vector(a))) == shift for a in u.labels)
