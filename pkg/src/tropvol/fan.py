"""Finite fans stored as explicit, canonically ordered sets of cones."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import floor
from typing import Iterable, Sequence

from .cone import Cone, NotStronglyConvex, preimage_cone, product_cone
from .exactlat import DimensionMismatch, LatticeMap, Vec, primitive, smith_normal_form, unimodular_inverse


class NotAFan(ValueError):
    pass


class NotSurjective(ValueError):
    pass


class RayOutsideSupport(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class InvalidScale(ValueError):
    pass


class Fan:
    """A face-closed collection of cones in Z^n."""

    def __init__(self, n: int, cones: Iterable[Cone], last_coordinate_distinguished: bool = False):
        self.n = n
        cs = set(cones)
        if any(c.n != n for c in cs):
            raise DimensionMismatch("cone ambient rank differs from fan rank")
        self.cones: tuple[Cone, ...] = tuple(sorted(cs))
        self._set = frozenset(cs)
        self.last_coordinate_distinguished = last_coordinate_distinguished
        self._maximal = None

    def __contains__(self, c: Cone) -> bool:
        return c in self._set

    def __iter__(self):
        return iter(self.cones)

    def __len__(self):
        return len(self.cones)

    def __eq__(self, other):
        return isinstance(other, Fan) and self.n == other.n and self._set == other._set

    def __hash__(self):
        return hash((self.n, self._set))

    def __repr__(self):
        return f"Fan(rank={self.n}, cones={len(self.cones)}, maximal={len(self.maximal_cones())})"

    @property
    def lineality(self) -> tuple[Vec, ...]:
        return self.cones[0].lineality if self.cones else ()

    def rays(self) -> list[Vec]:
        return sorted({r for c in self.cones for r in c.rays})

    def maximal_cones(self) -> tuple[Cone, ...]:
        if self._maximal is None:
            sets = [(c, frozenset(c.rays)) for c in self.cones]
            self._maximal = tuple(
                c for c, s in sets if not any(s < t and c.lineality == d.lineality for d, t in sets)
            )
        return self._maximal

    def cones_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == k]

    def carrier(self, v: Sequence[int]) -> Cone | None:
        """The cone containing v in its relative interior."""
        for c in self.cones:
            if c.in_relative_interior(v):
                return c
        return None

    def contains_point(self, v: Sequence[int]) -> bool:
        return any(c.contains(v) for c in self.maximal_cones())

    def star(self, c: Cone) -> list[Cone]:
        s = set(c.rays)
        return [d for d in self.cones if s <= set(d.rays) and d.lineality == c.lineality]

    def is_strongly_convex(self) -> bool:
        return all(c.is_strongly_convex() for c in self.cones)

    def is_simplicial(self) -> bool:
        return all(c.is_simplicial() for c in self.cones)


@dataclass
class FanReport:
    valid: bool
    missing_faces: list[tuple[Cone, Cone]] = field(default_factory=list)
    bad_pairs: list[tuple[Cone, Cone]] = field(default_factory=list)


def validate_fan(f: Fan) -> FanReport:
    """Check face closure and that maximal cones meet in common faces.

    Checking maximal pairs suffices once face closure holds.
    """
    missing = [(c, g) for c in f.cones for g in c.faces() if g not in f]
    bad = []
    mx = f.maximal_cones()
    for i, a in enumerate(mx):
        for b in mx[i + 1 :]:
            meet = a.intersect(b)
            if not (_is_face(meet, a) and _is_face(meet, b)):
                bad.append((a, b))
    return FanReport(not missing and not bad, missing, bad)


def _is_face(g: Cone, c: Cone) -> bool:
    if g.lineality != c.lineality or not set(g.rays) <= set(c.rays):
        return False
    # tight facets of c on g must cut out exactly g
    tight = [w for w in c.facets if all(sum(x * y for x, y in zip(w, r)) == 0 for r in g.rays)]
    span = [r for r in c.rays if all(sum(x * y for x, y in zip(w, r)) == 0 for w in tight)]
    return set(span) == set(g.rays)


def face_closure(cones: Iterable[Cone], n: int, check: bool = True, **kw) -> Fan:
    cones = list(cones)
    if not cones:
        return Fan(n, [Cone.zero(n)], **kw)
    out = set()
    for c in cones:
        out.update(c.faces())
    f = Fan(n, out, **kw)
    if check:
        rep = validate_fan(f)
        if not rep.valid:
            a, b = rep.bad_pairs[0]
            raise NotAFan(f"cones {a} and {b} do not meet in a common face")
    return f


def fan_from_cone(c: Cone, **kw) -> Fan:
    return Fan(c.n, c.faces(), **kw)


def line_fan() -> Fan:
    return Fan(1, [Cone.zero(1), Cone(1, ((1,),), ()), Cone(1, ((-1,),), ())], last_coordinate_distinguished=True)


def product_fan(a: Fan, b: Fan, **kw) -> Fan:
    return Fan(a.n + b.n, (product_cone(x, y) for x in a for y in b), **kw)


def common_refinement(a: Fan, b: Fan) -> Fan:
    if a.n != b.n:
        raise DimensionMismatch("fans live in different ambient ranks")
    meets = {x.intersect(y) for x in a.maximal_cones() for y in b.maximal_cones()}
    return face_closure(meets, a.n, check=False, last_coordinate_distinguished=a.last_coordinate_distinguished)


def preimage_fan(pi: LatticeMap, f: Fan) -> Fan:
    if f.n != pi.target.rank:
        raise DimensionMismatch("fan does not live in the target lattice")
    if not pi.is_surjective():
        raise NotSurjective("map is not surjective")
    return Fan(pi.source.rank, (preimage_cone(pi, c) for c in f))


def carrier_map(fine: Fan, coarse: Fan) -> dict[Cone, Cone]:
    """Map each fine cone to the coarse cone whose relative interior contains its own."""
    out = {}
    for t in fine:
        p = t.relative_interior_point()
        s = coarse.carrier(p)
        if s is None or not s.contains_cone(t):
            raise NotARefinement(f"{t} is not inside a single cone of the coarse fan")
        out[t] = s
    return out


class NotARefinement(ValueError):
    pass


def is_refinement(fine: Fan, coarse: Fan) -> bool:
    if fine.n != coarse.n:
        return False
    try:
        car = carrier_map(fine, coarse)
    except NotARefinement:
        return False
    over: dict[Cone, list[Cone]] = {}
    for t, s in car.items():
        if t.dim == s.dim:
            over.setdefault(s, []).append(t)
    return all(_covers(s, over.get(s, []), car) for s in coarse)


def _covers(s: Cone, top: list[Cone], car: dict[Cone, Cone]) -> bool:
    d = s.dim
    if not top:
        return False
    counts: dict[Cone, int] = {}
    for t in top:
        for g in t.faces():
            if g.dim == d - 1:
                counts[g] = counts.get(g, 0) + 1
    for g, k in counts.items():
        if k != (2 if car.get(g) == s else 1):
            return False
    return True


def stellar_subdivide(f: Fan, ray: Sequence[int]) -> Fan:
    ray = primitive(ray)
    tau = f.carrier(ray)
    if tau is None:
        raise RayOutsideSupport(f"{list(ray)} is not in the support of the fan")
    star = f.star(tau)
    tau_rays = set(tau.rays)
    keep = set(f.cones) - set(star)
    for s in star:
        for rho in s.faces():
            if tau_rays <= set(rho.rays):
                continue
            keep.add(rho)
            keep.add(Cone.from_extreme(rho.rays + (ray,), f.n, rho.lineality))
    return Fan(f.n, keep, f.last_coordinate_distinguished)


def psi_scale(f: Fan, l: int) -> Fan:
    """Apply (v, t) -> (l v, t) to every cone."""
    if l <= 0:
        raise InvalidScale("scale must be a positive integer")
    if l == 1:
        return f

    def psi(v):
        return tuple(l * x for x in v[:-1]) + (v[-1],)

    return Fan(
        f.n,
        (Cone.from_extreme([psi(r) for r in c.rays], f.n, [psi(x) for x in c.lineality]) for c in f),
        last_coordinate_distinguished=True,
    )


def parallelepiped_points(c: Cone) -> list[tuple[Fraction, Vec]]:
    """Nonzero lattice points of the half-open fundamental parallelepiped, with heights."""
    v = [list(r) for r in c.rays]
    k = len(v)
    s, left, _ = smith_normal_form(v)
    diag = [s[i][i] for i in range(k)]
    out = []
    for cs in product(*(range(d) for d in diag)):
        if not any(cs):
            continue
        nu = [Fraction(ci, di) for ci, di in zip(cs, diag)]
        lam = [sum(nu[i] * left[i][j] for i in range(k)) for j in range(k)]
        lam = [x - floor(x) for x in lam]
        x = tuple(int(sum(lam[i] * v[i][j] for i in range(k))) for j in range(len(v[0])))
        out.append((sum(lam), x))
    return out


def unimodularize(f: Fan, budget: int = 10_000) -> Fan:
    for c in f:
        if not c.is_strongly_convex():
            raise NotStronglyConvex("unimodularize needs a strongly convex fan", c.lineality[0])
    steps = 0

    def tick():
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"more than {budget} stellar subdivisions needed")

    for r in f.rays():
        if any(not c.is_simplicial() for c in f if r in c.rays):
            tick()
            f = stellar_subdivide(f, r)
    while True:
        bad = next((c for c in f if not c.is_unimodular()), None)
        if bad is None:
            return f
        pts = parallelepiped_points(bad)
        h = min(p[0] for p in pts)
        x = min(p[1] for p in pts if p[0] == h)
        tick()
        f = stellar_subdivide(f, primitive(x))
