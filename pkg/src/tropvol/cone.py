"""Rational polyhedral cones with both generator and inequality data.

A cone lives in Z^n (coordinates already fixed by the caller) and is stored
canonically: a saturated HNF basis of its lineality space plus primitive
extreme rays, each projected orthogonally off the lineality space, sorted.
The inequality side is the same data for the dual cone and is computed on
demand by double description.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exactlat import (
    DimensionMismatch,
    LatticeMap,
    Vec,
    dot,
    identity,
    integralize,
    invariant_factors,
    primitive_or_zero,
    rational_rank,
    saturate,
)


class NotStronglyConvex(ValueError):
    """The cone contains a line."""

    def __init__(self, msg: str, vector: Vec | None = None):
        super().__init__(msg if vector is None else f"{msg}: lineality vector {list(vector)}")
        self.vector = vector


def _comb(c1: int, v1: Sequence[int], c2: int, v2: Sequence[int]) -> Vec:
    return primitive_or_zero(c1 * x + c2 * y for x, y in zip(v1, v2))


def _rank_upto(rows: list[Vec], n: int) -> int:
    """Rational rank, stopping early once it reaches n."""
    out: list[list[Fraction]] = []
    piv: list[int] = []
    for row in rows:
        r = [Fraction(x) for x in row]
        for pr, pc in zip(out, piv):
            if r[pc]:
                f = r[pc] / pr[pc]
                r = [x - f * y for x, y in zip(r, pr)]
        pc = next((i for i, x in enumerate(r) if x), None)
        if pc is not None:
            out.append(r)
            piv.append(pc)
            if len(out) == n:
                break
    return len(out)


def double_description(ineqs: Iterable[Sequence[int]], eqs: Iterable[Sequence[int]], n: int):
    """Lineality basis and extreme rays of {x : a.x >= 0, e.x = 0}.

    Incremental double description.  Equations are inserted first; adjacency
    of rays is decided combinatorially from tight-constraint bitmasks.
    """
    lin: list[Vec] = [tuple(r) for r in identity(n)]
    rays: list[Vec] = []
    masks: list[int] = []
    bit = 0
    todo = [(tuple(e), True) for e in eqs] + [(tuple(a), False) for a in ineqs]
    for a, is_eq in todo:
        if len(a) != n:
            raise DimensionMismatch("constraint length differs from ambient rank")
        if not any(a):
            continue
        vals = [dot(a, l) for l in lin]
        j = next((i for i, v in enumerate(vals) if v), None)
        if j is not None:
            l0, a0 = lin[j], vals[j]
            if a0 < 0:
                l0, a0 = tuple(-x for x in l0), -a0
            lin = [l if not vals[i] else _comb(a0, l, -dot(a, l), l0) for i, l in enumerate(lin) if i != j]
            rays = [r if not dot(a, r) else _comb(a0, r, -dot(a, r), l0) for r in rays]
            if not is_eq:
                masks = [m | (1 << bit) for m in masks]
                rays.append(l0)
                masks.append((1 << bit) - 1)
                bit += 1
            continue
        for b in ((a, tuple(-x for x in a)) if is_eq else (a,)):
            rays, masks = _insert(b, rays, masks, bit, lin, n)
            bit += 1
    return lin, rays


def _insert(a, rays, masks, bit, lin, n):
    vals = [dot(a, r) for r in rays]
    pos = [i for i, v in enumerate(vals) if v > 0]
    neg = [i for i, v in enumerate(vals) if v < 0]
    zero = [i for i, v in enumerate(vals) if v == 0]
    b = 1 << bit
    if not neg:
        return rays, [m | b if vals[i] == 0 else m for i, m in enumerate(masks)]
    new_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
    new_masks = [masks[i] for i in pos] + [masks[i] | b for i in zero]
    if pos:
        need = _rank_upto(list(lin) + rays, n) - len(lin) - 2
        all_idx = range(len(rays))
        for p in pos:
            mp = masks[p]
            for q in neg:
                common = mp & masks[q]
                if common.bit_count() < need:
                    continue
                if any(r != p and r != q and masks[r] & common == common for r in all_idx):
                    continue
                new_rays.append(_comb(vals[p], rays[q], -vals[q], rays[p]))
                new_masks.append(common | b)
    return new_rays, new_masks


class _Projector:
    """Orthogonal projection onto the complement of a rational subspace."""

    def __init__(self, basis: Sequence[Vec]):
        self.q: list[tuple[list[Fraction], Fraction]] = []
        for v in basis:
            w = [Fraction(x) for x in v]
            for qv, qq in self.q:
                c = sum(x * y for x, y in zip(w, qv)) / qq
                w = [x - c * y for x, y in zip(w, qv)]
            qq = sum(x * x for x in w)
            if qq:
                self.q.append((w, qq))

    def __call__(self, v: Sequence[int]) -> Vec:
        if not self.q:
            return primitive_or_zero(v)
        w = [Fraction(x) for x in v]
        for qv, qq in self.q:
            c = sum(x * y for x, y in zip(w, qv)) / qq
            if c:
                w = [x - c * y for x, y in zip(w, qv)]
        return integralize(w)


def _canonical(rays: Iterable[Sequence[int]], lin: Iterable[Sequence[int]], n: int):
    lin = saturate(lin, n)
    proj = _Projector(lin)
    out = sorted({proj(r) for r in rays} - {(0,) * n})
    return tuple(out), lin


class Cone:
    """Rational polyhedral cone in Z^n."""

    __slots__ = ("n", "rays", "lineality", "_facets", "_eqs", "_hash", "_dim")

    def __init__(self, n: int, rays, lineality, facets=None, equations=None):
        # rays/lineality must already be canonical; use the constructors below
        self.n = n
        self.rays: tuple[Vec, ...] = tuple(rays)
        self.lineality: tuple[Vec, ...] = tuple(lineality)
        self._facets = None if facets is None else tuple(facets)
        self._eqs = None if equations is None else tuple(equations)
        self._hash = None
        self._dim = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], n: int, lineality: Iterable[Sequence[int]] = ()) -> "Cone":
        gens = [tuple(g) for g in gens]
        lineality = [tuple(g) for g in lineality]
        if any(len(g) != n for g in gens + lineality):
            raise DimensionMismatch("generator length differs from ambient rank")
        eqs, facets = double_description(gens, lineality, n)
        facets, eqs = _canonical(facets, eqs, n)
        lin, rays = double_description(facets, eqs, n)
        rays, lin = _canonical(rays, lin, n)
        return cls(n, rays, lin, facets, eqs)

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[Sequence[int]], n: int, equations: Iterable[Sequence[int]] = ()) -> "Cone":
        lin, rays = double_description(ineqs, equations, n)
        rays, lin = _canonical(rays, lin, n)
        return cls(n, rays, lin)

    @classmethod
    def from_extreme(cls, rays: Iterable[Sequence[int]], n: int, lineality: Iterable[Sequence[int]] = ()) -> "Cone":
        """Trusted constructor: rays are known to be extreme modulo lineality."""
        rays, lin = _canonical(rays, lineality, n)
        return cls(n, rays, lin)

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls(n, (), ())

    @classmethod
    def whole(cls, n: int) -> "Cone":
        return cls(n, (), tuple(tuple(r) for r in identity(n)))

    # -- inequality side ----------------------------------------------------

    def _hrep(self):
        if self._facets is None:
            eqs, facets = double_description(self.rays, self.lineality, self.n)
            self._facets, self._eqs = _canonical(facets, eqs, self.n)

    @property
    def facets(self) -> tuple[Vec, ...]:
        """Irredundant inward facet normals, canonical modulo the equations."""
        self._hrep()
        return self._facets

    @property
    def equations(self) -> tuple[Vec, ...]:
        """HNF basis of the lattice orthogonal to the span."""
        self._hrep()
        return self._eqs

    # -- identity -----------------------------------------------------------

    def key(self):
        return (self.n, self.rays, self.lineality)

    def sort_key(self):
        return (self.dim, self.rays, self.lineality)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        r = [list(x) for x in self.rays]
        if self.lineality:
            return f"Cone({r}, lineality={[list(x) for x in self.lineality]})"
        return f"Cone({r})"

    def __getstate__(self):
        return (self.n, self.rays, self.lineality, self._facets, self._eqs)

    def __setstate__(self, st):
        self.n, self.rays, self.lineality, self._facets, self._eqs = st
        self._hash = None
        self._dim = None

    # -- predicates ---------------------------------------------------------

    @property
    def dim(self) -> int:
        if self._dim is None:
            if self._eqs is not None:
                self._dim = self.n - len(self._eqs)
            else:
                self._dim = len(self.lineality) + (_rank_upto(list(self.rays), self.n) if self.rays else 0)
        return self._dim

    def is_strongly_convex(self) -> bool:
        return not self.lineality

    def require_strongly_convex(self):
        if self.lineality:
            raise NotStronglyConvex("cone contains a line", self.lineality[0])

    def is_simplicial(self) -> bool:
        self.require_strongly_convex()
        return len(self.rays) == self.dim

    def multiplicity(self) -> int:
        """Lattice index of the ray sublattice in the span; simplicial cones only."""
        if not self.is_simplicial():
            raise ValueError("multiplicity is defined for simplicial cones")
        if not self.rays:
            return 1
        f = invariant_factors([list(r) for r in self.rays])
        out = 1
        for x in f:
            out *= x
        return out

    def is_unimodular(self) -> bool:
        return self.is_simplicial() and self.multiplicity() == 1

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.n:
            raise DimensionMismatch("vector length differs from ambient rank")
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(f, v) >= 0 for f in self.facets)

    def in_relative_interior(self, v: Sequence[int]) -> bool:
        if len(v) != self.n:
            raise DimensionMismatch("vector length differs from ambient rank")
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(f, v) > 0 for f in self.facets)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays) and all(
            all(dot(e, l) == 0 for e in self.equations) and all(dot(f, l) == 0 for f in self.facets)
            for l in other.lineality
        )

    def relative_interior_point(self) -> Vec:
        p = [0] * self.n
        for r in self.rays + self.lineality:
            for i, x in enumerate(r):
                p[i] += x
        return tuple(p)

    # -- constructions ------------------------------------------------------

    def dual(self) -> "Cone":
        return Cone(self.n, self.facets, self.equations, self.rays, self.lineality)

    def orthogonal(self) -> tuple[Vec, ...]:
        """HNF basis of sigma-perp intersected with the dual lattice."""
        return self.equations

    def faces(self) -> list["Cone"]:
        """All faces, from the lineality space up to the cone itself."""
        return [self._face(m) for m in self._face_masks()]

    def _incidence(self) -> list[int]:
        return [sum(1 << i for i, r in enumerate(self.rays) if dot(f, r) == 0) for f in self.facets]

    def _face_masks(self) -> list[int]:
        inc = self._incidence()
        full = (1 << len(self.rays)) - 1
        seen = {full}
        stack = [full]
        while stack:
            s = stack.pop()
            for m in inc:
                t = s & m
                if t == s:
                    continue
                closure = full
                for m2 in inc:
                    if m2 & t == t:
                        closure &= m2
                if closure not in seen:
                    seen.add(closure)
                    stack.append(closure)
        return sorted(seen, key=lambda m: (m.bit_count(), m))

    def _face(self, mask: int) -> "Cone":
        return Cone(self.n, tuple(r for i, r in enumerate(self.rays) if mask >> i & 1), self.lineality)

    def intersect(self, other: "Cone") -> "Cone":
        if self.n != other.n:
            raise DimensionMismatch("cones live in different ambient ranks")
        return Cone.from_inequalities(self.facets + other.facets, self.n, self.equations + other.equations)

    def project_last(self) -> "Cone":
        """Image under forgetting the last coordinate, trusting injectivity on the span."""
        return Cone.from_extreme((r[:-1] for r in self.rays), self.n - 1, (l[:-1] for l in self.lineality))


def cone_from_generators(gens: Iterable[Sequence[int]], n: int | None = None) -> Cone:
    gens = [tuple(g) for g in gens]
    if n is None:
        if not gens:
            raise ValueError("ambient rank needed for an empty generator list")
        n = len(gens[0])
    return Cone.from_generators(gens, n)


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def faces(c: Cone) -> list[Cone]:
    return c.faces()


def intersect(a: Cone, b: Cone) -> Cone:
    return a.intersect(b)


def image_cone(f: LatticeMap, c: Cone) -> Cone:
    if c.n != f.source.rank:
        raise DimensionMismatch("cone does not live in the source lattice")
    return Cone.from_generators([f(r) for r in c.rays], f.target.rank, [f(l) for l in c.lineality])


def preimage_cone(f: LatticeMap, c: Cone) -> Cone:
    if c.n != f.target.rank:
        raise DimensionMismatch("cone does not live in the target lattice")
    return Cone.from_inequalities(
        [f.pullback(w) for w in c.facets], f.source.rank, [f.pullback(e) for e in c.equations]
    )


def product_cone(a: Cone, b: Cone) -> Cone:
    za, zb = (0,) * a.n, (0,) * b.n
    rays = [r + zb for r in a.rays] + [za + r for r in b.rays]
    lin = [l + zb for l in a.lineality] + [za + l for l in b.lineality]
    return Cone.from_extreme(rays, a.n + b.n, lin)


def is_rank_full(vectors: Sequence[Vec], n: int) -> bool:
    return rational_rank(vectors) == n
