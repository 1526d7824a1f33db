"""Matroids of linear forms and their fans of chains of flats."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Mapping, Sequence

from .cone import Cone
from .exactlat import Lattice, rational_rank
from .fan import Fan, NotAFan, validate_fan


class BadIndex(IndexError):
    pass


class LinearForms:
    """Forms f_0..f_d given by coefficient vectors in n+1 homogeneous variables.

    Labels default to 0..d; any sortable labels may be supplied, and index i
    always refers to the i-th label in the given order.
    """

    def __init__(self, forms: Sequence[Sequence], labels: Sequence[Hashable] | None = None):
        self.forms = [tuple(Fraction(x) for x in f) for f in forms]
        if not self.forms:
            raise ValueError("need at least one form")
        if len({len(f) for f in self.forms}) != 1:
            raise ValueError("forms have different numbers of coefficients")
        if any(not any(f) for f in self.forms):
            raise ValueError("forms must be nonzero")
        self.labels = list(labels) if labels is not None else list(range(len(self.forms)))
        self._rank: dict[frozenset, int] = {}
        self._flats = None

    @classmethod
    def from_mapping(cls, forms: Mapping[Hashable, Sequence]) -> "LinearForms":
        labels = list(forms)
        return cls([forms[a] for a in labels], labels)

    @property
    def size(self) -> int:
        return len(self.forms)

    @property
    def n(self) -> int:
        """Projective dimension of the ambient space."""
        return len(self.forms[0]) - 1

    def rank(self, a) -> int:
        a = frozenset(a)
        if any(not (0 <= i < self.size) for i in a):
            raise BadIndex(f"index out of range in {sorted(a)}")
        if a not in self._rank:
            self._rank[a] = rational_rank([self.forms[i] for i in sorted(a)])
        return self._rank[a]

    def closure(self, a) -> frozenset:
        r = self.rank(a)
        return frozenset(i for i in range(self.size) if i in a or self.rank(set(a) | {i}) == r)


def matroid_rank(lf: LinearForms, a) -> int:
    return lf.rank(a)


@dataclass(frozen=True, order=True)
class Flat:
    rank: int
    index_subset: tuple[int, ...]


def flats(lf: LinearForms) -> list[Flat]:
    """Subsets A with rank(A) < rank(A + i) for every i outside A."""
    if lf._flats is None:
        out = []
        e = range(lf.size)
        for k in range(lf.size + 1):
            for a in combinations(e, k):
                r = lf.rank(a)
                if all(lf.rank(a + (i,)) > r for i in e if i not in a):
                    out.append(Flat(r, a))
        lf._flats = sorted(out)
    return list(lf._flats)


@dataclass(frozen=True)
class ChainOfFlats:
    flats: tuple[Flat, ...]

    @property
    def proper(self) -> tuple[Flat, ...]:
        return self.flats[:-1]


def chains(lf: LinearForms) -> list[ChainOfFlats]:
    """Strictly increasing chains of flats of positive rank ending at the full set."""
    fl = [f for f in flats(lf) if f.rank > 0]
    full = tuple(range(lf.size))
    top = next(f for f in fl if f.index_subset == full)
    below = {f: [g for g in fl if set(g.index_subset) < set(f.index_subset)] for f in fl}
    out = []

    def grow(chain):
        out.append(ChainOfFlats(tuple(reversed(chain))))
        for g in below[chain[-1]]:
            grow(chain + [g])

    grow([top])
    return sorted(out, key=lambda c: (len(c.flats), [f.index_subset for f in c.flats]))


def quotient_lattice(lf: LinearForms) -> Lattice:
    """N = Z^{d+1} / Z(1, ..., 1) with its fixed section."""
    return Lattice.quotient(lf.size, [[1] * lf.size])


def indicator(lattice: Lattice, subset, size: int):
    return lattice.coordinates([int(i in subset) for i in range(size)])


def chain_cone(lf: LinearForms, c: ChainOfFlats, lattice: Lattice | None = None) -> Cone:
    lattice = lattice or quotient_lattice(lf)
    gens = [indicator(lattice, f.index_subset, lf.size) for f in c.proper]
    return Cone.from_extreme(gens, lattice.rank)


def bergman_fan(lf: LinearForms, check: bool = True) -> Fan:
    lattice = quotient_lattice(lf)
    cones = [chain_cone(lf, c, lattice) for c in chains(lf)]
    f = Fan(lattice.rank, cones)
    if len(f) != len(cones):
        raise NotAFan("two chains gave the same cone")
    if check:
        rep = validate_fan(f)
        if not rep.valid:
            raise NotAFan(f"chain cones do not form a fan: {rep}")
    return f
