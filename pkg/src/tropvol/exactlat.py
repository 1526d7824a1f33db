"""Exact integer and rational linear algebra over arbitrary-precision ints.

Matrices are lists of rows; vectors are tuples of ints.  Nothing here uses
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Matrix = list[list[int]]


class ZeroVector(ValueError):
    """A primitive vector was requested for the zero vector."""


class NotSaturated(ValueError):
    """The quotient by a sublattice has torsion."""


class DimensionMismatch(ValueError):
    """Vectors or matrices of incompatible sizes were combined."""


def dot(a: Sequence, b: Sequence) -> int:
    return sum(x * y for x, y in zip(a, b))


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def primitive(v: Iterable[int]) -> Vec:
    v = tuple(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ZeroVector("zero vector has no primitive generator")
    return tuple(x // g for x in v)


def primitive_or_zero(v: Iterable[int]) -> Vec:
    v = tuple(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    return v if g in (0, 1) else tuple(x // g for x in v)


def integralize(v: Iterable[Fraction]) -> Vec:
    """Smallest positive integer multiple of a rational vector, made primitive."""
    v = list(v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive_or_zero(int(x * den) for x in v)


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style HNF: returns (h, u) with h = u*m and u unimodular.

    Pivots are positive, entries above a pivot lie in [0, pivot), zero rows
    come last.
    """
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity(rows)
    p = 0
    for c in range(cols):
        if p == rows:
            break
        for r in range(p + 1, rows):
            if a[r][c] == 0:
                continue
            x, y = a[p][c], a[r][c]
            g, s, t = _xgcd(x, y)
            xg, yg = x // g, y // g
            ap, ar = a[p], a[r]
            a[p] = [s * i + t * j for i, j in zip(ap, ar)]
            a[r] = [-yg * i + xg * j for i, j in zip(ap, ar)]
            up, ur = u[p], u[r]
            u[p] = [s * i + t * j for i, j in zip(up, ur)]
            u[r] = [-yg * i + xg * j for i, j in zip(up, ur)]
        piv = a[p][c]
        if piv == 0:
            continue
        if piv < 0:
            a[p] = [-x for x in a[p]]
            u[p] = [-x for x in u[p]]
            piv = -piv
        for r in range(p):
            q = a[r][c] // piv
            if q:
                a[r] = [i - q * j for i, j in zip(a[r], a[p])]
                u[r] = [i - q * j for i, j in zip(u[r], u[p])]
        p += 1
    return a, u


def hnf_basis(rows: Iterable[Sequence[int]], ncols: int) -> tuple[Vec, ...]:
    """Nonzero rows of the HNF: the canonical basis of the row lattice."""
    rows = [list(r) for r in rows]
    if not rows:
        return ()
    h, _ = hermite_normal_form(rows)
    return tuple(tuple(r) for r in h if any(r))


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Returns (s, left, right) with s = left*m*right diagonal, d_i | d_{i+1}."""
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    left, right = identity(rows), identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q*row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in right:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return a, left, right
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = a[i][t] // piv
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                q = a[t][j] // piv
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    return a, left, right


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    if not m or not m[0]:
        return []
    s, _, _ = smith_normal_form(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]))) if s[i][i]]


def rational_rank(rows: Iterable[Sequence]) -> int:
    return len(_echelon([[Fraction(x) for x in r] for r in rows]))


def _echelon(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced nonzero rows of a row echelon form (destructive)."""
    out: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in a:
        row = list(row)
        for prow, pc in zip(out, pivots):
            if row[pc]:
                f = row[pc] / prow[pc]
                row = [x - f * y for x, y in zip(row, prow)]
        pc = next((i for i, x in enumerate(row) if x), None)
        if pc is not None:
            out.append(row)
            pivots.append(pc)
    return out


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> tuple[Vec, ...]:
    """Saturated basis (in HNF) of {x in Z^ncols : a x = 0}."""
    if ncols == 0:
        return ()
    if not a:
        return tuple(tuple(r) for r in identity(ncols))
    h, u = hermite_normal_form(transpose(a))
    basis = [u[i] for i in range(ncols) if not any(h[i])]
    return hnf_basis(basis, ncols)


def saturate(rows: Iterable[Sequence[int]], ncols: int) -> tuple[Vec, ...]:
    """HNF basis of (Q-span of rows) intersected with Z^ncols."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return ()
    perp = integer_kernel(rows, ncols)
    return integer_kernel(perp, ncols) if perp else tuple(tuple(r) for r in identity(ncols))


def unimodular_inverse(u: Sequence[Sequence[int]]) -> Matrix:
    n = len(u)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(u)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    inv = [[x for x in row[n:]] for row in a]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def determinant(m: Sequence[Sequence[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def lattice_complement(sub: Sequence[Sequence[int]], ambient: "Lattice | int") -> tuple[Vec, ...]:
    """Basis C (in HNF) such that sub together with C is a basis of Z^n."""
    n = ambient if isinstance(ambient, int) else ambient.rank
    sub = [list(r) for r in sub]
    if any(len(r) != n for r in sub):
        raise DimensionMismatch("sublattice vectors do not match the ambient rank")
    if not sub:
        return tuple(tuple(r) for r in identity(n))
    s, _, right = smith_normal_form(sub)
    k = len(sub)
    diag = [s[i][i] for i in range(min(k, n))]
    if len(diag) < k or any(x != 1 for x in diag):
        raise NotSaturated("quotient by the given vectors has torsion or they are dependent")
    rinv = unimodular_inverse(right)
    return hnf_basis(rinv[k:], n)


@dataclass(frozen=True)
class Lattice:
    """A free lattice, presented either as Z^r or as Z^ambient / span(kernel).

    Quotients get a fixed complement basis, which gives every element
    canonical integer coordinates.
    """

    ambient_rank: int
    kernel: tuple[Vec, ...] = ()
    _complement: tuple[Vec, ...] = field(default=(), compare=False, repr=False)
    _inverse: tuple[Vec, ...] = field(default=(), compare=False, repr=False)

    @staticmethod
    def free(rank: int) -> "Lattice":
        return Lattice(rank)

    @staticmethod
    def quotient(ambient_rank: int, kernel_basis: Sequence[Sequence[int]]) -> "Lattice":
        kernel = hnf_basis(kernel_basis, ambient_rank)
        comp = lattice_complement(kernel, ambient_rank)
        basis = [list(r) for r in kernel + comp]
        inv = unimodular_inverse(basis)
        return Lattice(ambient_rank, kernel, comp, tuple(tuple(r) for r in inv))

    @property
    def rank(self) -> int:
        return self.ambient_rank - len(self.kernel)

    @property
    def is_free(self) -> bool:
        return not self.kernel

    def coordinates(self, x: Sequence[int]) -> Vec:
        """Coordinates of the class of x in Z^ambient."""
        if len(x) != self.ambient_rank:
            raise DimensionMismatch("vector length differs from ambient rank")
        if self.is_free:
            return tuple(x)
        k = len(self.kernel)
        # x = a.K + b.C, so (a, b) = x . B^{-1}
        return tuple(dot(x, [row[k + j] for row in self._inverse]) for j in range(self.rank))

    def lift(self, b: Sequence[int]) -> Vec:
        if self.is_free:
            return tuple(b)
        return tuple(sum(bi * c[j] for bi, c in zip(b, self._complement)) for j in range(self.ambient_rank))

    def dual_coordinates(self, w: Sequence[int]) -> Vec:
        """Coordinates of a functional on Z^ambient vanishing on the kernel."""
        if any(dot(w, k) for k in self.kernel):
            raise ValueError("functional does not vanish on the kernel")
        if self.is_free:
            return tuple(w)
        return tuple(dot(c, w) for c in self._complement)

    def dual_lift(self, c: Sequence[int]) -> Vec:
        """Inverse of dual_coordinates: the functional on Z^ambient."""
        if self.is_free:
            return tuple(c)
        k = len(self.kernel)
        rhs = [0] * k + list(c)
        return tuple(dot(row, rhs) for row in self._inverse)


@dataclass(frozen=True)
class LatticeMap:
    source: Lattice
    target: Lattice
    matrix: tuple[Vec, ...]  # target.rank rows, source.rank columns

    def __post_init__(self):
        if len(self.matrix) != self.target.rank or any(len(r) != self.source.rank for r in self.matrix):
            raise DimensionMismatch("matrix shape does not match lattice ranks")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], source_rank: int) -> "LatticeMap":
        return LatticeMap(Lattice(source_rank), Lattice(len(rows)), tuple(tuple(r) for r in rows))

    def __call__(self, v: Sequence[int]) -> Vec:
        if len(v) != self.source.rank:
            raise DimensionMismatch("vector length differs from source rank")
        return tuple(dot(r, v) for r in self.matrix)

    def pullback(self, w: Sequence[int]) -> Vec:
        """Dual map: functional on the target to functional on the source."""
        return tuple(sum(w[i] * self.matrix[i][j] for i in range(len(w))) for j in range(self.source.rank))

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """self after other."""
        if other.target.rank != self.source.rank:
            raise DimensionMismatch("cannot compose maps")
        if not self.matrix:
            return LatticeMap(other.source, self.target, ())
        m = matmul(self.matrix, other.matrix) if other.matrix else [[0] * other.source.rank for _ in self.matrix]
        return LatticeMap(other.source, self.target, tuple(tuple(r) for r in m))

    def is_surjective(self) -> bool:
        if self.target.rank == 0:
            return True
        f = invariant_factors(transpose(self.matrix)) if self.matrix and self.matrix[0] else []
        return len(f) == self.target.rank and all(x == 1 for x in f)


def saturated_kernel(f: LatticeMap) -> tuple[Vec, ...]:
    return integer_kernel(f.matrix, f.source.rank)
