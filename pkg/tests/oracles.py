"""Brute-force reference implementations used only by the tests."""

from fractions import Fraction
from itertools import combinations


def solve(cols, x):
    """Exact solution of sum lam_i cols_i = x for independent cols, or None."""
    n, k = len(x), len(cols)
    a = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(x[i])] for i in range(n)]
    r = 0
    piv = []
    for c in range(k):
        p = next((i for i in range(r, n) if a[i][c]), None)
        if p is None:
            return None
        a[r], a[p] = a[p], a[r]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    if any(a[i][k] for i in range(r, n)):
        return None
    return [a[i][k] / a[i][i] for i in range(k)]


def rank(rows):
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return 0
    r = 0
    for c in range(len(rows[0])):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[r])]
        r += 1
    return r


def in_cone(gens, x):
    """Caratheodory: x lies in cone(gens) iff it lies in the cone of an independent subset."""
    if not any(x):
        return True
    gens = [tuple(g) for g in gens if any(g)]
    n = len(x)
    for k in range(1, min(n, len(gens)) + 1):
        for sub in combinations(gens, k):
            if rank(sub) < k:
                continue
            lam = solve(sub, x)
            if lam is not None and all(v >= 0 for v in lam):
                return True
    return False


def argmin_labels(points, w):
    vals = {a: sum(p * q for p, q in zip(v, w)) for a, v in points.items()}
    m = min(vals.values())
    return frozenset(a for a, v in vals.items() if v == m)
