"""The hyperplane-section degeneration of Gr(2, n) in its affine chart.

Coordinates on N' + Z are laid out as
    [N (|I|-1 section coordinates) | e_-1 .. e_{n-3} | t]
and the configuration lives in the dual lattice with the same layout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from .arrangement import LinearForms, bergman_fan
from .cone import Cone
from .degeneration import DegenerationFan, build_degeneration, half_line_fan
from .exactlat import Lattice, LatticeMap, Vec, dot, rational_rank
from .fan import Fan, preimage_fan, product_fan
from .normalfan import PointConfiguration, lifted_cone, placement
from .strata import EvaluationDegenerate, VolumeLedger, describe, volume_ledger


class BadParameters(ValueError):
    pass


class BadMultiIndex(ValueError):
    pass


def multi_indices(k: int, d: int) -> list[tuple[int, ...]]:
    """All length-k nonnegative vectors of total degree d, sorted."""
    out = []
    for combo in combinations_with_replacement(range(k), d):
        a = [0] * k
        for i in combo:
            a[i] += 1
        out.append(tuple(a))
    return sorted(out)


@dataclass
class GrassmannInstance:
    n: int
    d: int
    l: int
    I: list = field(init=False)
    J: list = field(init=False)

    def __post_init__(self):
        n, d, l = self.n, self.d, self.l
        if not (isinstance(n, int) and isinstance(d, int) and isinstance(l, int)) or n < 4 or d < 2 or l < 1:
            raise BadParameters(f"need n >= 4, d >= 2, l >= 1 (got n={n}, d={d}, l={l})")
        self.I = [(i, j) for i in range(n - 2) for j in range(i, n - 2)]
        self.J = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.J0 = [(0, 1)]
        self.J1 = [(i, j) for (i, j) in self.J if i < 2 and j > 1]
        self.J2 = [(i, j) for (i, j) in self.J if i > 1]
        self.N = Lattice.quotient(len(self.I), [[1] * len(self.I)])
        self.rN = self.N.rank
        self.rank = self.rN + (n - 1) + 1
        self.forms = LinearForms([self._form(p) for p in self.I], list(range(len(self.I))))
        self._jpos = {p: k for k, p in enumerate(self.J)}
        self.varpi = {p: self._varpi(p) for p in self.J}
        self.labels = multi_indices(len(self.J), d)
        self._base = None
        self._config = None

    # -- tables -------------------------------------------------------------

    def _form(self, p):
        i, j = p
        f = [0] * (self.n - 2)
        f[i] += 1
        if i != j:
            f[j] -= 1
        return f

    def eta(self, j: int) -> Vec:
        v = [0] * self.rank
        v[self.rN + j + 1] = 1
        return tuple(v)

    def omega(self, a: int, b: int) -> Vec:
        """The character omega_{a,b} - omega_{0,0} of the sum-zero lattice."""
        w = [0] * len(self.I)
        w[self.I.index((min(a, b), max(a, b)))] += 1
        w[0] -= 1
        return self.N.dual_coordinates(w) + (0,) * (self.rank - self.rN)

    def _varpi(self, p) -> Vec:
        i, j = p
        parts: list[Vec] = []
        if (i, j) == (0, 1):
            pass
        elif (i, j) == (0, 2):
            parts = [self.eta(-1), self.eta(0)]
        elif i == 0:
            parts = [self.eta(-1), self.eta(j - 2), self.omega(j - 2, j - 2)]
        elif i == 1:
            parts = [self.eta(j - 2)]
        else:
            parts = [self.eta(-1), self.eta(i - 2), self.eta(j - 2), self.omega(i - 2, j - 2)]
        return _vsum(parts, self.rank)

    def varpi_reduced(self, p) -> Vec:
        """Translated table for the middle two-dimensional cone (J1 entries only)."""
        i, j = p
        if p not in self.J1:
            raise BadMultiIndex(f"{p} is not in J1")
        if (i, j) == (0, 2):
            return self.eta(-1)
        if (i, j) == (1, 2):
            return (0,) * self.rank
        if i == 0:
            return _vsum([self.eta(-1), self.eta(j - 2), _neg(self.eta(0)), self.omega(j - 2, j - 2)], self.rank)
        return _vsum([self.eta(j - 2), _neg(self.eta(0))], self.rank)

    def _check(self, alpha):
        if len(alpha) != len(self.J) or any(x < 0 for x in alpha) or sum(alpha) != self.d:
            raise BadMultiIndex(f"{alpha} is not a degree-{self.d} multi-index on J")

    def c_vector(self, alpha) -> tuple[int, int, int]:
        self._check(alpha)
        pos = self._jpos
        return (
            sum(alpha[pos[p]] for p in self.J0),
            sum(alpha[pos[p]] for p in self.J1),
            sum(alpha[pos[p]] for p in self.J2),
        )

    def kappa(self, alpha) -> int:
        c1 = self.c_vector(alpha)[1]
        return 0 if c1 == self.d else 2 * (self.d - c1) - 1

    def factor_sign(self, p) -> int:
        """Sign relating the unit s_{i,j} to the restricted character of varpi_{i,j}."""
        return 1 if p[0] == 0 else -1

    def sign_of(self, alpha) -> int:
        self._check(alpha)
        s = 1
        for p, a in zip(self.J, alpha):
            if a and self.factor_sign(p) < 0 and a % 2:
                s = -s
        return s

    def u(self, alpha) -> Vec:
        self._check(alpha)
        return _vsum([tuple(a * x for x in self.varpi[p]) for p, a in zip(self.J, alpha) if a], self.rank)

    def stratum_labels(self, d0: int, d1: int, d2: int) -> set:
        return {a for a in self.labels if self.c_vector(a) == (d0, d1, d2)}

    # -- fans and configuration ---------------------------------------------

    def projection(self) -> LatticeMap:
        rows = [[int(i == j) for j in range(self.rN + self.n - 1)] for i in range(self.rN)]
        return LatticeMap.from_rows(rows, self.rN + self.n - 1)

    def base_fan(self) -> Fan:
        if self._base is None:
            self._base = preimage_fan(self.projection(), bergman_fan(self.forms))
        return self._base

    def configuration(self) -> PointConfiguration:
        """(u, kappa) with labels the multi-indices; the weight is unscaled."""
        if self._config is None:
            pts = {a: self.u(a)[:-1] for a in self.labels}
            self._config = PointConfiguration(pts, {a: self.kappa(a) for a in self.labels}, self.rank - 1)
        return self._config

    def expected_rays(self) -> list[Vec]:
        out = []
        for c in (-2, -1, 1, 2):
            v = [0] * self.rank
            for j in range(0, self.n - 2):
                v[self.rN + j + 1] = c * self.l
            v[-1] = 1
            out.append(tuple(v))
        return out

    def expected_cones(self) -> dict[str, Cone]:
        t = self.expected_rays()
        out = {f"tau{k}": Cone.from_extreme([t[k]], self.rank) for k in range(4)}
        for k in range(3):
            out[f"sigma{k}"] = Cone.from_extreme([t[k], t[k + 1]], self.rank)
        return out

    def expected_supports(self) -> dict[str, set]:
        d, S = self.d, self.stratum_labels
        return {
            "tau0": set().union(*(S(0, d - i, i) for i in range(1, d + 1))),
            "tau1": S(0, d - 1, 1) | S(0, d, 0),
            "tau2": S(0, d, 0) | S(1, d - 1, 0),
            "tau3": set().union(*(S(i, d - i, 0) for i in range(1, d + 1))),
            "sigma0": S(0, d - 1, 1),
            "sigma1": S(0, d, 0),
            "sigma2": S(1, d - 1, 0),
        }

    def lifted_expected_rays(self) -> list[Vec]:
        """Rays of the lifted cone over the expected bounded rays (last entry: -min)."""
        cfg = self.configuration().scale_kappa(self.l)
        out = []
        for v in self.expected_rays():
            out.append(v + (-min(dot(v, p) for p in cfg.vectors().values()),))
        return out

    def evaluator(self, bound: int = 10**4) -> "GrassmannEvaluator":
        return GrassmannEvaluator(self, bound)


def _vsum(vs, n) -> Vec:
    out = [0] * n
    for v in vs:
        for i, x in enumerate(v):
            out[i] += x
    return tuple(out)


def _neg(v):
    return tuple(-x for x in v)


def build_instance(n: int, d: int, l: int = 1) -> GrassmannInstance:
    return GrassmannInstance(n, d, l)


class GrassmannEvaluator:
    """Characters of M + M-dagger + Z restricted to Z x torus x G_m.

    Sample points are (y_1..y_{n-3}, x_-1..x_{n-3}, t) with y avoiding the
    arrangement (y_j not 0 or 1, pairwise distinct) and x, t nonzero.
    """

    z_is_torus = False

    def __init__(self, inst: GrassmannInstance, bound: int = 10**4):
        self.inst = inst
        self.rank = inst.rank
        self.bound = bound

    def point(self, rng: random.Random):
        m = self.inst.n - 3
        for _ in range(100):
            y = [rng.randint(-self.bound, self.bound) for _ in range(m)]
            if all(v not in (0, 1) for v in y) and len(set(y)) == m:
                break
        else:
            raise EvaluationDegenerate("no sample point off the arrangement")
        x = []
        while len(x) < self.inst.n - 1:
            v = rng.randint(-self.bound, self.bound)
            if v:
                x.append(v)
        t = 0
        while not t:
            t = rng.randint(-self.bound, self.bound)
        return [1] + y, x, t

    def value(self, pt, e) -> Fraction:
        ys, xs, t = pt
        inst = self.inst
        a = inst.N.dual_lift(e[: inst.rN])
        v = Fraction(1)
        for (i, j), k in zip(inst.I, a):
            if k:
                base = ys[i] if i == j else ys[i] - ys[j]
                v *= Fraction(base) ** k
        for x, k in zip(xs, e[inst.rN : inst.rN + inst.n - 1]):
            if k:
                v *= Fraction(x) ** k
        if e[-1]:
            v *= Fraction(t) ** e[-1]
        return v

    def unit_value(self, pt, p) -> Fraction:
        """The unit s_{i,j} evaluated directly from its defining formula."""
        ys, xs, _ = pt
        x = {j: xs[j + 1] for j in range(-1, self.inst.n - 2)}
        i, j = p
        if (i, j) == (0, 1):
            return Fraction(1)
        if (i, j) == (0, 2):
            return Fraction(x[-1] * x[0])
        if i == 0:
            return Fraction(x[-1] * x[j - 2] * ys[j - 2])
        if i == 1:
            return Fraction(-x[j - 2])
        if i == 2:
            return Fraction(x[-1] * x[0] * x[j - 2] * (ys[j - 2] - 1))
        return Fraction(x[-1] * x[i - 2] * x[j - 2] * (ys[j - 2] - ys[i - 2]))

    def evaluate(self, exponents, samples, seed):
        rng = random.Random(seed)
        rows = []
        for _ in range(samples):
            pt = self.point(rng)
            rows.append([self.value(pt, e) for e in exponents])
        return rows


@dataclass
class ClassificationReport:
    n: int
    d: int
    l: int
    checks: dict
    details: dict
    bounded: list
    ledger: VolumeLedger | None
    exhaustive: bool

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def candidate_is_cone(inst: GrassmannInstance, gamma: Cone) -> bool:
    """Whether gamma is a cone of the degeneration fan, tested on one lifted cone."""
    cfg = inst.configuration().scale_kappa(inst.l)
    base = product_fan(inst.base_fan(), half_line_fan())
    tau = next(t for t in base.maximal_cones() if t.contains_cone(gamma))
    big = lifted_cone(cfg, tau)
    vals = list(cfg.vectors().values())
    lifted = [r + (-min(dot(r, p) for p in vals),) for r in gamma.rays]
    ineqs = [p + (1,) for p in vals] + [f + (0,) for f in tau.facets]
    eqs = [e + (0,) for e in tau.equations]
    tight = [a for a in ineqs if all(dot(a, r) == 0 for r in lifted)]
    loose = [a for a in ineqs if any(dot(a, r) for r in lifted)]
    face = Cone.from_inequalities(loose, inst.rank + 1, eqs + tight)
    return big.contains_cone(face) and face.project_last() == gamma


def verify_classification(n: int, d: int, l: int = 1, exhaustive: bool | None = None, seed: int = 0, workers: int = 1) -> ClassificationReport:
    inst = build_instance(n, d, l)
    if exhaustive is None:
        exhaustive = n == 4
    cfg = inst.configuration()
    scaled = cfg.scale_kappa(l)
    ev = inst.evaluator()
    expected = inst.expected_cones()
    names = {c: k for k, c in expected.items()}
    checks, details = {}, {}
    ledger = None
    if exhaustive:
        df = build_degeneration(inst.base_fan(), cfg, l, workers=workers, z_rank=inst.rN)
        ledger = volume_ledger(df, cfg, ev, seed)
        found = set(ledger.cones())
        bounded = sorted(df.bdd)
        checks["bounded_cones"] = set(df.bdd) == set(expected.values())
        checks["ledger_cones"] = found == set(expected.values())
        details["fan_size"] = len(df.fan)
        details["unexpected"] = [c for c in sorted(found) if c not in names]
        details["missing"] = [k for k, c in expected.items() if c not in found]
        descs = {names[dsc.cone]: dsc for _, dsc in ledger.entries if dsc.cone in names}
    else:
        bounded = list(expected.values())
        checks["candidates_are_cones"] = all(candidate_is_cone(inst, c) for c in bounded)
        descs = {k: describe(c, scaled, ev, inst.rN, seed) for k, c in expected.items()}
        checks["ledger_cones"] = all(dsc.member for dsc in descs.values())
    supports = inst.expected_supports()
    bad_support = [k for k in expected if k not in descs or set(descs[k].placement.support) != supports[k]]
    checks["supports"] = not bad_support
    details["support_mismatch"] = bad_support
    checks["middle_support_count"] = len(supports["sigma1"]) == comb(2 * n - 4 + d - 1, d)
    # the middle cone's stratum: a degree-d form in the J1 variables
    pl = placement(expected["sigma1"], scaled)
    a1 = tuple(d if p == (1, 2) else 0 for p in inst.J)
    base_pt = pl.reduced_map[a1]
    got = {tuple(x - y for x, y in zip(v, base_pt)) for v in pl.reduced_map.values()}
    want = set()
    for a in pl.support:
        want.add(_vsum([tuple(k * x for x in inst.varpi_reduced(p)) for p, k in zip(inst.J, a) if k], inst.rank))
    gens = [inst.varpi_reduced(p) for p in inst.J1 if p != (1, 2)]
    checks["middle_reduced_exponents"] = got == want
    checks["middle_reduced_rank"] = rational_rank(gens) == 2 * n - 5 and all(
        dot(r, g) == 0 for r in expected["sigma1"].rays for g in gens
    )
    checks["product_split"] = all(k in descs and descs[k].product_split is not None for k in expected)
    checks["signs"] = all(
        (-1) ** (expected[k].dim - 1) == (1 if k.startswith("tau") else -1) for k in expected
    )
    if ledger is not None:
        checks["signs"] = checks["signs"] and all(s == (-1) ** (c.cone.dim - 1) for s, c in ledger.entries)
    return ClassificationReport(n, d, l, checks, details, bounded, ledger, exhaustive)
