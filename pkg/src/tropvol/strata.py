"""Stratum descriptors, randomized span dimension and the signed volume ledger."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

from .cone import Cone
from .degeneration import DegenerationFan, slice_euler
from .exactlat import Vec, rational_rank
from .fan import NotARefinement, carrier_map, is_refinement
from .normalfan import FacePlacement, PointConfiguration, placement


class EvaluationDegenerate(RuntimeError):
    pass


class UnitEvaluator(Protocol):
    """Evaluates characters at random points of the variety.

    ``evaluate`` returns one row per sample point and one column per
    exponent.  ``z_is_torus`` tells whether the variety is a whole torus, in
    which case every stratum is again a torus.
    """

    rank: int
    z_is_torus: bool

    def evaluate(self, exponents: Sequence[Vec], samples: int, seed: int) -> list[list[Fraction]]: ...


class TorusEvaluator:
    """Characters of Z^rank evaluated at random points of the torus."""

    z_is_torus = True

    def __init__(self, rank: int, bound: int = 10**6):
        self.rank = rank
        self.bound = bound

    def point(self, rng: random.Random) -> list[Fraction]:
        out = []
        while len(out) < self.rank:
            x = rng.randint(-self.bound, self.bound)
            if x:
                out.append(Fraction(x))
        return out

    def evaluate(self, exponents, samples, seed):
        rng = random.Random(seed)
        rows = []
        for _ in range(samples):
            p = self.point(rng)
            rows.append([_monomial(p, e) for e in exponents])
        return rows


def _monomial(p: Sequence[Fraction], e: Sequence[int]) -> Fraction:
    v = Fraction(1)
    for x, k in zip(p, e):
        if k:
            v *= x**k
    return v


@dataclass(frozen=True)
class SpanRank:
    dim: int
    probabilistic: bool
    trials: int


def span_rank(exponents: Sequence[Vec], ev: UnitEvaluator, seed: int = 0, margin: int = 3, retries: int = 4) -> SpanRank:
    """Rank of the evaluation matrix, repeated with independent seeds.

    Two agreeing ranks are accepted.  On disagreement more seeds are tried and
    the maximum is reported with ``probabilistic`` set.
    """
    if not exponents:
        raise ValueError("need at least one exponent")
    cols = sorted(set(tuple(e) for e in exponents))
    samples = len(cols) + margin
    ranks = []
    for k in range(2 + retries):
        rows = ev.evaluate(cols, samples, seed * 7919 + k)
        ranks.append(rational_rank(rows))
        if len(ranks) >= 2 and ranks[-1] == ranks[-2] and len(set(ranks)) == 1:
            return SpanRank(ranks[-1], False, len(ranks))
    return SpanRank(max(ranks), True, len(ranks))


def span_dimension(exponents: Sequence[Vec], ev: UnitEvaluator, seed: int = 0) -> int:
    return span_rank(exponents, ev, seed).dim


def cone_seed(c: Cone, seed: int = 0) -> int:
    h = hashlib.sha256(repr(c.key()).encode()).digest()
    return int.from_bytes(h[:8], "big") ^ seed


@dataclass(frozen=True)
class StratumDescriptor:
    cone: Cone
    placement: FacePlacement
    product_split: Cone | None
    span_dim: int
    exact: bool
    probabilistic: bool

    @property
    def member(self) -> bool:
        return self.span_dim >= 2


def product_factor(sigma: Cone, z_rank: int) -> Cone | None:
    """The cone in the remaining coordinates when sigma projects to zero in the first z_rank."""
    if any(any(r[:z_rank]) for r in sigma.rays + sigma.lineality):
        return None
    return Cone.from_extreme((r[z_rank:] for r in sigma.rays), sigma.n - z_rank, (x[z_rank:] for x in sigma.lineality))


def describe(sigma: Cone, config: PointConfiguration, ev: UnitEvaluator, z_rank: int = 0, seed: int = 0) -> StratumDescriptor:
    pl = placement(sigma, config)
    sr = span_rank(list(pl.reduced_map.values()), ev, cone_seed(sigma, seed))
    split = product_factor(sigma, z_rank)
    return StratumDescriptor(sigma, pl, split, sr.dim, ev.z_is_torus or split is not None, sr.probabilistic)


def sigma_Y_member(sigma: Cone, u_kappa: PointConfiguration, ev: UnitEvaluator, z_rank: int = 0, seed: int = 0) -> bool:
    return describe(sigma, u_kappa, ev, z_rank, seed).member


@dataclass
class VolumeLedger:
    entries: list[tuple[int, StratumDescriptor]]
    rejected: list[StratumDescriptor]

    def signed_sum(self) -> int:
        return sum(s for s, _ in self.entries)

    def cones(self) -> list[Cone]:
        return [d.cone for _, d in self.entries]


def volume_ledger(df: DegenerationFan, u_kappa: PointConfiguration, ev: UnitEvaluator, seed: int = 0) -> VolumeLedger:
    """One signed entry per bounded cone passing the span test.

    ``u_kappa`` is the unscaled weighted configuration; the fan's own scale
    is applied here.
    """
    config = u_kappa.scale_kappa(df.l)
    entries, rejected = [], []
    for c in df.bounded_cones():
        try:
            d = describe(c, config, ev, df.z_rank, seed)
        except Exception as e:
            raise type(e)(f"while describing {c}: {e}") from e
        if d.member:
            entries.append(((-1) ** (c.dim - 1), d))
        else:
            rejected.append(d)
    return VolumeLedger(entries, rejected)


def ledger_refinement_check(coarse: DegenerationFan, fine: DegenerationFan, u_kappa: PointConfiguration | None = None, ev: UnitEvaluator | None = None) -> bool:
    """Bounded fine cones over each coarse spe cone carry its slice Euler number.

    With a configuration, also checks that every fine bounded cone sees the
    same support set as its carrier.
    """
    if not is_refinement(fine.fan, coarse.fan):
        raise NotARefinement("fine fan does not refine the coarse fan")
    car = carrier_map(fine.fan, coarse.fan)
    sums = {s: 0 for s in coarse.spe}
    for t in fine.bdd:
        sums[car[t]] += (-1) ** (t.dim - 1)
    ok = all(v == slice_euler(s, coarse) for s, v in sums.items())
    if ok and u_kappa is not None:
        cc, fc = u_kappa.scale_kappa(coarse.l), u_kappa.scale_kappa(fine.l)
        ok = all(placement(t, fc).support == placement(car[t], cc).support for t in fine.bdd)
    return ok
