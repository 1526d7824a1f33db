from itertools import product

import pytest
from hypothesis import given, strategies as st

from tropvol.cone import Cone
from tropvol.exactlat import DimensionMismatch
from tropvol.fan import Fan, face_closure, fan_from_cone, line_fan, validate_fan
from tropvol.normalfan import (
    LabelMismatch,
    NotInSingleNormalCone,
    PointConfiguration,
    config_equivalent,
    lifted_cone,
    normal_fan,
    placement,
    refined_normal_fan,
)

from oracles import argmin_labels, in_cone
from strategies import int_vectors

SQUARE = PointConfiguration({"a": (0, 0), "b": (1, 0), "c": (0, 1), "d": (1, 1)})


def vertices(u):
    """Labels grouped by position, keeping positions outside the hull of the rest."""
    pos = {}
    for a in u.labels:
        pos.setdefault(u.vector(a), set()).add(a)
    out = []
    for p, labels in pos.items():
        others = [q + (1,) for q in pos if q != p]
        if not in_cone(others, p + (1,)):
            out.append(frozenset(labels))
    return out


@st.composite
def configs(draw, max_points=6, max_rank=3):
    m = draw(st.integers(1, max_rank))
    k = draw(st.integers(1, max_points))
    return PointConfiguration({i: draw(int_vectors(m, -2, 2)) for i in range(k)})


class TestLiftedCone:
    def test_single_point(self):
        c = lifted_cone(PointConfiguration({0: (0,)}))
        assert c == Cone.from_inequalities([(0, 1)], 2)

    def test_segment(self):
        d = 3
        c = lifted_cone(PointConfiguration({0: (0,), 1: (d,)}))
        assert c.dual() == Cone.from_generators([(0, 1), (d, 1)], 2)

    def test_rank_mismatch(self):
        with pytest.raises(DimensionMismatch):
            lifted_cone(SQUARE, Cone.whole(3))


class TestNormalFan:
    def test_point(self):
        f = normal_fan(PointConfiguration({0: (5, 2)}))
        assert f.cones == (Cone.whole(2),)

    def test_segment(self):
        assert normal_fan(PointConfiguration({0: (0,), 1: (4,)})) == line_fan()

    def test_square(self):
        f = normal_fan(SQUARE)
        mx = f.maximal_cones()
        assert len(mx) == 4
        q1 = Cone.from_generators([(1, 0), (0, 1)], 2)
        assert q1 in mx and placement(q1, SQUARE).support == ("a",)

    @given(configs())
    def test_argmin_oracle(self, u):
        f = normal_fan(u)
        assert validate_fan(f).valid
        assert len(f.maximal_cones()) == len(vertices(u))
        for w in product(range(-2, 3), repeat=u.rank):
            c = f.carrier(w)
            assert c is not None
            assert frozenset(placement(c, u).support) == argmin_labels(u.vectors(), w)

    @given(configs(), st.data())
    def test_translation_invariance(self, u, data):
        w = data.draw(int_vectors(u.rank, -5, 5))
        assert normal_fan(u.translate(w)) == normal_fan(u)


class TestRefined:
    def test_trivial_base(self):
        assert refined_normal_fan(Fan(2, [Cone.whole(2)]), SQUARE) == normal_fan(SQUARE)

    def test_self(self):
        f = normal_fan(SQUARE)
        assert refined_normal_fan(f, SQUARE) == f

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            refined_normal_fan(line_fan(), SQUARE)

    @given(configs(max_rank=2), st.lists(int_vectors(2, -2, 2).filter(any), max_size=3))
    def test_methods_agree(self, u, extra):
        if u.rank != 2:
            return
        base = normal_fan(PointConfiguration({i: v for i, v in enumerate([(0, 0)] + extra)}))
        a = refined_normal_fan(base, u)
        assert a == refined_normal_fan(base, u, method="refinement")
        assert a == refined_normal_fan(base, u.translate((3, -1)))

    def test_workers_match(self):
        base = normal_fan(PointConfiguration({0: (0, 0), 1: (2, 1), 2: (-1, 3)}))
        assert refined_normal_fan(base, SQUARE, workers=2) == refined_normal_fan(base, SQUARE)


class TestPlacement:
    def test_origin(self):
        pl = placement(Cone.zero(2), SQUARE)
        assert pl.support == SQUARE.labels
        assert pl.reduced_map == {a: tuple(x - y for x, y in zip(SQUARE.vector(a), pl.omega)) for a in SQUARE.labels}

    def test_quadrant(self):
        assert placement(Cone.from_generators([(1, 0), (0, 1)], 2), SQUARE).support == ("a",)

    def test_straddling(self):
        with pytest.raises(NotInSingleNormalCone):
            placement(Cone.from_generators([(1, 0), (-1, 1)], 2), SQUARE)

    @given(configs())
    def test_invariants(self, u):
        for c in normal_fan(u):
            pl = placement(c, u)
            assert pl.support
            for a in u.labels:
                d = tuple(x - y for x, y in zip(u.vector(a), pl.omega))
                assert c.dual().contains(d)
                on_perp = all(sum(p * q for p, q in zip(r, d)) == 0 for r in c.rays)
                assert (a in pl.support) == on_perp


class TestEquivalence:
    def test_self(self):
        assert config_equivalent(SQUARE, SQUARE)

    def test_translate(self):
        assert config_equivalent(SQUARE, SQUARE.translate((4, -7)))

    def test_scaled(self):
        assert not config_equivalent(PointConfiguration({0: (0,), 1: (1,)}), PointConfiguration({0: (0,), 1: (2,)}))

    def test_labels(self):
        with pytest.raises(LabelMismatch):
            config_equivalent(SQUARE, PointConfiguration({"a": (0, 0)}))
