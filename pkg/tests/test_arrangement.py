from itertools import chain, combinations

import pytest

from tropvol.arrangement import (
    BadIndex,
    LinearForms,
    bergman_fan,
    chain_cone,
    chains,
    flats,
    matroid_rank,
)
from tropvol.cone import Cone
from tropvol.fan import validate_fan
from tropvol.grassmann import build_instance

from oracles import rank

P1 = LinearForms([(1, 0), (0, 1), (1, -1)])


def subsets(k):
    return chain.from_iterable(combinations(range(k), r) for r in range(k + 1))


def flat_oracle(lf):
    """Subsets equal to their closure, closure computed from raw ranks."""
    k = lf.size
    out = set()
    for a in subsets(k):
        r = rank([lf.forms[i] for i in a])
        cl = {i for i in range(k) if rank([lf.forms[j] for j in a] + [lf.forms[i]]) == r}
        if cl == set(a):
            out.add(frozenset(a))
    return out


def check_matroid_axioms(lf):
    k = lf.size
    r = {frozenset(a): matroid_rank(lf, a) for a in subsets(k)}
    for a, ra in r.items():
        assert 0 <= ra <= len(a)
        for b, rb in r.items():
            if a <= b:
                assert ra <= rb
            assert r[a | b] + r[a & b] <= ra + rb


class TestRank:
    def test_independent(self):
        assert matroid_rank(LinearForms([(1, 0), (0, 1)]), {0, 1}) == 2

    def test_empty(self):
        assert matroid_rank(P1, set()) == 0

    def test_dependent(self):
        assert matroid_rank(P1, {0, 1, 2}) == 2

    def test_grassmann_forms(self):
        lf = build_instance(4, 2).forms
        assert matroid_rank(lf, {0, 1, 2}) == 2

    def test_bad_index(self):
        with pytest.raises(BadIndex):
            matroid_rank(P1, {5})

    @pytest.mark.parametrize("lf", [P1, LinearForms([(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])])
    def test_axioms(self, lf):
        check_matroid_axioms(lf)


class TestFlats:
    def test_independent(self):
        lf = LinearForms([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert len(flats(lf)) == 8

    def test_three_lines(self):
        got = {frozenset(f.index_subset) for f in flats(P1)}
        assert got == {frozenset(), frozenset({0}), frozenset({1}), frozenset({2}), frozenset({0, 1, 2})}
        assert got == flat_oracle(P1)

    def test_single(self):
        assert [f.index_subset for f in flats(LinearForms([(1, 2)]))] == [(), (0,)]


class TestChains:
    def test_single(self):
        assert len(chains(LinearForms([(1,)]))) == 1

    def test_three_lines(self):
        # exhaustive count: chains of nonempty flats ending at the full set
        fl = [f for f in flat_oracle(P1) if f]
        full = frozenset(range(3))

        def count(top):
            return 1 + sum(count(g) for g in fl if g < top)

        assert len(chains(P1)) == count(full) == 4

    def test_only_full(self):
        assert len(chains(LinearForms([(1, 0), (0, 1)]))) == 3
        assert len(chains(LinearForms([(1, 0), (2, 0)]))) == 1


class TestBergman:
    def test_three_lines(self):
        f = bergman_fan(P1)
        assert f.n == 2
        assert len(f.rays()) == 3 and len(f) == 4
        assert validate_fan(f).valid
        # the fan is the three rays: a sum of two of them lies outside
        r0, r1, r2 = f.rays()
        assert not f.contains_point(tuple(x + y for x, y in zip(r0, r1)))
        assert tuple(x + y + z for x, y, z in zip(r0, r1, r2)) == (0, 0)

    def test_single_form(self):
        f = bergman_fan(LinearForms([(1, 0)]))
        assert f.n == 0 and f.cones == (Cone.zero(0),)

    def test_grassmann_forms_match(self):
        a, b = bergman_fan(P1), bergman_fan(build_instance(4, 2).forms)
        assert len(a) == len(b) and sorted(c.dim for c in a) == sorted(c.dim for c in b)

    @pytest.mark.parametrize("n", [4, 5])
    def test_grassmann_fan(self, n):
        lf = build_instance(n, 2).forms
        check_matroid_axioms(lf)
        assert {frozenset(f.index_subset) for f in flats(lf)} == flat_oracle(lf)
        f = bergman_fan(lf)
        assert validate_fan(f).valid
        assert all(c.is_strongly_convex() and c.is_simplicial() for c in f)
        cs = chains(lf)
        cones = [chain_cone(lf, c) for c in cs]
        assert len(set(cones)) == len(cs)
        assert all(c.dim == len(ch.proper) for c, ch in zip(cones, cs))
