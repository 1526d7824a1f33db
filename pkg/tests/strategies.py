"""Shared hypothesis strategies."""

from hypothesis import strategies as st


def int_vectors(n, lo=-4, hi=4):
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n).map(tuple)


def nonzero_vectors(n, lo=-4, hi=4):
    return int_vectors(n, lo, hi).filter(any)


@st.composite
def matrices(draw, max_rows=4, max_cols=4, lo=-6, hi=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [list(draw(int_vectors(c, lo, hi))) for _ in range(r)]


@st.composite
def generator_sets(draw, n=None, max_gens=5, lo=-3, hi=3):
    n = n if n is not None else draw(st.integers(1, 3))
    k = draw(st.integers(0, max_gens))
    return n, [draw(nonzero_vectors(n, lo, hi)) for _ in range(k)]
