"""Hypothesis strategies for small random polynomials and points."""

from fractions import Fraction

from hypothesis import strategies as st

from crgeom.gaussian import GR
from crgeom.polyring import Point, Poly

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_fractions = small_fractions.filter(bool)
gaussians = st.builds(GR, small_fractions, small_fractions)


def exponents(n, max_exp=2):
    return st.tuples(*[st.integers(0, max_exp)] * (2 * n + 2))


def polys(n=1, max_terms=4, max_exp=2):
    return st.dictionaries(exponents(n, max_exp), gaussians, max_size=max_terms).map(lambda t: Poly(n, t))


def real_polys(n=1, max_terms=3, max_exp=2):
    return polys(n, max_terms, max_exp).map(lambda f: f + f.conj())


def points(n=1):
    return st.lists(gaussians, min_size=n + 1, max_size=n + 1).map(Point)


def invertible_matrices(m):
    def build(entries):
        return [entries[i * m:(i + 1) * m] for i in range(m)]

    from crgeom.linalg import rank

    return st.lists(gaussians, min_size=m * m, max_size=m * m).map(build).filter(lambda A: rank(A) == m)
