from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from crgeom.certify import (
    GridSpec,
    HomogeneityError,
    default_resolution,
    least_eigenvalue_lower_bound,
    levi_min_eig_oracle,
    sphere_min_oracle,
    sphere_points,
)
from crgeom.construct import FamilyParams, make_PR
from crgeom.gaussian import GR, ZERO
from crgeom.linalg import HermitianMatrixExact
from crgeom.parsing import parse
from strategies import real_polys


def test_points_are_exactly_on_unit_sphere():
    for n, r in [(1, 6), (2, 3)]:
        pts = sphere_points(n, r)
        assert len(set(pts)) == len(pts)
        for p in pts:
            assert sum((c.abs2() for c in p.coords), Fraction(0)) == 1


def test_grids_are_nested():
    coarse = set(sphere_points(1, 4))
    fine = set(sphere_points(1, 8))
    assert coarse <= fine and len(fine) > len(coarse)


def test_default_resolution():
    assert default_resolution(1) == 32
    assert default_resolution(2) == 8
    with pytest.raises(ValueError):
        GridSpec(0)


def test_sphere_min_of_s_squared():
    s = parse("|z|^2 + |w|^2", 1)
    rep = sphere_min_oracle(s * s, GridSpec(6, 1), bound=1)
    assert rep.minimum_value == 1 and rep.consistent
    assert rep.label == "sampled evidence"
    bad = sphere_min_oracle(-(s * s), GridSpec(6, 1), bound=0)
    assert bad.minimum_value == -1 and bad.consistent is False


def test_sphere_min_rejects_inhomogeneous():
    with pytest.raises(HomogeneityError):
        sphere_min_oracle(parse("|z|^2 + |w|^4", 1), GridSpec(4, 1))
    with pytest.raises(ValueError):
        sphere_min_oracle(parse("z", 1), GridSpec(4, 1))


def test_family_minimum_coarse():
    # P_R(i, 0) = R - 2 is attained on every grid containing z = i
    rep = sphere_min_oracle(make_PR(FamilyParams(1, 10)), GridSpec(8, 1), bound=8)
    assert rep.minimum_value == 8 and rep.consistent


def test_least_eigenvalue_bound():
    A = HermitianMatrixExact([[GR(2), GR(1)], [GR(1), GR(2)]])
    assert least_eigenvalue_lower_bound(A) == 1
    B = HermitianMatrixExact([[GR(2), ZERO], [ZERO, GR(3)]])
    lo = least_eigenvalue_lower_bound(HermitianMatrixExact([[GR(0), GR(1)], [GR(1), GR(1)]]))
    # (1 - sqrt 5)/2 ~ -0.618
    assert lo <= Fraction(-618, 1000) and lo > Fraction(-619, 1000)
    assert least_eigenvalue_lower_bound(B) == 2


def test_levi_oracle_simple_forms():
    rep = levi_min_eig_oracle(parse("|z|^2 - |w|^2", 1), GridSpec(4, 1), bound=0)
    assert rep.minimum_value == -1 and rep.consistent is False
    s = parse("|z|^2 + |w|^2", 1)
    rep = levi_min_eig_oracle(s * s, GridSpec(4, 1), bound=2)
    assert rep.minimum_value == 2 and rep.consistent


@settings(max_examples=100, deadline=None)
@given(real_polys(max_terms=4, max_exp=1))
def test_refinement_is_monotone(f):
    f = f.homogeneous_part(2)
    assume(not f.is_zero())
    coarse = sphere_min_oracle(f, GridSpec(4, 1)).minimum_value
    fine = sphere_min_oracle(f, GridSpec(8, 1)).minimum_value
    assert fine <= coarse
