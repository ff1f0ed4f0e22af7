from fractions import Fraction

import pytest

from crgeom.construct import (
    FamilyParams,
    SampleExhausted,
    compactness_check,
    derived_R_threshold,
    is_monomial_square_combination,
    make_PR,
    make_rho,
    make_s,
    projective_image,
    projective_swap,
    real_expansion,
    sample_points_on_M,
    smoothness_check,
    transform_to_infinity,
    w_slice_is_trivial,
)
from crgeom.gaussian import GR, ZERO
from crgeom.geometry import Hypersurface, is_strictly_pseudoconvex_at, on_hypersurface
from crgeom.parsing import parse
from crgeom.polyring import Point, evaluate


def pt(*coords):
    return Point([GR(*c) if isinstance(c, tuple) else GR(c) for c in coords])


def test_PR_values():
    P1 = make_PR(FamilyParams(1, 1))
    assert evaluate(P1, pt(1, 0)) == 3
    for R in (1, 10, 20):
        P = make_PR(FamilyParams(1, R))
        assert evaluate(P, pt((0, 1), 0)) == R - 2
        assert evaluate(P, Point.origin(1)) == 0


def test_PR_matches_parsed_text():
    P = make_PR(FamilyParams(1, 10))
    assert P == parse("10*(|z|^2 + |w|^2)^2 + 2*Re(z*conj(z)^3)", 1)


def test_PR_homogeneous_quartic():
    params = FamilyParams(2, 20)
    P = make_PR(params)
    assert P.degree() == 4 and P.order() == 4
    assert P.homogeneous_part(2).is_zero()
    p = pt((1, 2), (Fraction(1, 3), -1), (0, 1))
    for lam in (Fraction(2), Fraction(3), Fraction(1, 2)):
        q = Point([c * lam for c in p.coords])
        assert evaluate(P, q) == lam ** 4 * evaluate(P, p)


def test_family_params_validation():
    with pytest.raises(ValueError):
        FamilyParams(0, 10)
    with pytest.raises(ValueError):
        FamilyParams(1, 0)
    assert FamilyParams(1, "5/2").R == Fraction(5, 2)


def test_rho_is_real_with_origin():
    M = make_rho(FamilyParams(1, 10))
    assert M.rho.is_real()
    assert on_hypersurface(M, Point.origin(1))


def test_real_expansion_of_s():
    s = real_expansion(make_s(1))
    assert is_monomial_square_combination(s)
    assert not is_monomial_square_combination(real_expansion(parse("Re(z^2)", 1)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_threshold_certificate(n):
    cert = derived_R_threshold(n)
    assert cert.valid
    assert cert.R0 == max(2 * n, 3)
    assert cert.positivity_bound(10) == 10 - 2 * n
    assert cert.levi_bound(10) == 14
    assert all(step.identity_holds for step in cert.steps())


def test_compactness():
    assert compactness_check(make_rho(FamilyParams(1, 10))).compact
    assert compactness_check(make_rho(FamilyParams(2, 20))).compact
    assert not compactness_check(Hypersurface(parse("-Im(w) + |z|^2", 1))).compact
    neg = parse("-Im(w) - (|z|^2 + |w|^2)^2 + 2*Re(z*conj(z)^3)", 1)
    assert not compactness_check(Hypersurface(neg)).compact
    assert compactness_check(Hypersurface(parse("|z|^2 + |w|^2 - 1", 1))).compact


@pytest.mark.parametrize("n, R", [(1, 10), (2, 20)])
def test_smoothness_certified(n, R):
    rep = smoothness_check(FamilyParams(n, R), samples=20)
    assert rep.smooth and rep.verdict == "certified"
    assert rep.samples_checked == 20
    assert all(step.ok for step in rep.steps)


def test_smoothness_small_R_not_certified():
    rep = smoothness_check(FamilyParams(1, 1), samples=5)
    assert rep.verdict != "certified"


def test_samples_on_M_and_deterministic():
    params = FamilyParams(1, 10)
    M = make_rho(params)
    a = sample_points_on_M(params, 20, seed=7)
    b = sample_points_on_M(params, 20, seed=7)
    assert a == b
    assert len(set(a)) == 20
    for p in a:
        assert on_hypersurface(M, p) and not p.is_origin()


def test_samples_n2():
    params = FamilyParams(2, 20)
    M = make_rho(params)
    for p in sample_points_on_M(params, 5, seed=1):
        assert on_hypersurface(M, p)


def test_sample_exhausted_carries_partial_list():
    err = SampleExhausted([1, 2], 5)
    assert err.found == [1, 2] and err.requested == 5


def test_projective_swap_involution():
    rho = make_rho(FamilyParams(1, 10)).rho
    hat = projective_swap(rho, 4)
    assert projective_swap(hat, 4) == rho
    with pytest.raises(ValueError):
        projective_swap(rho, 1)


def test_projective_image():
    assert projective_image(pt(2, 4)) == pt(Fraction(1, 2), Fraction(1, 4))
    with pytest.raises(ZeroDivisionError):
        projective_image(pt(1, 0))


def test_w_slice():
    assert w_slice_is_trivial(FamilyParams(1, 10))
    assert not w_slice_is_trivial(FamilyParams(1, 2))


def test_transform():
    params = FamilyParams(1, 10)
    M = make_rho(params)
    T = transform_to_infinity(M, params)
    assert T.rho_hat.is_real()
    assert T.clearing_degree == 8 and T.d == 4
    Mh = T.hypersurface()
    for p in sample_points_on_M(params, 8, seed=2):
        q = projective_image(p)
        assert on_hypersurface(Mh, q)
        assert is_strictly_pseudoconvex_at(Mh, q)
    with pytest.raises(ValueError):
        transform_to_infinity(make_rho(FamilyParams(1, 2)), FamilyParams(1, 2))


def test_transform_value_identity():
    # rho_hat(z/w, 1/w) * |w|^8 == rho(z, w)
    params = FamilyParams(1, 10)
    rho = make_rho(params).rho
    hat = transform_to_infinity(make_rho(params)).rho_hat
    p = pt((1, 2), (3, -1))
    w = p.coords[-1]
    assert evaluate(hat, projective_image(p)) * w.abs2() ** 4 == evaluate(rho, p)
    assert evaluate(hat, projective_image(p)) != ZERO
