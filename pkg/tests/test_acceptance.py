"""Acceptance criteria 1-9.  Each test prints one PASS/FAIL line."""

import time
from fractions import Fraction

from hypothesis import assume, given, settings

import conftest
from crgeom.certify import GridSpec, levi_min_eig_oracle, sphere_min_oracle
from crgeom.construct import (
    FamilyParams,
    derived_R_threshold,
    make_PR,
    make_rho,
    projective_image,
    sample_points_on_M,
    transform_to_infinity,
)
from crgeom.crfields import nondegeneracy_order, values_at
from crgeom.gaussian import GR, ZERO
from crgeom.geometry import (
    Hypersurface,
    hessian_polys,
    is_strictly_pseudoconvex_at,
    levi_matrix,
    on_hypersurface,
    tangential_signature,
)
from crgeom.jets import (
    Jet,
    MapGerm,
    essential_type,
    multiplicity_jet,
    proposition_check_at,
    reality_check,
    solve_graph,
    verify_map_identity,
)
from crgeom.linalg import Signature, hermitian_signature
from crgeom.parsing import parse
from crgeom.polyring import Point, Poly, evaluate
from strategies import invertible_matrices, points, polys, real_polys

FAMILIES = [(1, 10), (2, 20)]


def record(number, title, limit, body):
    start = time.perf_counter()
    err = None
    try:
        body()
    except AssertionError as exc:
        err = exc
    elapsed = time.perf_counter() - start
    if err is None and elapsed > limit:
        err = AssertionError(f"took {elapsed:.1f}s, limit {limit}s")
    status = "PASS" if err is None else "FAIL"
    line = f"criterion {number}: {status} ({elapsed:.1f}s) {title}"
    if err is not None:
        line += f" -- {err}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    if err is not None:
        raise err


def test_criterion_1_origin_values():
    def body():
        for n, R in FAMILIES:
            M = make_rho(FamilyParams(n, R))
            o = Point.origin(n)
            assert M.gradient_at(o) == [ZERO] * n + [-GR(0, 2).inverse()]
            vals = values_at(M, o, 3)
            for I, v in vals.items():
                if I == (0,) * n:
                    continue
                if 3 in I:
                    j = I.index(3)
                    assert v == [GR(6) if k == j else ZERO for k in range(n + 1)], (n, I)
                else:
                    assert v == [ZERO] * (n + 1), (n, I)
            assert nondegeneracy_order(M, o).order == 3

    record(1, "origin gradient, L^I rho_Z values and order 3 (n=1,2)", 60, body)


def test_criterion_2_pseudoconvexity_dichotomy():
    def body():
        for n, R in FAMILIES:
            params = FamilyParams(n, R)
            M = make_rho(params)
            assert tangential_signature(M, Point.origin(n)) == Signature(0, 0, n)
            pts = sample_points_on_M(params, 20, seed=0)
            assert len(pts) >= 20
            for p in pts:
                assert not p.is_origin()
                assert tangential_signature(M, p) == Signature(n, 0, 0), (n, p)

    record(2, "signature (n,0,0) at 20 sample points, (0,0,n) at the origin", 120, body)


def test_criterion_3_certificates_vs_oracles():
    def body():
        cert = derived_R_threshold(1)
        assert cert.valid and Fraction(10) > cert.R0
        P = make_PR(FamilyParams(1, 10))
        grid = GridSpec(32, 1)
        pos = sphere_min_oracle(P, grid, bound=cert.positivity_bound(10))
        assert cert.positivity_bound(10) == 8
        assert pos.consistent, pos.minimum_value
        levi = levi_min_eig_oracle(P, grid, bound=cert.levi_bound(10))
        assert cert.levi_bound(10) == 14
        assert levi.consistent, levi.minimum_value

    record(3, "grid-32 minima of P_R >= 8 and least Levi eigenvalue >= 14", 300, body)


def test_criterion_4_ellipsoid_identity():
    def body():
        z, w = Poly.z(1, 1), Poly.w(1)
        ball = parse("|z|^2 + |w|^2 - 1", 1)
        for p in (2, 3):
            for q in (2, 3):
                ell = parse(f"|z|^{2 * p} + |w|^{2 * q} - 1", 1)
                comp = ball.substitute([z ** p, w ** q, Poly.zbar(1, 1) ** p, Poly.wbar(1) ** q])
                assert (comp - ell).is_zero()
                assert verify_map_identity(ell, ball, [z ** p, w ** q], 2).exact_identity

    record(4, "sphere composed with (z^p, w^q) equals the ellipsoid, p,q in {2,3}", 5, body)


def _standard_monomials(p, q):
    # the monomial ideal (z^p, w^q) has standard monomials z^a w^b, a < p, b < q
    return sum(1 for a in range(10) for b in range(10) if a < p and b < q)


def test_criterion_5_jet_suite():
    def body():
        rep, _ = essential_type(parse("-Im(w) + |z|^2", 1), 6)
        assert rep.stabilized and rep.value == 1
        assert [c for d, c in rep.per_degree if d <= 4][-3:] == [1, 1, 1]
        rep, _ = essential_type(parse("-Im(w) + |z1|^4", 1), 6)
        assert rep.stabilized and rep.value == 2
        z, w = Poly.z(1, 1), Poly.w(1)
        for p in range(1, 5):
            for q in range(1, 5):
                m = multiplicity_jet(MapGerm((z ** p, w ** q)), 10)
                assert m.stabilized and m.value == p * q == _standard_monomials(p, q)
        bad = multiplicity_jet(MapGerm((z * z, z * w)), 8)
        assert not bad.stabilized

    record(5, "esstype 1 and 2, mult(z^p, w^q) = pq, (z^2, zw) non-stabilizing", 60, body)


def test_criterion_6_reality_condition():
    def body():
        rho = make_rho(FamilyParams(1, 10)).rho
        Q = solve_graph(rho, 7)
        assert reality_check(Q, 7)
        e = (1, 0, 2, 0)  # z*chi^2
        bad = Jet(Q.body + Poly.monomial(1, e, GR(1)), Q.cap, Q.slots)
        assert not reality_check(bad, 7)

    record(6, "reality condition mod degree 7 and corruption detected", 30, body)


def test_criterion_7_transform():
    def body():
        params = FamilyParams(1, 10)
        T = transform_to_infinity(make_rho(params), params)
        assert T.rho_hat.is_real()
        Mh = T.hypersurface()
        for p in sample_points_on_M(params, 20, seed=0):
            q = projective_image(p)
            assert on_hypersurface(Mh, q)
            assert is_strictly_pseudoconvex_at(Mh, q)

    record(7, "transformed rho real, 20 images on it and strictly pseudoconvex", 120, body)


def test_criterion_8_proposition():
    def body():
        z, w = Poly.z(1, 1), Poly.w(1)
        ell = parse("|z|^4 + |w|^4 - 1", 1)
        ball = parse("|z|^2 + |w|^2 - 1", 1)
        p = Point([GR(Fraction(15, 41), Fraction(12, 41)), GR(Fraction(38, 41), Fraction(14, 41))])
        assert evaluate(ell, p) == 0
        assert tangential_signature(Hypersurface(ell), p).zero == 0
        rep, extra = proposition_check_at(ell, ball, [z ** 2, w ** 2], p, 6)
        assert extra["map_identity"].holds
        assert rep.inclusion_holds and rep.inclusion_through_target
        assert rep.conclusive and rep.mult.value == rep.esstype.value == 1
        assert rep.inequality_holds

    record(8, "ellipsoid-to-sphere: inclusion holds, mult = esstype = 1", 60, body)


def test_criterion_9_property_suites():
    counts = {}

    def tick(name):
        counts[name] = counts.get(name, 0) + 1

    cfg = settings(max_examples=100, deadline=None, database=None)

    @cfg
    @given(polys(), polys(), polys())
    def ring(f, g, h):
        assert (f * g) * h == f * (g * h) and f * (g + h) == f * g + f * h and f + g == g + f
        tick("ring axioms")

    @cfg
    @given(polys(), polys())
    def leibniz(f, g):
        for slot in range(4):
            assert (f * g).derivative(slot) == f.derivative(slot) * g + f * g.derivative(slot)
        tick("derivation rule")

    @cfg
    @given(polys(), points())
    def involution(f, p):
        assert f.conj().conj() == f and evaluate(f.conj(), p) == evaluate(f, p).conjugate()
        tick("involution")

    @cfg
    @given(real_polys(), points(), invertible_matrices(2))
    def signature(f, p, A):
        Ap = Point([sum((A[i][j] * p.coords[j] for j in range(2)), ZERO) for i in range(2)])
        assert hermitian_signature(levi_matrix(f.linear_change(A), p)) == hermitian_signature(levi_matrix(f, Ap))
        tick("signature invariance")

    @cfg
    @given(real_polys(), points())
    def hermitian(f, p):
        vals = [[evaluate(h, p) for h in row] for row in hessian_polys(f)]
        assert all(vals[a][b] == vals[b][a].conjugate() for a in range(2) for b in range(2))
        tick("Levi Hermitianity")

    @cfg
    @given(real_polys(max_terms=4, max_exp=1))
    def refinement(f):
        f = f.homogeneous_part(2)
        assume(not f.is_zero())
        assert sphere_min_oracle(f, GridSpec(8, 1)).minimum_value <= sphere_min_oracle(f, GridSpec(4, 1)).minimum_value
        tick("grid refinement")

    def body():
        for prop in (ring, leibniz, involution, signature, hermitian, refinement):
            prop()
        assert len(counts) == 6, counts
        for name, c in counts.items():
            assert c >= 100, f"{name}: only {c} cases"

    record(9, "six property suites, >= 100 cases each", 600, body)
