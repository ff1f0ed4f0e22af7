from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from crgeom.gaussian import GR, I, ONE, ZERO
from crgeom.polyring import Point, Poly, VarIndex, conj_involution, evaluate, evaluate_polarized
from strategies import gaussians, points, polys


def test_gaussian_arithmetic():
    a = GR(1, 2)
    b = GR(Fraction(1, 3), -1)
    assert a * b == GR(Fraction(1, 3) + 2, Fraction(2, 3) - 1)
    assert a / a == ONE
    assert (a * b) / b == a
    assert I * I == -1
    assert a.conjugate() == GR(1, -2)
    assert a.abs2() == 5
    assert GR(3) == 3 and GR(3) == Fraction(3)
    assert hash(GR(3)) == hash(3)
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_gaussian_rendering():
    assert str(GR(Fraction(1, 2), Fraction(3, 4))) == "1/2+3/4*i"
    assert str(GR(Fraction(-1, 2), Fraction(-3, 4))) == "-1/2-3/4*i"
    assert str(GR(0, 1)) == "i"
    assert str(GR(0, -1)) == "-i"
    assert str(GR(0, Fraction(1, 2))) == "1/2*i"
    assert str(GR(5)) == "5"
    assert str(GR(0)) == "0"


def test_gaussian_immutable():
    a = GR(1)
    with pytest.raises(AttributeError):
        a.re = Fraction(2)


def test_slots_and_constructors():
    n = 2
    assert VarIndex("z", 1).slot(n) == 0
    assert VarIndex("w").slot(n) == 2
    assert VarIndex("zbar", 2).slot(n) == 4
    assert VarIndex("wbar").slot(n) == 5
    for s in range(6):
        assert VarIndex.from_slot(s, n).slot(n) == s
    with pytest.raises(ValueError):
        VarIndex("z", 3).slot(n)
    assert Poly.z(n, 2).conj() == Poly.zbar(n, 2)
    assert Poly.w(n).conj() == Poly.wbar(n)


def test_canonical_printing():
    n = 1
    z, zb, w = Poly.z(n, 1), Poly.zbar(n, 1), Poly.w(n)
    f = z * zb + w.scale(GR(0, Fraction(1, 2))) - 3 + zb ** 2
    assert str(f) == "conj(z1)^2 + z1*conj(z1) + 1/2*i*w - 3"
    assert str(Poly.zero(n)) == "0"
    assert str(-z) == "-z1"
    assert str(z.scale(GR(1, 1))) == "(1+i)*z1"


def test_degree_order_truncate():
    n = 1
    z, w = Poly.z(n, 1), Poly.w(n)
    f = z + w ** 3 + z * w
    assert f.degree() == 3 and f.order() == 1
    assert f.truncate(2) == z + z * w
    assert f.homogeneous_part(3) == w ** 3
    assert Poly.zero(n).degree() == -1


def test_derivative_examples():
    n = 1
    z, zb = Poly.z(n, 1), Poly.zbar(n, 1)
    f = z ** 3 * zb
    assert f.derivative(0) == (z ** 2 * zb).scale(3)
    assert f.derivative(VarIndex("zbar", 1)) == z ** 3
    assert f.derivative(VarIndex("w")).is_zero()


def test_substitute_and_shift():
    n = 1
    z, w = Poly.z(n, 1), Poly.w(n)
    zb, wb = Poly.zbar(n, 1), Poly.wbar(n)
    f = z * zb + w
    g = f.substitute([z + 1, w, zb + 1, wb])
    assert g == z * zb + z + zb + 1 + w
    p = Point([GR(1, 1), GR(2)])
    sh = f.shift(p)
    assert sh.constant_term() == evaluate(f, p)
    q = Point([GR(Fraction(1, 3), -1), GR(0, 2)])
    moved = Point([a + b for a, b in zip(p.coords, q.coords)])
    assert evaluate(sh, q) == evaluate(f, moved)


def test_linear_change():
    n = 1
    z, w = Poly.z(n, 1), Poly.w(n)
    f = z * Poly.zbar(n, 1) + w
    A = [[GR(0), GR(1)], [GR(1), GR(0)]]
    g = f.linear_change(A)
    assert g == w * Poly.wbar(n) + z


def test_evaluate_conjugates_barred_slots():
    n = 1
    f = Poly.z(n, 1) * Poly.zbar(n, 1)
    p = Point([GR(3, 4), GR(0)])
    assert evaluate(f, p) == 25
    assert evaluate_polarized(f, p, Point([GR(1), GR(0)])) == GR(3, 4)


# -- independent oracle: sympy ----------------------------------------------

def to_sympy(f: Poly, syms):
    out = sympy.Integer(0)
    for e, c in f.terms.items():
        t = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        for s, k in zip(syms, e):
            t *= s ** k
        out += t
    return sympy.expand(out)


SYMS = sympy.symbols("z1 w zb1 wb")


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_product_matches_sympy(f, g):
    assert sympy.expand(to_sympy(f * g, SYMS) - to_sympy(f, SYMS) * to_sympy(g, SYMS)) == 0


@settings(max_examples=100, deadline=None)
@given(polys(), st.integers(0, 3))
def test_derivative_matches_sympy(f, slot):
    assert sympy.expand(to_sympy(f.derivative(slot), SYMS) - sympy.diff(to_sympy(f, SYMS), SYMS[slot])) == 0


# -- properties -------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + Poly.zero(1) == f
    assert f * Poly.const(1, 1) == f
    assert (f - f).is_zero()


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), st.integers(0, 3))
def test_leibniz_rule(f, g, slot):
    assert (f * g).derivative(slot) == f.derivative(slot) * g + f * g.derivative(slot)


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), points())
def test_conjugation_involution(f, g, p):
    assert conj_involution(conj_involution(f)) == f
    assert (f * g).conj() == f.conj() * g.conj()
    assert (f + g).conj() == f.conj() + g.conj()
    assert evaluate(f.conj(), p) == evaluate(f, p).conjugate()
    assert (f + f.conj()).is_real()


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), points())
def test_evaluation_is_a_homomorphism(f, g, p):
    assert evaluate(f * g, p) == evaluate(f, p) * evaluate(g, p)
    assert evaluate(f + g, p) == evaluate(f, p) + evaluate(g, p)


@settings(max_examples=100, deadline=None)
@given(polys(max_exp=3), polys(max_exp=3), st.integers(0, 5))
def test_truncated_product(f, g, cap):
    assert f.mul_trunc(g, cap) == (f * g).truncate(cap)


@settings(max_examples=100, deadline=None)
@given(polys(), gaussians)
def test_scale_and_division(f, c):
    if c:
        assert f.scale(c) / c == f
