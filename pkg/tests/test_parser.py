import pytest
from hypothesis import given, settings

from crgeom.gaussian import GR
from crgeom.parsing import ParseError, parse
from crgeom.polyring import Poly
from strategies import polys

QUARTIC = "-Im(w) + 10*(|z|^2 + |w|^2)^2 + 2*Re(z*conj(z)^3)"


def test_sugar_forms():
    n = 1
    z, zb, w, wb = Poly.z(n, 1), Poly.zbar(n, 1), Poly.w(n), Poly.wbar(n)
    assert parse("|z|^2", 1) == z * zb
    assert parse("|z1|^4", 1) == (z * zb) ** 2
    assert parse("Re(w)", 1) == (w + wb) / 2
    assert parse("Im(w)", 1) == (w - wb) / GR(0, 2)
    assert parse("Re(i*w)", 1) == -parse("Im(w)", 1)
    assert parse("conj(z^2)", 1) == zb ** 2


def test_quartic_is_real_and_round_trips():
    rho = parse(QUARTIC, 1)
    assert rho.is_real()
    assert parse(str(rho), 1) == rho


def test_operators_and_precedence():
    assert parse("2*z1^2 - -3", 1) == Poly.z(1, 1) ** 2 * 2 + 3
    assert parse("z1**2/4", 1) == Poly.z(1, 1) ** 2 / 4
    assert parse("+w", 1) == Poly.w(1)
    assert parse("0.5*w", 1) == Poly.w(1) / 2
    assert parse("z1*z2", 2) == Poly.z(2, 1) * Poly.z(2, 2)


@pytest.mark.parametrize(
    "text, n, pos",
    [
        ("", 1, 0),
        ("z3", 2, 0),
        ("foo(w)", 1, 0),
        ("w / z", 1, 4),
        ("|z|^3", 1, 4),
        ("(w", 1, 2),
        ("w $ 2", 1, 2),
        ("w w", 1, 2),
    ],
)
def test_parse_errors_carry_positions(text, n, pos):
    with pytest.raises(ParseError) as info:
        parse(text, n)
    assert info.value.pos == pos


def test_bare_z_only_for_one_variable():
    with pytest.raises(ParseError):
        parse("z", 2)


@settings(max_examples=100, deadline=None)
@given(polys(n=2, max_terms=5))
def test_print_parse_round_trip(f):
    assert parse(str(f), 2) == f
