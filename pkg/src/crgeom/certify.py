"""Sampled evidence on the unit sphere, used to cross-check the certificates.

Grid points are exact: every angle theta gets a rational t ~ tan(theta/2)
and cos, sin = (1-t^2)/(1+t^2), 2t/(1+t^2), so hyperspherical coordinates
give points of norm exactly 1.  The rational t depends only on the reduced
angle fraction, so the grid at resolution r is contained in the grid at 2r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .gaussian import GR, GaussianRational
from .geometry import hessian_polys
from .linalg import HermitianMatrixExact, charpoly, least_root_bracket
from .polyring import Point, Poly, evaluate

__all__ = [
    "GridSpec",
    "OracleReport",
    "HomogeneityError",
    "sphere_points",
    "sphere_min_oracle",
    "levi_min_eig_oracle",
    "least_eigenvalue_lower_bound",
    "default_resolution",
]

EVIDENCE = "sampled evidence"


class HomogeneityError(ValueError):
    pass


def default_resolution(n: int) -> int:
    """32 for n = 1; coarser in higher dimension where the grid grows as r^(2n+1)."""
    return 32 if n == 1 else 8


@lru_cache(maxsize=None)
def _cos_sin(angle: Fraction) -> tuple[Fraction, Fraction]:
    """Rational point on the unit circle near angle*pi (angle in [0, 2])."""
    angle = angle % 2
    if angle == 0:
        return Fraction(1), Fraction(0)
    if angle == 1:
        return Fraction(-1), Fraction(0)
    t = Fraction(math.tan(math.pi * float(angle) / 2)).limit_denominator(4096)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


@dataclass(frozen=True)
class GridSpec:
    resolution: int
    n: int = 1

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("resolution must be positive")

    def points(self) -> list[Point]:
        return sphere_points(self.n, self.resolution)


@lru_cache(maxsize=16)
def _sphere_points(n: int, r: int) -> tuple:
    dim = 2 * n + 2
    polar = [Fraction(k, r) for k in range(r + 1)]
    azim = [Fraction(2 * k, r) for k in range(r)]
    seen = set()
    out = []
    for angles in product(*([polar] * (dim - 2) + [azim])):
        x = []
        sin_acc = Fraction(1)
        for a in angles[:-1]:
            c, s = _cos_sin(a)
            x.append(sin_acc * c)
            sin_acc *= s
        c, s = _cos_sin(angles[-1])
        x.append(sin_acc * c)
        x.append(sin_acc * s)
        key = tuple(x)
        if key in seen:
            continue
        seen.add(key)
        out.append(Point([GR(x[2 * a], x[2 * a + 1]) for a in range(n + 1)]))
    return tuple(out)


def sphere_points(n: int, resolution: int) -> list[Point]:
    """Distinct exact points of the unit sphere in C^{n+1}."""
    return list(_sphere_points(n, resolution))


@dataclass(frozen=True)
class OracleReport:
    minimum_value: Fraction
    argmin: Point
    samples: int
    bound_checked: Fraction | None
    consistent: bool | None
    label: str = EVIDENCE


def _check_homogeneous(f: Poly) -> int:
    d = f.degree()
    probe = Point([GR(Fraction(k + 2, 3), Fraction(1, k + 5)) for k in range(f.n + 1)])
    base = evaluate(f, probe)
    for lam in (Fraction(2), Fraction(3), Fraction(1, 2)):
        scaled = Point([c * lam for c in probe.coords])
        if evaluate(f, scaled) != base * lam ** d:
            raise HomogeneityError(f"not homogeneous of degree {d}")
    return d


def _verdict(value: Fraction, bound) -> bool | None:
    return None if bound is None else value >= Fraction(bound)


def sphere_min_oracle(f: Poly, grid: GridSpec, bound=None) -> OracleReport:
    """Exact minimum of a real homogeneous f over the sphere grid."""
    if not f.is_real():
        raise ValueError("f must be real")
    _check_homogeneous(f)
    pts = sphere_points(f.n, grid.resolution)
    best = None
    arg = None
    d = f.degree()
    fc = _ScaledPoly(f, d)
    for p in pts:
        vals, D = _integer_coords(p)
        v = Fraction(fc(vals, D)[0], fc.L * D ** d)
        if best is None or v < best:
            best, arg = v, p
    return OracleReport(best, arg, len(pts), None if bound is None else Fraction(bound), _verdict(best, bound))


class _ScaledPoly:
    """Polynomial evaluated at integer-scaled points.

    With Z = Zint/D, returns the value times L*D^dmax as a pair of integers,
    where L clears the coefficient denominators.
    """

    def __init__(self, f: Poly, dmax: int):
        L = 1
        for c in f.terms.values():
            L = math.lcm(L, c.re.denominator, c.im.denominator)
        self.L = L
        self.dmax = dmax
        self.terms = [(e, int(c.re * L), int(c.im * L), dmax - sum(e)) for e, c in f.terms.items()]

    def __call__(self, vals, D: int) -> tuple[int, int]:
        tr = ti = 0
        for e, cr, ci, extra in self.terms:
            ar, ai = cr, ci
            for slot, k in enumerate(e):
                if k:
                    br, bi = vals[slot]
                    for _ in range(k):
                        ar, ai = ar * br - ai * bi, ar * bi + ai * br
            if extra:
                scale = D ** extra
                ar, ai = ar * scale, ai * scale
            tr += ar
            ti += ai
        return tr, ti


def _integer_coords(p: Point) -> tuple[list, int]:
    D = 1
    for c in p.coords:
        D = math.lcm(D, c.re.denominator, c.im.denominator)
    hol = [(int(c.re * D), int(c.im * D)) for c in p.coords]
    return hol + [(a, -b) for a, b in hol], D


def least_eigenvalue_lower_bound(A: HermitianMatrixExact, tol: Fraction = Fraction(1, 1024)) -> Fraction:
    """Rational lower bound within ``tol`` of the least eigenvalue (exact when hit)."""
    lo, hi, exact = least_root_bracket(charpoly(A), tol)
    return lo


def levi_min_eig_oracle(f: Poly, grid: GridSpec, bound=None, tol: Fraction = Fraction(1, 1024)) -> OracleReport:
    """Grid minimum of least-eigenvalue lower bounds of the complex Hessian of f."""
    if not f.is_real():
        raise ValueError("f must be real")
    H = hessian_polys(f)
    dmax = max((h.degree() for row in H for h in row), default=0)
    dmax = max(dmax, 0)
    compiled = [[_ScaledPoly(h, dmax) for h in row] for row in H]
    L = 1
    for row in compiled:
        for h in row:
            L = math.lcm(L, h.L)
    pts = sphere_points(f.n, grid.resolution)
    best = None
    arg = None
    for p in pts:
        vals, D = _integer_coords(p)
        scale = L * D ** dmax
        entries = []
        for row in compiled:
            out = []
            for h in row:
                re, im = h(vals, D)
                k = L // h.L
                out.append(GaussianRational(re * k, im * k))
            entries.append(out)
        # eigenvalues of the integer matrix are scale * eigenvalues of the Hessian
        cp = charpoly(HermitianMatrixExact(entries))
        d = len(cp) - 1
        cp = [Fraction(c, scale ** (d - i)) for i, c in enumerate(cp)]
        v, _, _ = least_root_bracket(cp, tol)
        if best is None or v < best:
            best, arg = v, p
    return OracleReport(best, arg, len(pts), None if bound is None else Fraction(bound), _verdict(best, bound))
