"""The quartic family rho = -Im w + P_R and its projective transform.

P_R = R*s^2 + 2*sum Re(z_k conj(z_k)^3) with s = |z|^2 + |w|^2.

Certificates are checked, not trusted: every claimed inequality is reduced to
a polynomial identity plus a polynomial that, written in real coordinates
Z = x + i*y, has only positive coefficients on even monomials.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .gaussian import GR, I, ZERO
from .geometry import Hypersurface
from .linalg import poly_gcd
from .polyring import Point, Poly, evaluate

__all__ = [
    "FamilyParams",
    "CertificateStep",
    "ThresholdCertificate",
    "CompactnessReport",
    "SmoothnessReport",
    "TransformedSurface",
    "SampleExhausted",
    "CertificateError",
    "make_s",
    "make_PR",
    "make_rho",
    "real_expansion",
    "is_monomial_square_combination",
    "derived_R_threshold",
    "compactness_check",
    "smoothness_check",
    "sample_points_on_M",
    "transform_to_infinity",
    "projective_image",
    "projective_swap",
    "w_slice_is_trivial",
]


class CertificateError(RuntimeError):
    """A certificate identity failed to verify (an implementation bug)."""


class SampleExhausted(RuntimeError):
    def __init__(self, found: list, requested: int):
        super().__init__(f"found only {len(found)} of {requested} rational points")
        self.found = found
        self.requested = requested


@dataclass(frozen=True)
class FamilyParams:
    n: int
    R: Fraction

    def __post_init__(self):
        object.__setattr__(self, "R", Fraction(self.R))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.R <= 0:
            raise ValueError("R must be positive")


def make_s(n: int) -> Poly:
    s = Poly.w(n) * Poly.wbar(n)
    for k in range(1, n + 1):
        s = s + Poly.z(n, k) * Poly.zbar(n, k)
    return s


def make_PR(params: FamilyParams) -> Poly:
    n = params.n
    s = make_s(n)
    P = (s * s).scale(params.R)
    for k in range(1, n + 1):
        z, zb = Poly.z(n, k), Poly.zbar(n, k)
        P = P + z * zb ** 3 + zb * z ** 3
    return P


def make_rho(params: FamilyParams) -> Hypersurface:
    n = params.n
    minus_im_w = (Poly.w(n) - Poly.wbar(n)).scale(I / 2)
    return Hypersurface(minus_im_w + make_PR(params))


# -- certificates ---------------------------------------------------------------

def real_expansion(f: Poly) -> Poly:
    """Rewrite f in real coordinates: slot a holds x_a and slot m+a holds y_a.

    The result is returned in the same ring layout purely as storage; for a
    real f all coefficients come out real.
    """
    n = f.n
    m = n + 1
    x = [Poly.var(n, a) for a in range(m)]
    y = [Poly.var(n, m + a) for a in range(m)]
    images = [x[a] + y[a].scale(I) for a in range(m)] + [x[a] - y[a].scale(I) for a in range(m)]
    return f.substitute(images)


def is_monomial_square_combination(f: Poly) -> bool:
    """All coefficients positive reals and all exponents even."""
    for e, c in f.terms.items():
        if c.im or c.re <= 0 or any(k % 2 for k in e):
            return False
    return True


@dataclass(frozen=True)
class CertificateStep:
    name: str
    identity_holds: bool
    nonnegative: bool | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.identity_holds and self.nonnegative is not False


@dataclass(frozen=True)
class ThresholdCertificate:
    n: int
    R0: Fraction
    positivity: tuple
    plurisubharmonicity: tuple

    @property
    def valid(self) -> bool:
        return all(s.ok for s in self.positivity + self.plurisubharmonicity)

    def positivity_bound(self, R) -> Fraction:
        """Lower bound for P_R on the unit sphere."""
        return Fraction(R) - 2 * self.n

    def levi_bound(self, R) -> Fraction:
        """Lower bound for the least Levi eigenvalue of P_R on the unit sphere."""
        return 2 * Fraction(R) - 6

    def steps(self) -> list:
        return list(self.positivity + self.plurisubharmonicity)


def _square_step(name: str, f: Poly, detail: str) -> CertificateStep:
    return CertificateStep(name, True, is_monomial_square_combination(real_expansion(f)), detail)


def _positivity_chain(n: int, R: Fraction) -> tuple:
    """P_R - (R-2n)s^2 = 2*sum A_k + 2*sum B_k with A_k, B_k >= 0."""
    params = FamilyParams(n, R)
    s = make_s(n)
    P = make_PR(params)
    steps = []
    total = Poly.zero(n)
    for k in range(1, n + 1):
        z, zb = Poly.z(n, k), Poly.zbar(n, k)
        mod2 = z * zb
        A = mod2 * mod2 + (z * zb ** 3 + zb * z ** 3) / 2
        B = s * s - mod2 * mod2
        steps.append(_square_step(f"A_{k} = |z{k}|^4 + Re(z{k}*conj(z{k})^3) >= 0", A, "equals 2*|z_k|^2*Re(z_k)^2"))
        steps.append(_square_step(f"B_{k} = s^2 - |z{k}|^4 >= 0", B, "(s - |z_k|^2)(s + |z_k|^2)"))
        total = total + A.scale(2) + B.scale(2)
    lhs = P - (s * s).scale(R - 2 * n)
    steps.append(CertificateStep("P_R - (R-2n)*s^2 == 2*sum A_k + 2*sum B_k", lhs == total))
    return tuple(steps)


def _embed(f: Poly, big_n: int) -> Poly:
    """Move a polynomial on C^{n+1} into the first n+1 coordinates of C^{big_n+1}."""
    n = f.n
    m = n + 1
    width = 2 * big_n + 2
    terms = {}
    for e, c in f.terms.items():
        t = [0] * width
        t[:m] = e[:m]
        t[big_n + 1 : big_n + 1 + m] = e[m:]
        terms[tuple(t)] = c
    return Poly(big_n, terms)


def _levi_polynomial(f: Poly) -> Poly:
    """L_f(Z, v) = sum f_{Z_a Zbar_b} v_a conj(v_b) with v in slots n+1..2n+1."""
    n = f.n
    m = n + 1
    big = 2 * n + 1
    v = [Poly.var(big, m + a) for a in range(m)]
    vb = [Poly.var(big, big + 1 + m + a) for a in range(m)]
    out = Poly.zero(big)
    for a in range(m):
        fa = f.derivative(a)
        for b in range(m):
            h = fa.derivative(m + b)
            if h:
                out = out + _embed(h, big) * v[a] * vb[b]
    return out


def _psh_chain(n: int, R: Fraction) -> tuple:
    """L_P - (2R-6)*s*|v|^2 - 2R*|<v, Z>|^2 is a sum of monomial squares."""
    params = FamilyParams(n, R)
    m = n + 1
    big = 2 * n + 1
    s = make_s(n)
    Zs = [Poly.var(big, a) for a in range(m)]
    Zb = [Poly.var(big, big + 1 + a) for a in range(m)]
    v = [Poly.var(big, m + a) for a in range(m)]
    vb = [Poly.var(big, big + 1 + m + a) for a in range(m)]
    S = _embed(s, big)
    v2 = Poly.zero(big)
    pair = Poly.zero(big)
    for a in range(m):
        v2 = v2 + v[a] * vb[a]
        pair = pair + Zb[a] * v[a]
    pair2 = pair * pair.conj()
    steps = []
    Ls2 = _levi_polynomial(s * s)
    steps.append(CertificateStep(
        "Levi(s^2) == 2*s*|v|^2 + 2*|<v, Z>|^2", Ls2 == (S * v2).scale(2) + pair2.scale(2)
    ))
    cubic = make_PR(params) - (s * s).scale(params.R)
    Lc = _levi_polynomial(cubic)
    diag = Poly.zero(big)
    for k in range(n):
        diag = diag + (Zs[k] * Zs[k] + Zb[k] * Zb[k]).scale(3) * v[k] * vb[k]
    steps.append(CertificateStep("Levi(cubic part) == sum 3*(z_k^2 + conj(z_k)^2)*|v_k|^2", Lc == diag))
    LP = _levi_polynomial(make_PR(params))
    rem = LP - (S * v2).scale(2 * R - 6) - pair2.scale(2 * R)
    steps.append(_square_step(
        "Levi(P_R) - (2R-6)*s*|v|^2 - 2R*|<v, Z>|^2 >= 0", rem, "6*s*|v|^2 + 6*sum (x_k^2 - y_k^2)|v_k|^2"
    ))
    return tuple(steps)


def derived_R_threshold(n: int) -> ThresholdCertificate:
    """R0 = max(2n, 3): for R > R0, P_R > 0 and strictly plurisubharmonic off 0.

    The certificate chains are identities in R, so they are checked at a
    symbolic-free witness value (R = R0 + 1); every step is linear in R.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    R0 = Fraction(max(2 * n, 3))
    cert = ThresholdCertificate(n, R0, _positivity_chain(n, R0 + 1), _psh_chain(n, R0 + 1))
    if not cert.valid:
        bad = [s.name for s in cert.steps() if not s.ok]
        raise CertificateError(f"certificate steps failed: {bad}")
    return cert


# -- compactness and smoothness -------------------------------------------------

@dataclass(frozen=True)
class CompactnessReport:
    compact: bool
    witness: str


def compactness_check(M: Hypersurface) -> CompactnessReport:
    """True iff the top-degree part T of rho satisfies T >= c*s^m for some c > 0.

    rho then grows like |Z|^{2m}, so M is bounded.  T - c*s^m is certified
    by real expansion into monomial squares; c runs over lead/2^j where lead
    is the coefficient of |w|^{2m} in T.
    """
    rho = M.rho
    d = rho.degree()
    if d <= 0 or d % 2:
        return CompactnessReport(False, f"top degree {d} is not a positive even number")
    top = rho.homogeneous_part(d)
    n = rho.n
    m = d // 2
    s_pow = make_s(n) ** m
    lead = [0] * (2 * n + 2)
    lead[n] = lead[2 * n + 1] = m
    c = top.coefficient(lead)
    if c.im or c.re <= 0:
        return CompactnessReport(False, f"top part {top} has no positive |w|^{d} coefficient")
    for j in range(12):
        cj = c.re / 2 ** j
        rem = top - s_pow.scale(cj)
        if rem.is_zero() or is_monomial_square_combination(real_expansion(rem)):
            return CompactnessReport(True, f"top part - {GR(cj)}*s^{m} is a sum of monomial squares")
    return CompactnessReport(False, f"no certificate top part >= c*s^{m} found")


@dataclass(frozen=True)
class SmoothnessReport:
    smooth: bool
    verdict: str
    steps: tuple
    samples_checked: int


def _univariate(f: Poly, slot: int) -> list[Fraction]:
    """Coefficient list of a polynomial in one slot with real coefficients."""
    out: dict[int, Fraction] = {}
    for e, c in f.terms.items():
        if any(k for i, k in enumerate(e) if i != slot):
            raise ValueError("not univariate")
        if c.im:
            raise ValueError("expected real coefficients")
        out[e[slot]] = c.re
    deg = max(out, default=0)
    return [out.get(k, Fraction(0)) for k in range(deg + 1)]


def _re_im(f: Poly) -> tuple[Poly, Poly]:
    re = Poly(f.n, {e: GR(c.re) for e, c in f.terms.items() if c.re})
    im = Poly(f.n, {e: GR(c.im) for e, c in f.terms.items() if c.im})
    return re, im


def smoothness_check(params: FamilyParams, samples: int = 100, seed: int = 0) -> SmoothnessReport:
    """Show rho_Z never vanishes on M.

    1. rho_{z_k} = conj(z_k) * f_k and Re f_k >= (2R-4)*s, so for R > 2 any
       critical point has z = 0.
    2. On z = 0 with w = sigma + i*t: Re rho_w = 2R*sigma*|w|^2, forcing
       sigma = 0 (w = 0 gives rho_w = i/2).
    3. Im rho_w(0, i t) and rho(0, i t) have no common root (gcd 1).
    """
    n = params.n
    R = params.R
    M = make_rho(params)
    rho = M.rho
    s = make_s(n)
    steps = []
    for k in range(1, n + 1):
        z, zb = Poly.z(n, k), Poly.zbar(n, k)
        f_k = s.scale(2 * R) + zb * zb + (z * z).scale(3)
        steps.append(CertificateStep(
            f"rho_z{k} == conj(z{k}) * (2R*s + conj(z{k})^2 + 3*z{k}^2)", rho.derivative(k - 1) == zb * f_k
        ))
        re_fk = (f_k + f_k.conj()) / 2
        if R > 2:
            steps.append(_square_step(f"Re f_{k} - (2R-4)*s >= 0", re_fk - s.scale(2 * R - 4), ""))
        else:
            steps.append(CertificateStep(f"Re f_{k} - (2R-4)*s >= 0", True, None, "R <= 2: bound not positive"))
    # restrict to z = 0, w = sigma + i*t; sigma in slot 0, t in slot 1 of a one-variable ring
    sig, t = Poly.var(1, 0), Poly.var(1, 1)
    wimg = sig + t.scale(I)
    zero1 = Poly.zero(1)
    images = [zero1] * n + [wimg] + [zero1] * n + [sig - t.scale(I)]
    rw = rho.derivative(n).substitute(images)
    re_rw, im_rw = _re_im(rw)
    mod_w = sig * sig + t * t
    steps.append(CertificateStep("Re rho_w(0, sigma+i*t) == 2R*sigma*|w|^2", re_rw == (sig * mod_w).scale(2 * R)))
    on_axis = [zero1, t, zero1, zero1]
    g_w = _univariate(im_rw.substitute(on_axis), 1)
    g_rho = _univariate(rho.substitute(images).substitute(on_axis), 1)
    g = poly_gcd(g_rho, g_w)
    steps.append(CertificateStep(
        "gcd(rho(0, i*t), Im rho_w(0, i*t)) == 1", len(g) == 1, None, f"gcd degree {len(g) - 1}"
    ))
    steps.append(CertificateStep("rho_w(0) != 0", bool(evaluate(rho.derivative(n), Point.origin(n)))))
    pts = sample_points_on_M(params, samples, seed)
    sampled_ok = all(any(M.gradient_at(p)) for p in pts) and len(pts) >= samples
    symbolic = R > 2 and all(st.ok for st in steps)
    if symbolic and sampled_ok:
        verdict = "certified"
    elif sampled_ok:
        verdict = "sampled-only"
    else:
        verdict = "failed"
    return SmoothnessReport(sampled_ok and verdict != "failed", verdict, tuple(steps), len(pts))


# -- rational points on M -------------------------------------------------------

def _rational_roots(coeffs: Sequence[Fraction], max_den: int = 64, max_num: int = 256) -> list[Fraction]:
    """Rational roots p/q of an integer-scaled polynomial, with bounded search."""
    from math import lcm

    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if not coeffs:
        return []
    L = 1
    for c in coeffs:
        L = lcm(L, c.denominator)
    ints = [int(c * L) for c in coeffs]
    roots = set()
    if ints[0] == 0:
        roots.add(Fraction(0))
    lo = next(i for i, c in enumerate(ints) if c)
    a0, an = abs(ints[lo]), abs(ints[-1])
    nums = [p for p in range(1, min(a0, max_num) + 1) if a0 % p == 0]
    dens = [q for q in range(1, min(an, max_den) + 1) if an % q == 0]
    for p in nums:
        for q in dens:
            for r in (Fraction(p, q), Fraction(-p, q)):
                v = Fraction(0)
                for c in reversed(coeffs):
                    v = v * r + c
                if v == 0:
                    roots.add(r)
    return sorted(roots)


def _imaginary_slice_points(params: FamilyParams, rng: random.Random, budget: int) -> list[Point]:
    """w = i*t with rational z: solve R(|z|^2 + t^2)^2 + 2*sum Re(z z^3bar) = t."""
    n, R = params.n, params.R
    out = []
    for _ in range(budget):
        zs = [GR(Fraction(rng.randint(-4, 4), rng.randint(1, 8)), Fraction(rng.randint(-4, 4), rng.randint(1, 8))) for _ in range(n)]
        a = sum((z.abs2() for z in zs), Fraction(0))
        b = sum((2 * (z * z.conjugate() ** 3).re for z in zs), Fraction(0))
        # R t^4 + 2Ra t^2 - t + (R a^2 + b)
        coeffs = [R * a * a + b, Fraction(-1), 2 * R * a, Fraction(0), R]
        for t in _rational_roots(coeffs):
            if t or any(zs):
                out.append(Point(zs + [GR(0, t)]))
    return out


def _diagonal_slice_points(params: FamilyParams, count: int, rng: random.Random) -> list[Point]:
    """Points with z_k = x_k(1 +- i), where Re(z_k conj(z_k)^3) = 0.

    With w = sigma + i*tau and s the value of |z|^2 + |w|^2, M requires
    tau = R*s^2, so fixing a rational s leaves the rational quadric
    2*sum x_k^2 + sigma^2 = s - R^2 s^4.  One rational point on it is found
    by search; lines through it give the rest.
    """
    n, R = params.n, params.R
    signs = [rng.choice((1, -1)) for _ in range(n)]
    weights = [Fraction(2)] * n + [Fraction(1)]

    def q(v):
        return sum((wt * x * x for wt, x in zip(weights, v)), Fraction(0))

    def bil(u, v):
        return sum((wt * a * b for wt, a, b in zip(weights, u, v)), Fraction(0))

    out = []
    seen = set()
    s_candidates = []
    for den in range(2, 40):
        for num in range(1, den):
            sv = Fraction(num, den)
            if sv - R * R * sv ** 4 > 0:
                s_candidates.append(sv)
    rng.shuffle(s_candidates)
    for sv in s_candidates:
        if len(out) >= count:
            break
        C = sv - R * R * sv ** 4
        tau = R * sv * sv
        base = _find_quadric_point(weights, C, rng)
        if base is None:
            continue
        tries = 0
        while len(out) < count and tries < 4 * count:
            tries += 1
            d = [Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in weights]
            qd = q(d)
            if not qd:
                continue
            tpar = -2 * bil(base, d) / qd
            v = [b + tpar * di for b, di in zip(base, d)]
            zs = [GR(v[k], signs[k] * v[k]) for k in range(n)]
            p = Point(zs + [GR(v[n], tau)])
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def _find_quadric_point(weights, C: Fraction, rng: random.Random, tries: int = 4000):
    """Rational v with sum weights*v^2 == C, by fixing all but the last coordinate."""
    from math import isqrt

    def rat_sqrt(x: Fraction):
        if x < 0:
            return None
        a, b = isqrt(x.numerator), isqrt(x.denominator)
        if a * a == x.numerator and b * b == x.denominator:
            return Fraction(a, b)
        return None

    wl = weights[-1]
    for _ in range(tries):
        head = [Fraction(rng.randint(-12, 12), rng.randint(1, 24)) for _ in weights[:-1]]
        rest = C - sum((wt * x * x for wt, x in zip(weights, head)), Fraction(0))
        r = rat_sqrt(rest / wl)
        if r is not None:
            return head + [r]
    return None


def sample_points_on_M(params: FamilyParams, count: int, seed: int = 0, include_origin: bool = False) -> list[Point]:
    """``count`` exact points on M, deterministic in ``seed``.

    Tries the imaginary-w slice first and falls back to the diagonal slice.
    Raises :class:`SampleExhausted` (carrying the partial list) on failure.
    """
    rng = random.Random(seed)
    rho = make_rho(params).rho
    pts = []
    seen = set()
    for p in _imaginary_slice_points(params, rng, budget=min(4 * count, 200)):
        if p not in seen and (include_origin or not p.is_origin()):
            seen.add(p)
            pts.append(p)
    if len(pts) < count:
        for p in _diagonal_slice_points(params, count - len(pts), rng):
            if p not in seen:
                seen.add(p)
                pts.append(p)
    pts = pts[:count]
    for p in pts:
        if evaluate(rho, p):
            raise AssertionError(f"generated point {p} is not on M")
    if len(pts) < count:
        raise SampleExhausted(pts, count)
    return pts


# -- transform sending {w = 0} to infinity -------------------------------------

@dataclass(frozen=True)
class TransformedSurface:
    rho_hat: Poly
    clearing_degree: int

    @property
    def d(self) -> int:
        return self.clearing_degree // 2

    def hypersurface(self) -> Hypersurface:
        return Hypersurface(self.rho_hat)


def projective_swap(f: Poly, d: int) -> Poly:
    """|w|^{2d} f(z/w, 1/w) for a polynomial whose holomorphic and
    antiholomorphic degrees are at most d.  The map is an involution."""
    n = f.n
    m = n + 1
    terms = {}
    for e, c in f.terms.items():
        hol, anti = list(e[:m]), list(e[m:])
        hz, az = sum(hol[:n]), sum(anti[:n])
        hw = d - hz - hol[n]
        aw = d - az - anti[n]
        if hw < 0 or aw < 0:
            raise ValueError(f"clearing degree {d} too small")
        hol[n], anti[n] = hw, aw
        terms[tuple(hol + anti)] = c
    return Poly(n, terms)


def projective_image(p: Point) -> Point:
    """(z/w, 1/w)."""
    w = p.coords[-1]
    if not w:
        raise ZeroDivisionError("w = 0 is sent to infinity")
    inv = w.inverse()
    return Point([z * inv for z in p.coords[:-1]] + [inv])


def w_slice_is_trivial(params: FamilyParams, scan: int = 6) -> bool:
    """M meets {w = 0} only at 0.

    On w = 0, rho = P_R(z, 0) >= (R-2n)|z|^4 by the positivity certificate, so
    R > 2n suffices; a small rational scan of P_R(z, 0) backs this up.
    """
    n, R = params.n, params.R
    if R <= 2 * n:
        return False
    derived_R_threshold(n)
    P = make_PR(params)
    vals = [Fraction(a, b) for a in range(-scan, scan + 1) for b in (1, 2, 3)]
    rng = random.Random(0)
    for _ in range(200):
        z = [GR(rng.choice(vals), rng.choice(vals)) for _ in range(n)]
        if any(z) and evaluate(P, Point(z + [ZERO])) == 0:
            return False
    return True


def transform_to_infinity(M: Hypersurface, params: FamilyParams | None = None) -> TransformedSurface:
    if params is not None and not w_slice_is_trivial(params):
        raise ValueError("cannot certify that M meets {w = 0} only at the origin")
    d = M.rho.degree()
    rho_hat = projective_swap(M.rho, d)
    if not rho_hat.is_real():
        raise AssertionError("transformed polynomial is not real")
    return TransformedSurface(rho_hat, 2 * d)
