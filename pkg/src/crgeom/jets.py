"""Truncated power series: complex defining equations, essential type, multiplicity.

Jets reuse the polynomial slots: chi_k is the conj(z_k) slot and tau the
conj(w) slot, treated as independent variables.  A jet declares which slots
it may use so that chi can never silently alias a genuine conjugate.

Ideal codimensions are computed at jet level: the reading at degree d is
dim C[z]_{<=d} / (I + m^{d+1}).  Readings are nondecreasing in d and, once two
consecutive readings agree, m^{d+1} lies in I (Nakayama), so the reading is
the true codimension.  The report requires three equal readings before it
calls a value stabilized.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from .gaussian import I as IMAG, ONE, ZERO, GaussianRational
from .geometry import Hypersurface
from .linalg import Echelon, inverse, solve
from .polyring import Point, Poly, evaluate

__all__ = [
    "Jet",
    "MapGerm",
    "CodimReport",
    "SingularGraphError",
    "solve_graph",
    "back_substitute",
    "reality_check",
    "is_normal",
    "q_coefficients",
    "local_codimension",
    "esstype_jet",
    "essential_type",
    "multiplicity_jet",
    "MapIdentityReport",
    "verify_map_identity",
    "PropositionReport",
    "check_prop_multid",
    "q_based_nondeg_order",
    "NormalizedChart",
    "normalize_at",
    "proposition_check_at",
]


class SingularGraphError(ValueError):
    """rho_w(0) = 0: the equation cannot be solved for w."""


def z_slots(n: int) -> frozenset:
    return frozenset(range(n))


def zw_slots(n: int) -> frozenset:
    return frozenset(range(n + 1))


def zchitau_slots(n: int) -> frozenset:
    return frozenset(range(n)) | frozenset(range(n + 1, 2 * n + 2))


@dataclass(frozen=True)
class Jet:
    """Polynomial truncated at total degree ``cap`` in a declared slot set."""

    body: Poly
    cap: int
    slots: frozenset

    def __post_init__(self):
        extra = self.body.used_slots() - self.slots
        if extra:
            raise ValueError(f"jet uses undeclared slots {sorted(extra)}")
        if self.body.degree() > self.cap:
            object.__setattr__(self, "body", self.body.truncate(self.cap))

    def _compat(self, other: "Jet"):
        if other.slots != self.slots:
            raise ValueError("jets over different variable sets")
        return min(self.cap, other.cap)

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.body + other.body, self._compat(other), self.slots)

    def __sub__(self, other: "Jet") -> "Jet":
        return Jet(self.body - other.body, self._compat(other), self.slots)

    def __mul__(self, other: "Jet") -> "Jet":
        cap = self._compat(other)
        return Jet(self.body.mul_trunc(other.body, cap), cap, self.slots)

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        cap = min(self.cap, other.cap)
        return self.slots == other.slots and self.body.truncate(cap) == other.body.truncate(cap)

    def __hash__(self):
        return hash((self.body, self.cap, self.slots))

    def __str__(self):
        return f"{self.body} + O({self.cap + 1})"


# -- complex defining equation ---------------------------------------------

def solve_graph(M: Hypersurface | Poly, D: int) -> Jet:
    """Solve rho(z, w, chi, tau) = 0 for w = Q(z, chi, tau) modulo degree D+1."""
    rho = M.rho if isinstance(M, Hypersurface) else M
    n = rho.n
    if rho.constant_term():
        raise ValueError("rho must vanish at the origin")
    c = rho.derivative(n).constant_term()
    if not c:
        raise SingularGraphError("rho_w(0) = 0")
    wvar = Poly.w(n)
    G = rho - wvar.scale(c)
    minus_inv = -c.inverse()
    images = [Poly.var(n, s) for s in range(2 * n + 2)]
    Q = Poly.zero(n)
    # each pass fixes one more homogeneous degree of Q
    for d in range(1, D + 1):
        images[n] = Q
        Q = G.substitute(images, cap=d).scale(minus_inv)
    return Jet(Q, D, zchitau_slots(n))


def back_substitute(M: Hypersurface | Poly, Q: Jet) -> Poly:
    """rho(z, Q, chi, tau) modulo degree cap+1 (zero iff Q solves the equation)."""
    rho = M.rho if isinstance(M, Hypersurface) else M
    n = rho.n
    images = [Poly.var(n, s) for s in range(2 * n + 2)]
    images[n] = Q.body
    return rho.substitute(images, cap=Q.cap)


def reality_check(Q: Jet, D: int | None = None) -> bool:
    """Test Q(z, chi, Qbar(chi, z, w)) == w modulo degree D+1.

    conj(Q) swaps the z and chi slots and tau with w, which is exactly
    Qbar(chi, z, w) written in the (z, w, chi) slots.
    """
    D = Q.cap if D is None else D
    n = Q.body.n
    Qbar = Q.body.conj()
    images = [Poly.var(n, s) for s in range(2 * n + 2)]
    images[2 * n + 1] = Qbar
    lhs = Q.body.substitute(images, cap=D)
    return lhs == Poly.w(n).truncate(D)


def is_normal(Q: Jet) -> bool:
    """Q(z, 0, tau) == tau == Q(0, chi, tau) at jet level."""
    n = Q.body.n
    tau = Poly.wbar(n)
    zero = Poly.zero(n)
    keep = [Poly.var(n, s) for s in range(2 * n + 2)]
    no_chi = list(keep)
    no_z = list(keep)
    for k in range(n):
        no_chi[n + 1 + k] = zero
        no_z[k] = zero
    no_chi[n] = zero
    no_z[n] = zero
    return Q.body.substitute(no_chi) == tau.truncate(Q.cap) and Q.body.substitute(no_z) == tau.truncate(Q.cap)


def q_coefficients(Q: Jet, D: int | None = None) -> dict[tuple[int, ...], Poly]:
    """Coefficients q_I(z) of Q(z, chi, 0) = sum_I q_I(z) chi^I (|I| + deg <= D)."""
    D = Q.cap if D is None else D
    n = Q.body.n
    groups: dict[tuple, dict] = {}
    for e, c in Q.body.terms.items():
        if e[2 * n + 1] or sum(e) > D:
            continue
        I = e[n + 1 : 2 * n + 1]
        ze = e[:n] + (0,) * (n + 2)
        groups.setdefault(I, {})[ze] = c
    return {I: Poly(n, t) for I, t in sorted(groups.items())}


# -- ideal codimension ---------------------------------------------------------

def _monomials(slots: Sequence[int], width: int, d: int) -> list[tuple]:
    out = []
    for deg in range(d + 1):
        for combo in combinations_with_replacement(slots, deg):
            e = [0] * width
            for s in combo:
                e[s] += 1
            out.append(tuple(e))
    return out


@dataclass(frozen=True)
class CodimReport:
    per_degree: tuple
    stabilized: bool
    value: int | None
    window: int = 3

    def readings(self) -> list[int]:
        return [c for _, c in self.per_degree]


def _stabilization(per_degree: list, window: int):
    vals = [c for _, c in per_degree]
    for i in range(len(vals) - window + 1):
        chunk = vals[i : i + window]
        if len(set(chunk)) == 1:
            return True, chunk[0]
    return False, None


def local_codimension(generators: Sequence[Poly], slots: Sequence[int], D: int, window: int = 3) -> CodimReport:
    """Jet-level codimension of the ideal generated by ``generators``.

    Generators must only involve ``slots``; they are taken to be exact
    modulo degree D+1.
    """
    slots = sorted(slots)
    gens = [g for g in generators if not g.is_zero()]
    for g in gens:
        if g.used_slots() - set(slots):
            raise ValueError("generator uses variables outside the declared set")
    per = []
    if not gens:
        width = 0
    for d in range(D + 1):
        count = 0
        ech = Echelon()
        if gens:
            width = gens[0].nvars
            n = gens[0].n
            mons = _monomials(slots, width, d)
            count = len(mons)
            for g in gens:
                og = g.order()
                if og > d:
                    continue
                gt = g.truncate(d)
                for mono in mons:
                    if sum(mono) + og > d:
                        continue
                    prod = Poly._from_clean(n, {mono: ONE}).mul_trunc(gt, d)
                    ech.add(dict(prod.terms))
        else:
            count = len(_monomials(slots, max(slots, default=0) + 1, d))
        per.append((d, count - len(ech)))
    stab, val = _stabilization(per, window)
    return CodimReport(tuple(per), stab, val, window)


def esstype_jet(q: Mapping[tuple, Poly], D: int, n: int | None = None) -> CodimReport:
    """Codimension of the ideal generated by the q_I in C[[z]]."""
    gens = list(q.values())
    if n is None:
        if not gens:
            raise ValueError("need n for an empty q mapping")
        n = gens[0].n
    return local_codimension(gens, sorted(z_slots(n)), D)


def essential_type(M: Hypersurface | Poly, D: int) -> tuple[CodimReport, Jet]:
    """Solve Q with cap 2D so every q_I with |I| <= D is exact modulo degree D+1."""
    Q = solve_graph(M, 2 * D)
    q = {I: f.truncate(D) for I, f in q_coefficients(Q, 2 * D).items() if sum(I) <= D}
    n = Q.body.n
    return esstype_jet(q, D, n), Q


@dataclass(frozen=True)
class MapGerm:
    """Holomorphic map germ H = (F_1..F_N, G) at the origin of C^{n+1}."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("map needs at least one component")
        n = comps[0].n
        for c in comps:
            if c.n != n:
                raise ValueError("components live in different rings")
            if c.used_slots() - zw_slots(n):
                raise ValueError("map components must be holomorphic")
            if c.constant_term():
                raise ValueError("map germ components must vanish at the origin")

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def target_dim(self) -> int:
        return len(self.components)

    def tangential_at_w0(self) -> list[Poly]:
        """F_j(z, 0) for the first N components."""
        n = self.n
        images = [Poly.var(n, s) for s in range(2 * n + 2)]
        images[n] = Poly.zero(n)
        return [f.substitute(images) for f in self.components[:-1]]


def multiplicity_jet(H: MapGerm, D: int) -> CodimReport:
    return local_codimension(list(H.components), sorted(zw_slots(H.n)), D)


# -- map identities and the multiplicity/essential-type inequality -------------

def compose_target(rho_target: Poly, comps: Sequence[Poly], cap: int | None = None) -> Poly:
    """rho_target(H, conj(H)) in the source ring."""
    N = rho_target.n
    if len(comps) != N + 1:
        raise ValueError("map has the wrong number of components for the target")
    images = list(comps) + [c.conj() for c in comps]
    return rho_target.substitute(images, cap)


@dataclass(frozen=True)
class MapIdentityReport:
    holds: bool
    exact_identity: bool
    multiplier_constant: GaussianRational | None
    degree: int
    base_point: Point


def verify_map_identity(
    rho_source: Poly,
    rho_target: Poly,
    H: Sequence[Poly],
    D: int,
    base_point: Point | None = None,
) -> MapIdentityReport:
    """Decide whether rho_target(H, Hbar) = a * rho_source near ``base_point``.

    The multiplier a is solved for by linear algebra on Taylor coefficients
    (in all of Z, Zbar) up to degree D.  If the composition equals c*rho
    globally for a constant c, that is reported as an exact identity.
    """
    n = rho_source.n
    p = base_point or Point.origin(n)
    comp = compose_target(rho_target, H)
    if comp == rho_source:
        return MapIdentityReport(True, True, ONE, D, p)
    if evaluate(rho_source, p):
        raise ValueError("base point is not on the source hypersurface")
    src = rho_source.shift(p, D)
    tgt = comp.shift(p, D)
    unknowns = _monomials(range(2 * n + 2), 2 * n + 2, max(D - max(src.order(), 0), 0))
    eqs: dict[tuple, dict] = {}
    for u in unknowns:
        prod = Poly._from_clean(n, {u: ONE}).mul_trunc(src, D)
        for e, c in prod.terms.items():
            eqs.setdefault(e, {})[u] = c
    cols = set(eqs) | set(tgt.terms)
    keys = sorted(cols, key=lambda e: (sum(e), e))
    rows = [eqs.get(e, {}) for e in keys]
    rhs = [tgt.terms.get(e, ZERO) for e in keys]
    sol = solve(rows, rhs, unknowns)
    if sol is None:
        return MapIdentityReport(False, False, None, D, p)
    return MapIdentityReport(True, False, sol[(0,) * (2 * n + 2)], D, p)


@dataclass(frozen=True)
class PropositionReport:
    inclusion_holds: bool
    inclusion_through_target: bool
    mult: CodimReport
    esstype: CodimReport
    inequality_holds: bool | None
    failed_generators: tuple = ()

    @property
    def conclusive(self) -> bool:
        return self.mult.stabilized and self.esstype.stabilized


def _ideal_jet(generators: Sequence[Poly], slots, d: int) -> Echelon:
    ech = Echelon()
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return ech
    n = gens[0].n
    mons = _monomials(sorted(slots), gens[0].nvars, d)
    for g in gens:
        og = g.order()
        gt = g.truncate(d)
        for mono in mons:
            if sum(mono) + og <= d:
                ech.add(dict(Poly._from_clean(n, {mono: ONE}).mul_trunc(gt, d).terms))
    return ech


def check_prop_multid(
    source_q: Mapping[tuple, Poly],
    H: MapGerm,
    target_q: Mapping[tuple, Poly] | None,
    D: int,
) -> PropositionReport:
    """Ideal inclusion I_M in I(F) and mult(H) <= esstype(M) at jet level D."""
    n = H.n
    F0 = H.tangential_at_w0()
    slots = sorted(z_slots(n))
    ech = _ideal_jet(F0, slots, D)
    failed = tuple(I for I, qI in source_q.items() if not ech.contains(dict(qI.truncate(D).terms)))
    through = True
    if target_q:
        # q'_J(F(z,0)) generate an ideal that must already contain every q_I
        N = H.target_dim - 1
        images = [None] * (2 * N + 2)
        for k in range(N):
            images[k] = F0[k]
        zero = Poly.zero(n)
        for s in range(N, 2 * N + 2):
            images[s] = zero
        pulled = [qJ.substitute(images, cap=D) for qJ in target_q.values()]
        ech2 = _ideal_jet(pulled, slots, D)
        through = all(ech2.contains(dict(qI.truncate(D).terms)) for qI in source_q.values())
    mult = multiplicity_jet(H, D)
    ess = esstype_jet(source_q, D, n)
    ineq = None
    if mult.stabilized and ess.stabilized:
        ineq = mult.value <= ess.value
    return PropositionReport(not failed, through, mult, ess, ineq, failed)


def q_based_nondeg_order(Q: Jet, k_max: int) -> int | None:
    """Smallest k with span{Q_{z chi^I}(0) : |I| <= k} = C^n (normal coordinates assumed)."""
    from math import factorial

    from .crfields import multi_indices

    n = Q.body.n
    ech = Echelon()
    for level in range(k_max + 1):
        for I in multi_indices(n, level):
            fact = 1
            for k in I:
                fact *= factorial(k)
            vec = {}
            for k in range(n):
                e = [0] * (2 * n + 2)
                e[k] = 1
                for j, ij in enumerate(I):
                    e[n + 1 + j] = ij
                c = Q.body.coefficient(e)
                if c:
                    vec[k] = c * fact
            ech.add(vec)
        if len(ech) == n:
            return level
    return None


# -- local charts at a boundary point -----------------------------------------

@dataclass(frozen=True)
class NormalizedChart:
    """Chart at a point p of M in which rho has no pure holomorphic part but i*w.

    Affine coordinates X are given by Z = p + A X, with the last column of A
    transversal.  The chart coordinate w is -i times the pure holomorphic part
    of rho(p + A X); ``to_affine`` inverts that substitution at jet level.  In
    the chart the solved Q satisfies Q(z,0,0) = Q(0,chi,0) = 0, which is what
    the ideal computations on Q(z,chi,0) need.  Terms z^a tau^k with a != 0
    are not removed, so the chart is in general not fully normal.
    """

    rho: Poly
    point: Point
    matrix: tuple
    transversal_index: int
    cap: int
    from_affine: Poly
    to_affine: Poly

    def pull_map(self, H: Sequence[Poly], target: "NormalizedChart") -> list[Poly]:
        """H written in chart coordinates at both ends, modulo degree cap+1."""
        n = self.rho.n
        m = n + 1
        cap = self.cap
        X = [Poly.var(n, b) for b in range(n)] + [self.to_affine]
        lin = []
        for a in range(m):
            t = Poly.const(n, self.point.coords[a])
            for b in range(m):
                if self.matrix[a][b]:
                    t = t + X[b].scale(self.matrix[a][b])
            lin.append(t)
        images = lin + [None] * m
        base = target.point.coords
        moved = [h.substitute(images, cap) - base[k] for k, h in enumerate(H)]
        Binv = inverse(target.matrix)
        Y = []
        for a in range(len(moved)):
            t = Poly.zero(n)
            for b in range(len(moved)):
                if Binv[a][b]:
                    t = t + moved[b].scale(Binv[a][b])
            Y.append(t)
        images_t = Y + [None] * len(Y)
        return Y[:-1] + [target.from_affine.substitute(images_t, cap)]


def normalize_at(rho: Poly, p: Point, cap: int) -> NormalizedChart:
    """Build the chart of :class:`NormalizedChart` at p, exact modulo degree cap+1."""
    n = rho.n
    m = n + 1
    if evaluate(rho, p):
        raise ValueError("point is not on the hypersurface")
    g = [evaluate(rho.derivative(a), p) for a in range(m)]
    j = n if g[n] else next((a for a in range(m) if g[a]), None)
    if j is None:
        raise ValueError("gradient vanishes at the point")
    A = [[ZERO] * m for _ in range(m)]
    col = 0
    for k in range(m):
        if k == j:
            continue
        A[k][col] = ONE
        A[j][col] = -g[k] / g[j]
        col += 1
    A[j][n] = ONE
    aff = rho.shift(p, cap).linear_change(A)
    hol = Poly(n, {e: c for e, c in aff.terms.items() if not any(e[m:])})
    w_chart = hol.scale(-IMAG)
    lead = w_chart.coefficient([0] * n + [1] + [0] * m)
    higher = w_chart - Poly.w(n).scale(lead)
    inv_lead = lead.inverse()
    # u solves w = lead*u + higher(z, u)
    u = Poly.zero(n)
    images = [Poly.var(n, s) for s in range(2 * m)]
    for d in range(1, cap + 1):
        images[n] = u
        u = (Poly.w(n) - higher.substitute(images, d)).scale(inv_lead).truncate(d)
    images = [Poly.var(n, s) for s in range(2 * m)]
    images[n] = u
    images[2 * n + 1] = u.conj()
    chart = aff.substitute(images, cap)
    return NormalizedChart(chart, p, tuple(tuple(r) for r in A), j, cap, w_chart, u)


def proposition_check_at(
    rho_source: Poly,
    rho_target: Poly,
    H: Sequence[Poly],
    p: Point,
    D: int,
) -> tuple[PropositionReport, dict]:
    """Run :func:`check_prop_multid` in charts at p and at H(p)."""
    cap = 2 * D
    src = normalize_at(rho_source, p, cap)
    Hp = Point([evaluate(h, p) for h in H])
    tgt = normalize_at(rho_target, Hp, cap)
    germ = MapGerm(tuple(src.pull_map(H, tgt)))
    Qs = solve_graph(src.rho, cap)
    Qt = solve_graph(tgt.rho, cap)
    q_src = {I: f.truncate(D) for I, f in q_coefficients(Qs, cap).items() if sum(I) <= D}
    q_tgt = {I: f.truncate(D) for I, f in q_coefficients(Qt, cap).items() if sum(I) <= D}
    rep = check_prop_multid(q_src, germ, q_tgt, D)
    extra = {
        "source_normal": is_normal(Qs),
        "target_normal": is_normal(Qt),
        "image_point": Hp,
        "map_identity": verify_map_identity(rho_source, rho_target, H, D, p),
    }
    return rep, extra
