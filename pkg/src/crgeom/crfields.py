"""CR vector fields and the finite-nondegeneracy order.

For a real defining function rho with rho_wbar != 0 the fields

    L_j = d/dzbar_j - (rho_zbar_j / rho_wbar) d/dwbar,   j = 1..n

span the CR bundle; they annihilate rho identically.  The k-nondegeneracy
order at p is the first level k at which the vectors (L^I rho_Z)(p),
|I| <= k, span C^{n+1}.

Two evaluation routes are provided.  :func:`apply_multi` works with exact
rational functions (denominator a power of rho_wbar).  The order computation
instead re-centers rho at p and runs the same recursion on truncated Taylor
polynomials, which is exact for values at p and much cheaper.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from .gaussian import GaussianRational
from .geometry import Hypersurface, NotSmoothError, is_smooth_at
from .linalg import Echelon
from .polyring import Point, Poly, evaluate

__all__ = [
    "RationalFunction",
    "RationalVectorField",
    "NondegeneracyReport",
    "cr_basis",
    "apply_field",
    "apply_multi",
    "multi_indices",
    "values_at",
    "nondegeneracy_order",
]


@dataclass(frozen=True)
class RationalFunction:
    """num / den with polynomial numerator and denominator."""

    num: Poly
    den: Poly

    def evaluate(self, p: Point) -> GaussianRational:
        d = evaluate(self.den, p)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at {p}")
        return evaluate(self.num, p) / d

    def is_zero(self) -> bool:
        return self.num.is_zero()


@dataclass(frozen=True)
class RationalVectorField:
    """sum_v numerators[v]/denominator * d/dv over all 2n+2 slots."""

    numerators: tuple
    denominator: Poly

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ValueError("denominator must not vanish identically")

    @property
    def n(self) -> int:
        return self.denominator.n

    def coefficient(self, slot: int) -> RationalFunction:
        return RationalFunction(self.numerators[slot], self.denominator)

    def apply_poly(self, f: Poly) -> RationalFunction:
        num = Poly.zero(f.n)
        for slot, a in enumerate(self.numerators):
            if a:
                num = num + a * f.derivative(slot)
        return RationalFunction(num, self.denominator)


def cr_basis(M: Hypersurface) -> list[RationalVectorField]:
    """L_1..L_n, with constant denominators folded into the numerators."""
    n = M.n
    rho = M.rho
    den = rho.derivative(2 * n + 1)
    if den.is_zero():
        raise NotSmoothError("rho_wbar vanishes identically; no graph-type CR basis")
    fields = []
    for j in range(1, n + 1):
        zbar = n + j
        nums = [Poly.zero(n)] * (2 * n + 2)
        nums[zbar] = den
        nums[2 * n + 1] = -rho.derivative(zbar)
        d = den
        if den.is_constant():
            c = den.constant_term()
            nums = [a / c for a in nums]
            d = Poly.const(n, 1)
        fields.append(RationalVectorField(tuple(nums), d))
    return fields


def apply_field(L: RationalVectorField, f: RationalFunction) -> RationalFunction:
    """Quotient rule: L(A/B) = (B*L~A - A*L~B) / (D*B^2) with L = L~/D."""
    A, B = f.num, f.den
    LA = L.apply_poly(A).num
    if B.is_constant():
        num = LA / B.constant_term()
        return RationalFunction(num, L.denominator)
    LB = L.apply_poly(B).num
    return RationalFunction(B * LA - A * LB, L.denominator * B * B)


def apply_multi(M: Hypersurface, I: Sequence[int], fields=None) -> list[RationalFunction]:
    """(L^I rho_Z) as exact rational functions.

    L_1 is applied I_1 times first, then L_2 I_2 times, and so on.
    """
    if len(I) != M.n:
        raise ValueError("multi-index length must equal n")
    fields = fields or cr_basis(M)
    one = Poly.const(M.n, 1)
    vec = [RationalFunction(g, one) for g in M.gradient]
    for j, k in enumerate(I):
        for _ in range(k):
            vec = [apply_field(fields[j], f) for f in vec]
    return vec


def multi_indices(n: int, level: int) -> list[tuple[int, ...]]:
    """All I in N^n with |I| = level, in lexicographically decreasing order."""
    out = set()
    for combo in combinations_with_replacement(range(n), level):
        I = [0] * n
        for j in combo:
            I[j] += 1
        out.add(tuple(I))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class NondegeneracyReport:
    order: int | None
    k_max: int
    ranks: tuple
    witness: tuple

    @property
    def exceeded(self) -> bool:
        return self.order is None

    def describe(self) -> str:
        return f"{self.order}" if self.order is not None else f"exceeds k_max={self.k_max}"


# -- jet route ------------------------------------------------------------

def _jet_inverse(f: Poly, cap: int) -> Poly:
    c0 = f.constant_term()
    if not c0:
        raise ZeroDivisionError("jet with zero constant term is not invertible")
    inv0 = c0.inverse()
    u = (f - c0) * inv0          # f = c0 (1 + u), u(0) = 0
    out = Poly.const(f.n, 1)
    term = Poly.const(f.n, 1)
    for _ in range(cap):
        term = term.mul_trunc(-u, cap)
        if term.is_zero():
            break
        out = out + term
    return out.scale(inv0)


def values_at(
    M: Hypersurface,
    p: Point,
    k_max: int,
    order: str = "ascending",
) -> dict[tuple[int, ...], list[GaussianRational]]:
    """(L^I rho_Z)(p) for all |I| <= k_max via Taylor jets at p.

    ``order`` selects the composition order inside L^I: "ascending" applies
    L_1 first (the library convention), "descending" applies L_n first.
    """
    n = M.n
    cap = k_max + 1
    rho = M.rho.shift(p, cap + 1)
    den = rho.derivative(2 * n + 1).truncate(cap)
    if not den.constant_term():
        raise NotSmoothError(f"rho_wbar vanishes at {p}")
    inv = _jet_inverse(den, cap)
    coeffs = [(-rho.derivative(n + j)).mul_trunc(inv, cap) for j in range(1, n + 1)]

    def L(j: int, f: Poly) -> Poly:
        return (f.derivative(n + 1 + j) + f.derivative(2 * n + 1).mul_trunc(coeffs[j], cap)).truncate(cap)

    grad = tuple(rho.derivative(a).truncate(cap) for a in range(n + 1))
    cache: dict[tuple, tuple] = {(): grad}

    def ops(I):
        seq = []
        rng = range(n) if order == "ascending" else range(n - 1, -1, -1)
        for j in rng:
            seq += [j] * I[j]
        return tuple(seq)

    def jets(seq):
        got = cache.get(seq)
        if got is None:
            prev = jets(seq[:-1])
            got = tuple(L(seq[-1], f) for f in prev)
            cache[seq] = got
        return got

    out = {}
    for level in range(k_max + 1):
        for I in multi_indices(n, level):
            out[I] = [f.constant_term() for f in jets(ops(I))]
    return out


def nondegeneracy_order(M: Hypersurface, p: Point, k_max: int | None = None, order: str = "ascending") -> NondegeneracyReport:
    """Smallest k such that (L^I rho_Z)(p), |I| <= k, span C^{n+1}."""
    n = M.n
    if k_max is None:
        k_max = n + 3
    if not is_smooth_at(M, p):
        raise NotSmoothError(f"M is not smooth at {p}")
    vals = values_at(M, p, k_max, order)
    ech = Echelon()
    ranks = []
    witness = []
    found = None
    for level in range(k_max + 1):
        for I in multi_indices(n, level):
            row = {a: v for a, v in enumerate(vals[I]) if v}
            if ech.add(row):
                witness.append(I)
        ranks.append((level, len(ech)))
        if len(ech) == n + 1:
            found = level
            break
    return NondegeneracyReport(
        order=found,
        k_max=k_max,
        ranks=tuple(ranks),
        witness=tuple(witness) if found is not None else (),
    )
