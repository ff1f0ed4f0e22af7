"""Exact linear algebra over Gaussian rationals.

Row reduction works on sparse rows (dicts column -> coefficient).  Hermitian
inertia is read off the characteristic polynomial, which has rational
coefficients and only real roots, so Descartes' rule of signs is exact; Sturm
sequences give an independent count and isolate the least eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Sequence

from .gaussian import ONE, ZERO, GaussianRational, as_gr

__all__ = [
    "Echelon",
    "rank",
    "solve",
    "inverse",
    "HermitianMatrixExact",
    "Signature",
    "charpoly",
    "hermitian_signature",
    "signature_by_sturm",
    "sturm_sequence",
    "least_root_bracket",
]


class Echelon:
    """Incrementally built row-echelon basis of a subspace.

    Rows are sparse dicts.  Pivot rows are normalized to a leading 1 and are
    reduced against all earlier pivots when inserted.
    """

    def __init__(self, column_key=None):
        self.pivots: dict[Hashable, dict] = {}
        self._key = column_key

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        # each pivot row is free of earlier pivot columns, so one pass in
        # insertion order clears every pivot column
        row = {k: v for k, v in row.items() if v}
        for col, piv in self.pivots.items():
            f = row.get(col)
            if f is None:
                continue
            for k, v in piv.items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; return True iff it enlarged the span."""
        rem = self.reduce(row)
        if not rem:
            return False
        col = min(rem, key=self._key) if self._key else next(iter(rem))
        inv = as_gr(rem[col]).inverse()
        self.pivots[col] = {k: v * inv for k, v in rem.items()}
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)


def rank(vectors: Iterable[Sequence]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add({i: as_gr(x) for i, x in enumerate(v) if x})
    return len(ech)


def solve(rows: Sequence[dict], rhs: Sequence, unknowns: Sequence[Hashable]):
    """Solve sparse linear equations ``sum row[u]*x[u] = rhs``.

    Returns a dict unknown -> value (free unknowns set to zero), or ``None``
    if the system is inconsistent.
    """
    marker = object()
    order = {u: i for i, u in enumerate(unknowns)}
    order[marker] = len(order)
    ech = Echelon(column_key=lambda c: order[c])
    for row, b in zip(rows, rhs):
        r = {u: as_gr(v) for u, v in row.items() if v}
        b = as_gr(b)
        if b:
            r[marker] = b
        rem = ech.reduce(r)
        if not rem:
            continue
        if set(rem) == {marker}:
            return None
        ech.add(rem)
    # pivot rows only reference later pivots and free unknowns
    sol = {u: ZERO for u in unknowns}
    for col in reversed(list(ech.pivots)):
        if col is marker:
            return None
        row = ech.pivots[col]
        val = row.get(marker, ZERO)
        for k, v in row.items():
            if k is marker or k == col:
                continue
            val = val - v * sol[k]
        sol[col] = val
    return sol


def inverse(matrix: Sequence[Sequence]) -> list[list[GaussianRational]]:
    """Inverse of a square matrix by Gauss-Jordan elimination."""
    m = len(matrix)
    a = [[as_gr(x) for x in row] + [ONE if i == j else ZERO for j in range(m)] for i, row in enumerate(matrix)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(m):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[m:] for row in a]


@dataclass(frozen=True)
class Signature:
    """Inertia triple of a Hermitian matrix."""

    plus: int
    minus: int
    zero: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.plus, self.minus, self.zero)


class HermitianMatrixExact:
    """Square matrix with entries[a][b] == conj(entries[b][a]) exactly."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(as_gr(x) for x in row) for row in entries)
        d = len(rows)
        for a in range(d):
            if len(rows[a]) != d:
                raise ValueError("matrix must be square")
            for b in range(a, d):
                if rows[a][b] != rows[b][a].conjugate():
                    raise ValueError(f"not Hermitian at ({a},{b})")
        self.entries = rows

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __eq__(self, other):
        if isinstance(other, HermitianMatrixExact):
            return self.entries == other.entries
        try:
            return self.entries == HermitianMatrixExact(other).entries
        except (TypeError, ValueError):
            return NotImplemented

    def __repr__(self):
        rows = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"HermitianMatrixExact([{rows}])"

    def tolist(self) -> list[list[GaussianRational]]:
        return [list(r) for r in self.entries]


def charpoly(A: HermitianMatrixExact | Sequence[Sequence]) -> list[Fraction]:
    """Coefficients of det(x I - A), lowest degree first, by Faddeev-LeVerrier.

    For Hermitian input the coefficients are real; this is asserted.
    """
    rows = A.entries if isinstance(A, HermitianMatrixExact) else [[as_gr(x) for x in r] for r in A]
    d = len(rows)
    coeffs = [ZERO] * (d + 1)
    coeffs[d] = ONE
    Mk = [[ZERO] * d for _ in range(d)]
    for k in range(1, d + 1):
        # M_k = A M_{k-1} + c_{d-k+1} I
        c_prev = coeffs[d - k + 1]
        prod = [[sum((rows[i][t] * Mk[t][j] for t in range(d)), ZERO) for j in range(d)] for i in range(d)]
        for i in range(d):
            prod[i][i] = prod[i][i] + c_prev
        Mk = prod
        tr = sum((sum((rows[i][t] * Mk[t][i] for t in range(d)), ZERO) for i in range(d)), ZERO)
        coeffs[d - k] = -tr / k
    out = []
    for c in coeffs:
        if c.im:
            raise ValueError("characteristic polynomial is not real; matrix not Hermitian")
        out.append(c.re)
    return out


def _sign_changes(seq: Iterable[Fraction]) -> int:
    prev = 0
    changes = 0
    for c in seq:
        if not c:
            continue
        s = 1 if c > 0 else -1
        if prev and s != prev:
            changes += 1
        prev = s
    return changes


def hermitian_signature(A: HermitianMatrixExact) -> Signature:
    """Exact inertia via Descartes' rule on the (real-rooted) characteristic polynomial."""
    p = charpoly(A)
    d = len(p) - 1
    zero = next(i for i, c in enumerate(p) if c)
    plus = _sign_changes(p)
    minus = _sign_changes(c if i % 2 == 0 else -c for i, c in enumerate(p))
    if plus + minus + zero != d:
        raise ArithmeticError("inconsistent root count; matrix not Hermitian?")
    return Signature(plus, minus, zero)


# -- univariate polynomials over Q (lowest degree first) -----------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _peval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p: Sequence[Fraction]) -> list[Fraction]:
    return _trim([c * k for k, c in enumerate(p)][1:])


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lb
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r = _trim(r)
    return _trim(q), r


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd of two univariate rational polynomials (lowest degree first)."""
    return _pgcd([Fraction(c) for c in a], [Fraction(c) for c in b])


def sturm_sequence(p: Sequence[Fraction]) -> list[list[Fraction]]:
    """Sturm chain of the square-free part of ``p``."""
    p = _trim([Fraction(c) for c in p])
    if len(p) <= 1:
        return [p]
    g = _pgcd(p, _pderiv(p))
    if len(g) > 1:
        p, _ = _pdivmod(p, g)
    seq = [p, _pderiv(p)]
    while True:
        _, r = _pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _variations(seq, x: Fraction) -> int:
    return _sign_changes(_peval(q, x) for q in seq)


def count_roots_in(seq, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b], for a not a root."""
    return _variations(seq, a) - _variations(seq, b)


def root_bound(p: Sequence[Fraction]) -> Fraction:
    """A power of two strictly exceeding every |root| (Cauchy bound)."""
    p = _trim([Fraction(c) for c in p])
    lead = abs(p[-1])
    cb = 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))
    b = Fraction(1)
    while b <= cb:
        b *= 2
    return b


def signature_by_sturm(A: HermitianMatrixExact) -> Signature:
    """Inertia from Sturm root counts plus explicit multiplicities.

    Multiplicities come from repeated gcd with the derivative, so this is an
    independent route from :func:`hermitian_signature`.
    """
    p = _trim(charpoly(A))
    d = len(p) - 1
    zero = next(i for i, c in enumerate(p) if c)
    q = p[zero:]
    plus = minus = 0
    # peel off square-free layers: each layer's roots have multiplicity >= k
    layer = q
    while len(layer) > 1:
        seq = sturm_sequence(layer)
        B = root_bound(layer)
        minus += count_roots_in(seq, -B, Fraction(0))
        plus += count_roots_in(seq, Fraction(0), B)
        layer = _pgcd(layer, _pderiv(layer))
    if plus + minus + zero != d:
        raise ArithmeticError("Sturm count mismatch")
    return Signature(plus, minus, zero)


def _integer_chain(seq) -> list[list[int]]:
    """Each Sturm polynomial scaled by a positive integer to integer coefficients."""
    out = []
    for q in seq:
        L = 1
        for c in q:
            L = lcm(L, c.denominator)
        out.append([int(c * L) for c in q])
    return out


def _int_variations(chain: list[list[int]], x: Fraction) -> int:
    a, b = x.numerator, x.denominator
    prev = 0
    changes = 0
    for q in chain:
        v = _hom_eval(q, a, b)
        if not v:
            continue
        sg = 1 if v > 0 else -1
        if prev and sg != prev:
            changes += 1
        prev = sg
    return changes


def _hom_eval(q: list[int], a: int, b: int) -> int:
    """b^deg(q) * q(a/b) in integers; same sign as q(a/b) because b > 0."""
    v = 0
    bp = 1
    for c in reversed(q):
        v = v * a + c * bp
        bp *= b
    return v


def least_root_bracket(p: Sequence[Fraction], tol: Fraction = Fraction(1, 1024)):
    """Bracket the least real root of ``p`` by Sturm bisection.

    Returns ``(lo, hi, exact)`` with lo < root <= hi and hi - lo <= tol;
    when a bisection midpoint hits the root exactly, returns
    ``(root, root, True)``.
    """
    p = _trim([Fraction(c) for c in p])
    if len(p) <= 1:
        raise ValueError("polynomial has no roots")
    seq = sturm_sequence(p)
    chain = _integer_chain(seq)
    B = root_bound(p)
    lo, hi = -B, B
    base = _int_variations(chain, lo)
    if base - _int_variations(chain, hi) == 0:
        raise ValueError("polynomial has no real roots")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        below = base - _int_variations(chain, mid)
        if below >= 1:
            if below == 1 and not _hom_eval(chain[0], mid.numerator, mid.denominator):
                return mid, mid, True
            hi = mid
        else:
            lo = mid
    return lo, hi, False
