"""Exact polynomials in z_1..z_n, w and their conjugates.

A ring context with ``n`` z-variables has ``2n + 2`` formal variables laid out
as slots::

    0 .. n-1      z_1 .. z_n
    n             w
    n+1 .. 2n     conj(z_1) .. conj(z_n)
    2n+1          conj(w)

All slots are independent for differentiation and substitution; conjugation
only enters through :meth:`Poly.conj` and through :func:`evaluate`, which
plugs ``conj(p)`` into the barred slots.  Treating the barred slots as free
variables is exactly the polarization (chi, tau) used for complex defining
equations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .gaussian import ONE, ZERO, GaussianRational, as_gr

__all__ = [
    "VarIndex",
    "Poly",
    "Point",
    "conj_involution",
    "is_real",
    "derivative",
    "evaluate",
    "evaluate_polarized",
]

Exponent = tuple


@dataclass(frozen=True)
class VarIndex:
    """A named variable: kind in {'z', 'w', 'zbar', 'wbar'}; index is 1-based."""

    kind: str
    index: int = 0

    def slot(self, n: int) -> int:
        if self.kind in ("z", "zbar"):
            if not 1 <= self.index <= n:
                raise ValueError(f"{self.kind}{self.index} out of range for n={n}")
            return self.index - 1 + (0 if self.kind == "z" else n + 1)
        if self.kind == "w":
            return n
        if self.kind == "wbar":
            return 2 * n + 1
        raise ValueError(f"unknown variable kind {self.kind!r}")

    @classmethod
    def from_slot(cls, slot: int, n: int) -> "VarIndex":
        if 0 <= slot < n:
            return cls("z", slot + 1)
        if slot == n:
            return cls("w")
        if n + 1 <= slot < 2 * n + 1:
            return cls("zbar", slot - n)
        if slot == 2 * n + 1:
            return cls("wbar")
        raise ValueError(f"slot {slot} out of range for n={n}")


def var_name(slot: int, n: int) -> str:
    if slot < n:
        return f"z{slot + 1}"
    if slot == n:
        return "w"
    if slot < 2 * n + 1:
        return f"conj(z{slot - n})"
    return "conj(w)"


def conj_slot(slot: int, n: int) -> int:
    m = n + 1
    return slot + m if slot < m else slot - m


class Poly:
    """Multivariate polynomial with Gaussian-rational coefficients.

    ``terms`` maps dense exponent tuples of length ``2n+2`` to nonzero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exponent, object] | None = None):
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.n = n
        clean = {}
        if terms:
            width = 2 * n + 2
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != width or any(k < 0 for k in e):
                    raise ValueError(f"bad exponent {e} for n={n}")
                c = as_gr(c)
                if c:
                    clean[e] = c
        self.terms = clean

    @classmethod
    def _from_clean(cls, n: int, terms: dict) -> "Poly":
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    # -- constructors ---------------------------------------------------
    @property
    def nvars(self) -> int:
        return 2 * self.n + 2

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._from_clean(n, {})

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = as_gr(c)
        if not c:
            return cls.zero(n)
        return cls._from_clean(n, {(0,) * (2 * n + 2): c})

    @classmethod
    def monomial(cls, n: int, exps: Sequence[int], c=ONE) -> "Poly":
        return cls(n, {tuple(exps): c})

    @classmethod
    def var(cls, n: int, v: VarIndex | int) -> "Poly":
        slot = v.slot(n) if isinstance(v, VarIndex) else v
        e = [0] * (2 * n + 2)
        e[slot] = 1
        return cls._from_clean(n, {tuple(e): ONE})

    @classmethod
    def z(cls, n: int, k: int) -> "Poly":
        return cls.var(n, VarIndex("z", k))

    @classmethod
    def zbar(cls, n: int, k: int) -> "Poly":
        return cls.var(n, VarIndex("zbar", k))

    @classmethod
    def w(cls, n: int) -> "Poly":
        return cls.var(n, n)

    @classmethod
    def wbar(cls, n: int) -> "Poly":
        return cls.var(n, 2 * n + 1)

    # -- basic queries --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for the zero polynomial."""
        return min((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * self.nvars, ZERO)

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self.terms.get(tuple(exps), ZERO)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._from_clean(self.n, {e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, d: int) -> "Poly":
        """Drop all terms of total degree greater than ``d``."""
        return Poly._from_clean(self.n, {e: c for e, c in self.terms.items() if sum(e) <= d})

    def used_slots(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def bidegree_max(self) -> tuple[int, int]:
        """Largest holomorphic and antiholomorphic degrees over all terms."""
        m = self.n + 1
        hol = max((sum(e[:m]) for e in self.terms), default=0)
        anti = max((sum(e[m:]) for e in self.terms), default=0)
        return hol, anti

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Poly"):
        if other.n != self.n:
            raise ValueError(f"ring mismatch: n={self.n} vs n={other.n}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._from_clean(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._from_clean(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        c = as_gr(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._from_clean(self.n, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        return Poly._from_clean(self.n, _mul_terms(self.terms, other.terms, None))

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def mul_trunc(self, other: "Poly", cap: int | None) -> "Poly":
        """Product with all terms of degree > ``cap`` discarded."""
        self._check(other)
        return Poly._from_clean(self.n, _mul_terms(self.terms, other.terms, cap))

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by nonzero constants")
            other = other.constant_term()
        return self.scale(as_gr(other).inverse())

    def __pow__(self, k: int):
        return self.pow_trunc(k, None)

    def pow_trunc(self, k: int, cap: int | None) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result.mul_trunc(base, cap)
            k >>= 1
            if k:
                base = base.mul_trunc(base, cap)
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        try:
            return self == Poly.const(self.n, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- calculus and involution ---------------------------------------
    def derivative(self, v: VarIndex | int) -> "Poly":
        slot = v.slot(self.n) if isinstance(v, VarIndex) else v
        out = {}
        for e, c in self.terms.items():
            k = e[slot]
            if k:
                ne = e[:slot] + (k - 1,) + e[slot + 1:]
                out[ne] = c * k
        return Poly._from_clean(self.n, out)

    def conj(self) -> "Poly":
        m = self.n + 1
        return Poly._from_clean(
            self.n, {e[m:] + e[:m]: c.conjugate() for e, c in self.terms.items()}
        )

    def is_real(self) -> bool:
        return self.conj() == self

    # -- substitution ----------------------------------------------------
    def substitute(self, images: Sequence["Poly | None"], cap: int | None = None) -> "Poly":
        """Replace slot ``k`` by ``images[k]`` (``None`` keeps nothing: error).

        All images must live in one common target ring.  ``cap`` truncates
        every intermediate product at that total degree.
        """
        if len(images) != self.nvars:
            raise ValueError("need one image per slot")
        target_n = None
        for im in images:
            if im is not None:
                target_n = im.n
                break
        if target_n is None:
            raise ValueError("no images given")
        used = self.used_slots()
        for s in used:
            if images[s] is None:
                raise ValueError(f"no image for slot {s}")
        cache: dict[tuple[int, int], Poly] = {}

        def power(slot: int, k: int) -> Poly:
            key = (slot, k)
            got = cache.get(key)
            if got is None:
                if k == 1:
                    got = images[slot]
                else:
                    got = power(slot, k - 1).mul_trunc(images[slot], cap)
                cache[key] = got
            return got

        acc: dict = {}
        one = Poly.const(target_n, 1)
        for e, c in self.terms.items():
            t = one
            for slot, k in enumerate(e):
                if k:
                    t = t.mul_trunc(power(slot, k), cap)
                    if not t.terms:
                        break
            for te, tc in t.terms.items():
                v = tc * c
                s = acc.get(te)
                if s is None:
                    acc[te] = v
                else:
                    s = s + v
                    if s:
                        acc[te] = s
                    else:
                        del acc[te]
        return Poly._from_clean(target_n, acc)

    def shift(self, p: "Point", cap: int | None = None) -> "Poly":
        """Re-center at ``p``: returns f(p + Z, conj(p) + Zbar)."""
        n = self.n
        if p.n != n:
            raise ValueError("point/ring mismatch")
        vals = list(p.coords) + [c.conjugate() for c in p.coords]
        images = [Poly.var(n, s) + vals[s] for s in range(2 * n + 2)]
        return self.substitute(images, cap)

    def linear_change(self, matrix: Sequence[Sequence[GaussianRational]]) -> "Poly":
        """Pull back by the complex-linear map Z = A Z' (and Zbar = conj(A) Zbar')."""
        n = self.n
        m = n + 1
        if len(matrix) != m or any(len(row) != m for row in matrix):
            raise ValueError("matrix must be (n+1)x(n+1)")
        images = []
        for a in range(m):
            t = Poly.zero(n)
            for b in range(m):
                t = t + Poly.var(n, b).scale(matrix[a][b])
            images.append(t)
        images += [im.conj() for im in images]
        return self.substitute(images)

    # -- rendering -------------------------------------------------------
    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order (z_1 < ... < w < conj(z_1) < ... < conj(w))."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0][::-1]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                var_name(s, self.n) + (f"^{k}" if k > 1 else "")
                for s, k in enumerate(e)
                if k
            )
            neg, body = _coef_body(c, bool(mono))
            if mono:
                body = f"{body}*{mono}" if body else mono
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"Poly(n={self.n}, {self})"


def _coef_body(c: GaussianRational, has_mono: bool) -> tuple[bool, str]:
    """Split a coefficient into (is_negative, unsigned text)."""
    from .gaussian import format_rational

    if c.im and c.re:
        return False, f"({c})"
    if not c.im:
        q = c.re
        neg = q < 0
        q = abs(q)
        if q == 1 and has_mono:
            return neg, ""
        return neg, format_rational(q)
    q = c.im
    neg = q < 0
    q = abs(q)
    return neg, ("i" if q == 1 else f"{format_rational(q)}*i")


def _mul_terms(a: dict, b: dict, cap: int | None) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    if cap is not None:
        bl = [(eb, cb, sum(eb)) for eb, cb in b.items()]
    else:
        bl = [(eb, cb, 0) for eb, cb in b.items()]
    for ea, ca in a.items():
        da = sum(ea) if cap is not None else 0
        for eb, cb, db in bl:
            if cap is not None and da + db > cap:
                continue
            e = tuple([x + y for x, y in zip(ea, eb)])
            v = ca * cb
            s = out.get(e)
            if s is None:
                out[e] = v
            else:
                out[e] = s + v
    return {e: c for e, c in out.items() if c}


@dataclass(frozen=True)
class Point:
    """Point (z_1, .., z_n, w) of C^{n+1} with Gaussian-rational coordinates."""

    coords: tuple

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(as_gr(c) for c in coords))
        if not self.coords:
            raise ValueError("a point needs at least one coordinate")

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @classmethod
    def origin(cls, n: int) -> "Point":
        return cls([ZERO] * (n + 1))

    def conj(self) -> "Point":
        return Point(c.conjugate() for c in self.coords)

    def is_origin(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return ",".join(str(c) for c in self.coords)


def _eval_terms(f: Poly, values: Sequence[GaussianRational]) -> GaussianRational:
    pw: dict[tuple[int, int], GaussianRational] = {}
    total = ZERO
    for e, c in f.terms.items():
        t = c
        for s, k in enumerate(e):
            if k:
                key = (s, k)
                v = pw.get(key)
                if v is None:
                    v = values[s] ** k
                    pw[key] = v
                t = t * v
                if not t:
                    break
        total = total + t
    return total


def conj_involution(f: Poly) -> Poly:
    """Swap each holomorphic slot with its conjugate and conjugate coefficients."""
    return f.conj()


def is_real(f: Poly) -> bool:
    return f.is_real()


def derivative(f: Poly, v: VarIndex | int) -> Poly:
    return f.derivative(v)


def evaluate(f: Poly, p: Point) -> GaussianRational:
    """Value of ``f`` at ``(p, conj(p))``."""
    if p.n != f.n:
        raise ValueError("point/ring mismatch")
    return _eval_terms(f, list(p.coords) + [c.conjugate() for c in p.coords])


def evaluate_polarized(f: Poly, Z: Point, Xi: Point) -> GaussianRational:
    """Value with holomorphic slots from ``Z`` and barred slots from ``Xi``."""
    if Z.n != f.n or Xi.n != f.n:
        raise ValueError("point/ring mismatch")
    return _eval_terms(f, list(Z.coords) + list(Xi.coords))


def as_fraction(c: GaussianRational) -> Fraction:
    if c.im:
        raise ValueError(f"expected a real value, got {c}")
    return c.re
