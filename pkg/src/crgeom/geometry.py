"""Hypersurfaces {rho = 0}, complex gradients and Levi forms.

Orientation convention: the pseudoconvex side of M is {rho < 0}.  With
rho = -Im w + P this is {Im w > P}; the unit sphere |Z|^2 - 1 fits the same
convention.  ``Hypersurface.orientation = -1`` flips it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gaussian import ZERO, GaussianRational
from .linalg import HermitianMatrixExact, Signature, hermitian_signature
from .polyring import Point, Poly, evaluate

__all__ = [
    "Hypersurface",
    "NotSmoothError",
    "on_hypersurface",
    "is_smooth_at",
    "levi_matrix",
    "tangent_levi_form",
    "hermitian_signature",
    "is_strictly_pseudoconvex_at",
    "hessian_polys",
    "tangential_signature",
    "NotOnHypersurfaceError",
]


class NotSmoothError(ValueError):
    """Raised when a pointwise test needs a nonvanishing gradient."""


class NotOnHypersurfaceError(ValueError):
    """Raised when a point does not satisfy rho(p) = 0."""


@dataclass(frozen=True)
class Hypersurface:
    rho: Poly
    orientation: int = 1
    gradient: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.rho.is_real():
            raise ValueError("defining polynomial must be real")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        m = self.rho.n + 1
        object.__setattr__(self, "gradient", tuple(self.rho.derivative(k) for k in range(m)))

    @property
    def n(self) -> int:
        return self.rho.n

    def gradient_at(self, p: Point) -> list[GaussianRational]:
        """(rho_{z_1}, .., rho_{z_n}, rho_w) at p."""
        return [evaluate(g, p) for g in self.gradient]

    def flipped(self) -> "Hypersurface":
        return Hypersurface(self.rho, -self.orientation)


def on_hypersurface(M: Hypersurface, p: Point) -> bool:
    return not evaluate(M.rho, p)


def is_smooth_at(M: Hypersurface, p: Point) -> bool:
    """For real rho the full real gradient vanishes iff rho_Z does."""
    if not on_hypersurface(M, p):
        raise NotOnHypersurfaceError(f"point {p} is not on M")
    return any(M.gradient_at(p))


def hessian_polys(rho: Poly) -> list[list[Poly]]:
    """Matrix of d^2 rho / dZ_a dZbar_b as polynomials."""
    n = rho.n
    m = n + 1
    firsts = [rho.derivative(a) for a in range(m)]
    return [[firsts[a].derivative(m + b) for b in range(m)] for a in range(m)]


def levi_matrix(M: Hypersurface | Poly, p: Point) -> HermitianMatrixExact:
    """Complex Hessian of the defining function at p (full (n+1)x(n+1) matrix)."""
    rho = M.rho if isinstance(M, Hypersurface) else M
    H = hessian_polys(rho)
    return HermitianMatrixExact([[evaluate(h, p) for h in row] for row in H])


def tangent_levi_form(M: Hypersurface, p: Point) -> HermitianMatrixExact:
    """Levi matrix restricted to the complex tangent space at p.

    Basis: e_k - (rho_k(p)/rho_j(p)) e_j for k != j, where j is the first
    index with rho_j(p) != 0.  The result is scaled by the orientation.
    """
    g = M.gradient_at(p)
    j = next((k for k, v in enumerate(g) if v), None)
    if j is None:
        raise NotSmoothError(f"gradient vanishes at {p}")
    m = M.n + 1
    basis = []
    for k in range(m):
        if k == j:
            continue
        v = [ZERO] * m
        v[k] = GaussianRational(1)
        v[j] = -g[k] / g[j]
        basis.append(v)
    L = levi_matrix(M, p).entries
    sgn = M.orientation

    def form(u, v):
        tot = ZERO
        for a in range(m):
            if not u[a]:
                continue
            for b in range(m):
                if v[b] and L[a][b]:
                    tot = tot + u[a] * L[a][b] * v[b].conjugate()
        return tot * sgn

    return HermitianMatrixExact([[form(u, v) for v in basis] for u in basis])


def is_strictly_pseudoconvex_at(M: Hypersurface, p: Point) -> bool:
    if not is_smooth_at(M, p):
        raise NotSmoothError(f"M is not smooth at {p}")
    sig = hermitian_signature(tangent_levi_form(M, p))
    return sig == Signature(M.n, 0, 0)


def tangential_signature(M: Hypersurface, p: Point) -> Signature:
    return hermitian_signature(tangent_levi_form(M, p))
