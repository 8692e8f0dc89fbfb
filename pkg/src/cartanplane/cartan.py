"""The Cartan plane C = L (+) S^{k-1}L* (x) N and its meta-symplectic form.

Flat coordinates on C list the horizontal part (e_1..e_n) first, then the
vertical monomial basis of S^{k-1}L* (x) N in the order of
:func:`symalg.monomials`, sigma-major and j-minor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from . import ratlin
from .symalg import Context, SymPoly, polarize, basis_polys


class ContextMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CartanVector:
    horizontal: Tuple[Fraction, ...]
    vertical: SymPoly

    @property
    def ctx_shape(self):
        return (self.vertical.n, self.vertical.m, self.vertical.degree + 1)

    def to_flat(self) -> Tuple[Fraction, ...]:
        return tuple(self.horizontal) + self.vertical.to_vector()

    @classmethod
    def from_flat(cls, ctx: Context, coords: Sequence) -> "CartanVector":
        if len(coords) != ctx.cartan_dim:
            raise ratlin.DimensionError(f"expected {ctx.cartan_dim} coordinates, got {len(coords)}")
        coords = ratlin.to_vector(coords)
        return cls(coords[:ctx.n], SymPoly.from_vector(ctx.n, ctx.m, ctx.k - 1, coords[ctx.n:]))

    @classmethod
    def make(cls, ctx: Context, horizontal=None, vertical: SymPoly = None) -> "CartanVector":
        h = ratlin.to_vector(horizontal) if horizontal is not None else (Fraction(0),) * ctx.n
        v = vertical if vertical is not None else SymPoly.zero(ctx.n, ctx.m, ctx.k - 1)
        if len(h) != ctx.n or (v.n, v.m, v.degree) != (ctx.n, ctx.m, ctx.k - 1):
            raise ContextMismatch("vector does not live in the Cartan plane of this context")
        return cls(h, v)


def _omega_zero(n, m, k) -> SymPoly:
    return SymPoly.zero(n, m, k - 2)


def omega(v: CartanVector, w: CartanVector) -> SymPoly:
    """Omega((l1,p1),(l2,p2)) = p2^(l1) - p1^(l2), valued in S^{k-2}L* (x) N.

    For k = 1 the vertical part has degree 0 and the form vanishes identically
    (the value space S^{-1} is zero).
    """
    if v.ctx_shape != w.ctx_shape or len(v.horizontal) != len(w.horizontal):
        raise ContextMismatch(f"{v.ctx_shape} vs {w.ctx_shape}")
    n, m, k = v.ctx_shape
    if k < 2:
        return _omega_zero(n, m, k)
    out = _omega_zero(n, m, k)
    if not w.vertical.is_zero() and any(v.horizontal):
        out = out + polarize(w.vertical).apply(v.horizontal)
    if not v.vertical.is_zero() and any(w.horizontal):
        out = out - polarize(v.vertical).apply(w.horizontal)
    return out


@lru_cache(maxsize=None)
def omega_table(ctx: Context) -> Tuple[Tuple[Tuple[int, int, int, Fraction], ...], int]:
    """Sparse structure constants of Omega in flat coordinates.

    Returns ``(terms, n_values)`` where each term ``(c, i, b, coef)`` says
    Omega(v, w)_c += coef * (v[i] w[b] - w[i] v[b]) with i horizontal and b
    vertical.  Built by polarizing each vertical basis element, so it is the
    same definition as :func:`omega`.
    """
    terms = []
    if ctx.k >= 2:
        for beta, poly in enumerate(basis_polys(ctx, ctx.k - 1)):
            images = polarize(poly).images
            for i, im in enumerate(images):
                for c, coef in enumerate(im.to_vector()):
                    if coef:
                        terms.append((c, i, ctx.n + beta, coef))
    return tuple(terms), ctx.omega_dim


def omega_flat(ctx: Context, v: Sequence, w: Sequence) -> Tuple[Fraction, ...]:
    terms, nval = omega_table(ctx)
    out = [Fraction(0)] * nval
    for c, i, b, coef in terms:
        x = v[i] * w[b] - w[i] * v[b]
        if x:
            out[c] += coef * x
    return tuple(out)


def omega_operator(ctx: Context, v: Sequence) -> List[List[Fraction]]:
    """Matrix A with A @ w = Omega(v, w), shape (omega_dim, cartan_dim)."""
    terms, nval = omega_table(ctx)
    a = [[Fraction(0)] * ctx.cartan_dim for _ in range(nval)]
    for c, i, b, coef in terms:
        if v[i]:
            a[c][b] += coef * v[i]
        if v[b]:
            a[c][i] -= coef * v[b]
    return a


def omega_orthogonal(ctx: Context, sigma: ratlin.Subspace) -> ratlin.Subspace:
    """{v in C : Omega(v, s) = 0 for every s in sigma}; each value component is one condition."""
    if sigma.dim_ambient != ctx.cartan_dim:
        raise ratlin.DimensionError("subspace is not in this Cartan plane")
    rows = []
    for s in sigma.basis:
        # Omega(v, s) = -Omega(s, v)
        rows.extend(omega_operator(ctx, s))
    if not rows:
        return ratlin.Subspace.full(ctx.cartan_dim)
    return ratlin.Subspace(ctx.cartan_dim, ratlin.kernel_basis(rows, ctx.cartan_dim))


def coordinate_frame(ctx: Context) -> List[CartanVector]:
    """Canonical ordered basis: e_1..e_n, then vertical monomials."""
    frame = []
    zero_v = SymPoly.zero(ctx.n, ctx.m, ctx.k - 1)
    for i in range(ctx.n):
        frame.append(CartanVector(tuple(Fraction(int(i == j)) for j in range(ctx.n)), zero_v))
    zero_h = (Fraction(0),) * ctx.n
    for poly in basis_polys(ctx, ctx.k - 1):
        frame.append(CartanVector(zero_h, poly))
    return frame


def horizontal_subspace(ctx: Context) -> ratlin.Subspace:
    """L itself, embedded in C."""
    return ratlin.Subspace(ctx.cartan_dim, [f.to_flat() for f in coordinate_frame(ctx)[:ctx.n]])


def embed_horizontal(ctx: Context, l: Sequence) -> Tuple[Fraction, ...]:
    return ratlin.to_vector(l) + (Fraction(0),) * ctx.vertical_dim


def flat(ctx: Context, horizontal: Sequence, vertical: SymPoly) -> Tuple[Fraction, ...]:
    return CartanVector.make(ctx, horizontal, vertical).to_flat()
