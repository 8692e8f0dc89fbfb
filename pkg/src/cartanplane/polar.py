"""Tangent vectors to I_s(C), the sharp map and polar planes.

A tangent vector at Sigma is a linear map p: Sigma -> C/Sigma.  We store it
by the images of Sigma's basis vectors b_1..b_s, each reduced against the
echelon basis of Sigma (so only the non-pivot coordinates can be nonzero).

First-order isotropy of Sigma_t = {b + t p(b)} reads

    Omega(b_a, p(b_b)) = Omega(b_b, p(b_a))   for a < b,

and sharp(p)(a, b) = Omega(b_a, p(b_b)), with its S^{k-2}L* part pulled back
to the shadow along the horizontal parts of b_1..b_s.  The polar plane is the
kernel of sharp on the tangent space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import List, Sequence, Tuple

from . import ratlin
from .cartan import omega_operator
from .grassmann import (CartanSubspace, NotIntegralError, dim_Is_formula, is_integral_element)
from .symalg import Context, SymPoly, basis_polys, pullback, sym_dim


class NotTangentError(ValueError):
    """The homomorphism violates the first-order isotropy condition."""

    def __init__(self, pair: Tuple[int, int], defect: SymPoly):
        super().__init__(f"not tangent to I_s: symmetry fails on basis pair {pair}")
        self.pair = pair
        self.defect = defect


@dataclass(frozen=True)
class TangentHom:
    base: CartanSubspace
    images: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.images) != self.base.dim:
            raise ValueError("one image per basis vector of the base is required")

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.images)


@dataclass(frozen=True)
class SharpValue:
    """entries[a][b] = Omega(b_a, p(b_b)) restricted to the shadow (a polynomial in s variables)."""

    entries: Tuple[Tuple[SymPoly, ...], ...]

    @property
    def s(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_symmetric(self) -> bool:
        return all(self.entries[a][b] == self.entries[b][a] for a in range(self.s) for b in range(a))

    def is_totally_symmetric(self) -> bool:
        """True iff the underlying k-linear form on the shadow is symmetric in all slots.

        With Q = sum_ab t_a t_b S(a,b), full symmetry is equivalent to
        S(a,b) = d_a d_b Q / (k(k-1)) for all a, b.
        """
        if not self.s:
            return True
        first = self.entries[0][0]
        k = first.degree + 2
        q = SymPoly.zero(self.s, first.m, k)
        for a in range(self.s):
            for b in range(self.s):
                q = q + _times_var(_times_var(self.entries[a][b], a), b)
        scale = Fraction(1, k * (k - 1))
        return all(_diff(_diff(q, a), b) * scale == self.entries[a][b]
                   for a in range(self.s) for b in range(self.s))


def _times_var(p: SymPoly, i: int) -> SymPoly:
    return SymPoly(p.n, p.m, p.degree + 1,
                   {(sigma[:i] + (sigma[i] + 1,) + sigma[i + 1:], j): c for (sigma, j), c in p.coeffs.items()})


def _diff(p: SymPoly, i: int) -> SymPoly:
    return SymPoly(p.n, p.m, p.degree - 1,
                   {(sigma[:i] + (sigma[i] - 1,) + sigma[i + 1:], j): c * sigma[i]
                    for (sigma, j), c in p.coeffs.items() if sigma[i]})


class PolarSystem:
    """All linear conditions on Hom(Sigma, C/Sigma) at one integral element."""

    def __init__(self, sigma: CartanSubspace):
        if not is_integral_element(sigma):
            raise NotIntegralError("polar constructions need a horizontal isotropic subspace")
        self.sigma = sigma
        self.ctx = sigma.ctx
        pivots = set(sigma.space.pivots)
        self.free_cols = [c for c in range(self.ctx.cartan_dim) if c not in pivots]
        self.width = len(self.free_cols)
        self.nunk = sigma.dim * self.width
        self._ops = [omega_operator(self.ctx, b) for b in sigma.basis]
        self._restrict = self._pullback_matrix()

    def _pullback_matrix(self) -> List[List[Fraction]]:
        """Matrix of S^{k-2}L* (x) N -> S^{k-2}(shadow)* (x) N in the h_a coordinates."""
        ctx, s = self.ctx, self.sigma.dim
        if ctx.k < 2:
            return []
        h = self.sigma.horizontal_parts()
        cols = [pullback(q, h).to_vector() for q in basis_polys(ctx, ctx.k - 2)]
        nrow = sym_dim(s, ctx.k - 2) * ctx.m
        return [[cols[c][r] for c in range(len(cols))] for r in range(nrow)]

    def _block(self, a: int, b: int) -> List[List[Fraction]]:
        """Rows of w |-> Omega(b_a, w) on the unknowns of block b."""
        rows = []
        for op_row in self._ops[a]:
            row = [0] * self.nunk
            off = b * self.width
            for t, c in enumerate(self.free_cols):
                if op_row[c]:
                    row[off + t] = op_row[c]
            rows.append(row)
        return rows

    @cached_property
    def tangency_rows(self) -> List[List[Fraction]]:
        rows = []
        s = self.sigma.dim
        for a in range(s):
            for b in range(a + 1, s):
                ab, ba = self._block(a, b), self._block(b, a)
                rows.extend([x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba))
        return rows

    def _restricted(self, rows: List[List[Fraction]]) -> List[List[Fraction]]:
        out = []
        for rr in self._restrict:
            acc = [0] * self.nunk
            for coef, row in zip(rr, rows):
                if coef:
                    for j, x in enumerate(row):
                        if x:
                            acc[j] += coef * x
            out.append(acc)
        return out

    @cached_property
    def sharp_rows(self) -> List[List[Fraction]]:
        """Restricted Omega(b_a, p(b_b)) for a <= b (symmetric on the tangent space)."""
        rows = []
        s = self.sigma.dim
        for a in range(s):
            for b in range(a, s):
                rows.extend(self._restricted(self._block(a, b)))
        return rows

    @cached_property
    def orthogonality_rows(self) -> List[List[Fraction]]:
        """Unrestricted Omega(b_a, p(b_b)) = 0 for all a, b: images inside Sigma-perp."""
        rows = []
        s = self.sigma.dim
        for a in range(s):
            for b in range(s):
                rows.extend(self._block(a, b))
        return rows

    def _rank(self, rows) -> int:
        return ratlin.rank(rows, self.nunk) if rows else 0

    @cached_property
    def _ranks(self) -> Tuple[int, int]:
        return ratlin.nested_ranks(self.tangency_rows, self.sharp_rows, self.nunk)

    @property
    def tangent_rank(self) -> int:
        return self._ranks[0]

    @property
    def tangent_dim(self) -> int:
        return self.nunk - self.tangent_rank

    @property
    def polar_dim(self) -> int:
        return self.nunk - self._ranks[1]

    @property
    def sharp_rank(self) -> int:
        return self.tangent_dim - self.polar_dim

    def hom_from_unknowns(self, x: Sequence) -> TangentHom:
        images = []
        for a in range(self.sigma.dim):
            v = [Fraction(0)] * self.ctx.cartan_dim
            for t, c in enumerate(self.free_cols):
                v[c] = Fraction(x[a * self.width + t])
            images.append(tuple(v))
        return TangentHom(self.sigma, tuple(images))

    def unknowns_of(self, p: TangentHom) -> Tuple[Fraction, ...]:
        if p.base != self.sigma:
            raise ValueError("tangent vector based at a different subspace")
        x = []
        for v in p.images:
            r = self.sigma.space.reduce(v)
            x.extend(r[c] for c in self.free_cols)
        return tuple(x)

    def kernel(self, rows) -> List[TangentHom]:
        vecs = ratlin.kernel_basis(rows, self.nunk) if rows else ratlin.kernel_basis([], self.nunk)
        return [self.hom_from_unknowns(v) for v in vecs]


def tangent_space_Is(sigma: CartanSubspace) -> List[TangentHom]:
    """Basis of the tangent space to I_s(C) at sigma."""
    ps = PolarSystem(sigma)
    return ps.kernel(ps.tangency_rows)


def _omega_at(sigma: CartanSubspace, a: int, v: Sequence) -> List[Fraction]:
    op = omega_operator(sigma.ctx, sigma.basis[a])
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in op]


def sharp(p: TangentHom) -> SharpValue:
    """Omega(b_a, p(b_b)) restricted to the shadow; raises NotTangentError off the tangent space."""
    sigma, ctx = p.base, p.base.ctx
    s = sigma.dim
    images = [sigma.space.reduce(v) for v in p.images]
    raw = [[_omega_at(sigma, a, images[b]) for b in range(s)] for a in range(s)]
    for a in range(s):
        for b in range(a + 1, s):
            if raw[a][b] != raw[b][a]:
                defect = SymPoly.from_vector(ctx.n, ctx.m, ctx.k - 2,
                                             [x - y for x, y in zip(raw[a][b], raw[b][a])])
                raise NotTangentError((a, b), defect)
    h = sigma.horizontal_parts()
    entries = tuple(tuple(pullback(SymPoly.from_vector(ctx.n, ctx.m, ctx.k - 2, raw[a][b]), h)
                          if ctx.k >= 2 else SymPoly.zero(s, ctx.m, ctx.k - 2)
                          for b in range(s)) for a in range(s))
    return SharpValue(entries)


def polar_plane(sigma: CartanSubspace) -> List[TangentHom]:
    """Basis of P_Sigma = ker(sharp) inside the tangent space."""
    ps = PolarSystem(sigma)
    return ps.kernel(ps.tangency_rows + ps.sharp_rows)


def osculator(p: TangentHom) -> ratlin.Subspace:
    """Sigma + image(p), as a subspace of C."""
    return ratlin.Subspace(p.base.ctx.cartan_dim, list(p.base.basis) + [v for v in p.images if any(v)])


def dim_polar_formula(ctx: Context, s: int) -> int:
    """s(n-s) + [C(n+k-1,k) - C(n-s+k-1,k) - C(s+k-1,k)] m."""
    if not 0 <= s <= ctx.n:
        raise ValueError(f"s must lie in [0, {ctx.n}]")
    if s == 0:
        return 0
    n, k, m = ctx.n, ctx.k, ctx.m
    return s * (n - s) + (comb(n + k - 1, k) - comb(n - s + k - 1, k) - comb(s + k - 1, k)) * m


def sharp_target_dim(ctx: Context, s: int) -> int:
    """dim S^k Sigma* (x) N, the claimed image of sharp."""
    return comb(s + ctx.k - 1, ctx.k) * ctx.m


@dataclass
class PolarReport:
    ctx: Context
    s: int
    tangent_dim: int
    polar_dim: int
    sharp_rank: int
    symmetric_ok: bool
    totally_symmetric_ok: bool

    @property
    def ok(self) -> bool:
        return (self.tangent_dim == dim_Is_formula(self.ctx, self.s)
                and self.polar_dim == dim_polar_formula(self.ctx, self.s)
                and self.sharp_rank == sharp_target_dim(self.ctx, self.s)
                and self.symmetric_ok and self.totally_symmetric_ok)

    def as_dict(self) -> dict:
        return {
            "n": self.ctx.n, "m": self.ctx.m, "k": self.ctx.k, "s": self.s,
            "tangent_dim": {"FORMULA": dim_Is_formula(self.ctx, self.s), "RANK": self.tangent_dim},
            "polar_dim": {"FORMULA": dim_polar_formula(self.ctx, self.s), "RANK": self.polar_dim},
            "sharp_rank": {"FORMULA": sharp_target_dim(self.ctx, self.s), "RANK": self.sharp_rank},
            "sharp_symmetric": self.symmetric_ok,
            "sharp_totally_symmetric": self.totally_symmetric_ok,
            "ok": self.ok,
        }


def polar_report(sigma: CartanSubspace, rng=None) -> PolarReport:
    """Ranks at sigma compared with the closed forms; sharp symmetry on a random tangent vector."""
    ps = PolarSystem(sigma)
    sym_ok = tot_ok = True
    if rng is not None and sigma.dim:
        from .sampling import random_combination

        basis = ratlin.kernel_basis(ps.tangency_rows, ps.nunk) if ps.tangency_rows else \
            ratlin.kernel_basis([], ps.nunk)
        value = sharp(ps.hom_from_unknowns(random_combination(rng, basis, ps.nunk)))
        sym_ok = value.is_symmetric()
        tot_ok = value.is_totally_symmetric()
    return PolarReport(sigma.ctx, sigma.dim, ps.tangent_dim, ps.polar_dim, ps.sharp_rank, sym_ok, tot_ok)


@dataclass
class OsculatorStatus:
    """Compares P_Sigma with {p tangent : osc(p) inside Sigma-perp}."""

    polar_dim: int
    perp_dim: int
    perp_inside_polar: bool

    @property
    def equivalent(self) -> bool:
        return self.perp_inside_polar and self.polar_dim == self.perp_dim

    def as_dict(self) -> dict:
        return {"polar_dim": self.polar_dim, "osc_in_perp_dim": self.perp_dim,
                "osc_in_perp_implies_polar": self.perp_inside_polar, "equivalent": self.equivalent}


def osculator_characterization(sigma: CartanSubspace) -> OsculatorStatus:
    """Exact comparison of the two subspaces of the tangent space.

    osc(p) lies in Sigma-perp exactly when Omega(b_a, p(b_b)) = 0 for all a,
    b, before restriction to the shadow, so that subspace is always inside
    P_Sigma.  At k = 2 restriction is the identity and the two coincide.
    """
    ps = PolarSystem(sigma)
    perp_rows = ps.tangency_rows + ps.orthogonality_rows
    perp_dim = ps.nunk - ps._rank(perp_rows)
    stacked = perp_rows + ps.sharp_rows
    inside = ps._rank(stacked) == ps._rank(perp_rows)
    return OsculatorStatus(ps.polar_dim, perp_dim, inside)
