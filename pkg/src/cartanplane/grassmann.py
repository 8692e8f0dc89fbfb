"""Horizontal and isotropic subspaces of the Cartan plane, and the affine
structure of the isotropic Grassmannian over Gr(n, s).

Every s-dimensional horizontal isotropic subspace is the lift
``{sigma + q^(sigma) : sigma in Sigma0}`` of its shadow Sigma0 by some
degree-k polynomial q, and two polynomials give the same lift exactly when
they differ by an element of S^k Ann(Sigma0) (x) N.  This module builds those
objects and checks the statement numerically, rank by rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, List, Optional, Sequence, Tuple

from . import ratlin
from .cartan import omega_flat, omega_table
from .symalg import (Context, SymPoly, annihilator_power_basis, basis_polys,
                     polarize)


class NotIntegralError(ValueError):
    """The subspace is not horizontal and isotropic."""


class NoSolutionError(RuntimeError):
    """A horizontal isotropic subspace admitted no fiber representative.

    This would contradict transitivity of the affine action; it carries the
    offending subspace as a certificate.
    """

    def __init__(self, subspace: "CartanSubspace"):
        super().__init__("FALSIFICATION: horizontal isotropic subspace is not a lift of any polynomial")
        self.subspace = subspace


class CartanSubspace:
    """A subspace of C with a chosen basis of flat coordinate vectors."""

    def __init__(self, ctx: Context, basis: Iterable[Sequence]):
        self.ctx = ctx
        self.basis = tuple(ratlin.to_vector(b) for b in basis)
        for b in self.basis:
            if len(b) != ctx.cartan_dim:
                raise ratlin.DimensionError(f"vector of length {len(b)} in a {ctx.cartan_dim}-dim Cartan plane")
        self.space = ratlin.Subspace(ctx.cartan_dim, self.basis)
        if self.space.dim != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def horizontal_parts(self) -> List[Tuple[Fraction, ...]]:
        return [b[:self.ctx.n] for b in self.basis]

    def vertical_parts(self) -> List[Tuple[Fraction, ...]]:
        return [b[self.ctx.n:] for b in self.basis]

    @cached_property
    def horizontal(self) -> bool:
        return ratlin.rank(self.horizontal_parts(), self.ctx.n) == self.dim if self.basis else True

    @cached_property
    def isotropic(self) -> bool:
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                if any(omega_flat(self.ctx, self.basis[a], self.basis[b])):
                    return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, CartanSubspace):
            return NotImplemented
        return self.ctx == other.ctx and self.space == other.space

    def __hash__(self):
        return hash((self.ctx, self.space))

    def contains(self, other: "CartanSubspace") -> bool:
        return self.space.contains(other.space)

    def __repr__(self):
        return f"CartanSubspace(dim={self.dim}, ctx={self.ctx})"


def shadow(sigma: CartanSubspace) -> ratlin.Subspace:
    """Image of sigma under the projection C -> L."""
    return ratlin.Subspace(sigma.ctx.n, sigma.horizontal_parts())


def is_horizontal(sigma: CartanSubspace) -> bool:
    return sigma.horizontal


def is_isotropic(sigma: CartanSubspace) -> bool:
    return sigma.isotropic


def is_integral_element(sigma: CartanSubspace) -> bool:
    return sigma.horizontal and sigma.isotropic


# -- polarization matrices ------------------------------------------------------

@lru_cache(maxsize=None)
def _polarized_basis(ctx: Context):
    """For each basis element of S^k L* (x) N, its polarization images as vectors."""
    return tuple(tuple(im.to_vector() for im in polarize(q).images) for q in basis_polys(ctx, ctx.k))


def restriction_matrix(ctx: Context, sigma0_basis: Sequence[Sequence]) -> List[List[Fraction]]:
    """Matrix of q |-> q^ restricted to sigma0_basis, rows (a, vertical coord), cols basis of S^k."""
    pol = _polarized_basis(ctx)
    nv = ctx.vertical_dim
    rows = []
    for v in sigma0_basis:
        block = [[Fraction(0)] * len(pol) for _ in range(nv)]
        for col, images in enumerate(pol):
            for i, vi in enumerate(v):
                if not vi:
                    continue
                for r, x in enumerate(images[i]):
                    if x:
                        block[r][col] += vi * x
        rows.extend(block)
    return rows


def _coerce_basis(sigma0) -> List[Tuple[Fraction, ...]]:
    if isinstance(sigma0, ratlin.Subspace):
        return list(sigma0.basis)
    return [ratlin.to_vector(v) for v in sigma0]


def stabilizer(ctx: Context, sigma0) -> ratlin.Subspace:
    """Kernel of q |-> q^|_Sigma0 inside S^k L* (x) N (coordinates)."""
    basis = _coerce_basis(sigma0)
    dim = ctx.sym_dim(ctx.k)
    if not basis:
        return ratlin.Subspace.full(dim)
    return ratlin.Subspace(dim, ratlin.kernel_basis(restriction_matrix(ctx, basis), dim))


# -- graphs, lifts, the affine action ---------------------------------------------

def lift(ctx: Context, sigma0, p: SymPoly) -> CartanSubspace:
    """Sigma0^(p) = {sigma + p^(sigma) : sigma in Sigma0}."""
    if (p.n, p.m, p.degree) != (ctx.n, ctx.m, ctx.k):
        raise ValueError("p must be a degree-k polynomial of this context")
    basis = _coerce_basis(sigma0)
    for v in basis:
        if len(v) != ctx.n:
            raise ratlin.DimensionError(f"vector of length {len(v)} is not in L = Q^{ctx.n}")
    pol = polarize(p)
    return CartanSubspace(ctx, [tuple(v) + pol.apply(v).to_vector() for v in basis])


def graph_of(ctx: Context, p: SymPoly) -> CartanSubspace:
    """L_p = {l + p^(l) : l in L}, an n-dimensional integral element."""
    return lift(ctx, [[int(i == j) for j in range(ctx.n)] for i in range(ctx.n)], p)


def graph_of_hom(ctx: Context, images: Sequence[SymPoly]) -> CartanSubspace:
    """Graph of an arbitrary linear map L -> S^{k-1}L* (x) N given on e_1..e_n."""
    return CartanSubspace(ctx, [tuple(Fraction(int(i == j)) for j in range(ctx.n)) + im.to_vector()
                                for i, im in enumerate(images)])


def fiber_representative(sigma: CartanSubspace) -> SymPoly:
    """Some q with lift(shadow(sigma), q) == sigma.

    Solves q^(h_a) = v_a for the horizontal/vertical parts (h_a, v_a) of the
    basis.  Raises NoSolutionError if the system is inconsistent.
    """
    if not is_integral_element(sigma):
        raise NotIntegralError("fiber representatives exist only for horizontal isotropic subspaces")
    ctx = sigma.ctx
    if sigma.dim == 0:
        return SymPoly.zero(ctx.n, ctx.m, ctx.k)
    mat = restriction_matrix(ctx, sigma.horizontal_parts())
    rhs = [x for v in sigma.vertical_parts() for x in v]
    sol = ratlin.solve(mat, rhs, ctx.sym_dim(ctx.k))
    if sol is None:
        raise NoSolutionError(sigma)
    return SymPoly.from_vector(ctx.n, ctx.m, ctx.k, sol)


def act(sigma: CartanSubspace, q: SymPoly) -> CartanSubspace:
    """Sigma0^(p) |-> Sigma0^(p+q)."""
    if not is_integral_element(sigma):
        raise NotIntegralError("the action is defined on horizontal isotropic subspaces")
    p = fiber_representative(sigma)
    return lift(sigma.ctx, sigma.horizontal_parts(), p + q)


@dataclass(frozen=True)
class IsotropicFlag:
    small: CartanSubspace
    big: CartanSubspace

    def __post_init__(self):
        if not (is_integral_element(self.small) and is_integral_element(self.big)):
            raise NotIntegralError("both members of a flag must be integral elements")
        if self.big.dim != self.big.ctx.n:
            raise ValueError("the big member of a flag must be n-dimensional")
        if not self.big.contains(self.small):
            raise ValueError("flag members are not nested")


# -- isotropic graphs over a fixed shadow --------------------------------------------

def isotropy_system(ctx: Context, sigma0_basis: Sequence[Sequence]) -> List[List[Fraction]]:
    """Linear conditions on phi: Sigma0 -> S^{k-1}L* (x) N for graph(phi) to be isotropic.

    Unknowns are the vertical images of the basis vectors, block by block.
    Omega(h_a + phi_a, h_b + phi_b) is linear in phi because h_a, h_b are
    horizontal and the vertical summand is isotropic.
    """
    terms, nval = omega_table(ctx)
    nv = ctx.vertical_dim
    s = len(sigma0_basis)
    rows = []
    for a in range(s):
        for b in range(a + 1, s):
            block = [[Fraction(0)] * (s * nv) for _ in range(nval)]
            ha, hb = sigma0_basis[a], sigma0_basis[b]
            for c, i, beta, coef in terms:
                col = beta - ctx.n
                # coef * (ha[i] phi_b[col] - hb[i] phi_a[col])
                if ha[i]:
                    block[c][b * nv + col] += coef * ha[i]
                if hb[i]:
                    block[c][a * nv + col] -= coef * hb[i]
            rows.extend(block)
    return rows


def isotropic_graphs(ctx: Context, sigma0_basis: Sequence[Sequence]) -> List[Tuple[Fraction, ...]]:
    """Basis of the maps phi whose graphs over Sigma0 are isotropic (flattened by block)."""
    nunk = len(sigma0_basis) * ctx.vertical_dim
    rows = isotropy_system(ctx, [ratlin.to_vector(v) for v in sigma0_basis])
    return ratlin.kernel_basis(rows, nunk) if rows else ratlin.kernel_basis([], nunk)


# -- dimension formulas ------------------------------------------------------------

def fiber_dim_formula(ctx: Context, s: int) -> int:
    return (comb(ctx.n + ctx.k - 1, ctx.k) - comb(ctx.n - s + ctx.k - 1, ctx.k)) * ctx.m


def dim_Is_formula(ctx: Context, s: int) -> int:
    """s(n-s) + [C(n+k-1,k) - C(n-s+k-1,k)] m."""
    return s * (ctx.n - s) + fiber_dim_formula(ctx, s)


def dim_flag_formula(ctx: Context, s: int) -> int:
    """s(n-s) + C(n+k-1,k) m (the printed version has m = 1)."""
    return s * (ctx.n - s) + comb(ctx.n + ctx.k - 1, ctx.k) * ctx.m


def stabilizer_dim_formula(ctx: Context, s: int) -> int:
    return comb(ctx.n - s + ctx.k - 1, ctx.k) * ctx.m


@dataclass
class Quantity:
    """A number with its provenance: closed form and/or rank computation."""

    formula: Optional[int] = None
    rank: Optional[int] = None

    @property
    def agree(self) -> bool:
        return self.formula is None or self.rank is None or self.formula == self.rank

    def as_dict(self) -> dict:
        out = {}
        if self.formula is not None:
            out["FORMULA"] = self.formula
        if self.rank is not None:
            out["RANK"] = self.rank
        out["agree"] = self.agree
        return out


@dataclass
class DimReport:
    ctx: Context
    s: int
    dim_flag: Quantity
    dim_Is: Quantity
    fiber_dim: Quantity
    stabilizer_dim: Quantity
    isotropic_graph_dim: Quantity

    @property
    def ok(self) -> bool:
        return all(q.agree for q in (self.dim_flag, self.dim_Is, self.fiber_dim,
                                     self.stabilizer_dim, self.isotropic_graph_dim))

    def as_dict(self) -> dict:
        return {
            "n": self.ctx.n, "m": self.ctx.m, "k": self.ctx.k, "s": self.s,
            "dim_flag": self.dim_flag.as_dict(),
            "dim_Is": self.dim_Is.as_dict(),
            "fiber_dim": self.fiber_dim.as_dict(),
            "stabilizer_dim": self.stabilizer_dim.as_dict(),
            "isotropic_graph_dim": self.isotropic_graph_dim.as_dict(),
            "ok": self.ok,
        }


def dim_report(ctx: Context, s: int, sigma0_basis: Optional[Sequence[Sequence]] = None) -> DimReport:
    """Closed-form dimensions, each recomputed by rank at a sample shadow.

    ``sigma0_basis`` defaults to span(e_1..e_s); the rank side is independent
    of that choice.
    """
    if not 0 <= s <= ctx.n:
        raise ValueError(f"s must lie in [0, {ctx.n}]")
    if sigma0_basis is None:
        sigma0_basis = [[int(i == j) for j in range(ctx.n)] for i in range(s)]
    sigma0_basis = [ratlin.to_vector(v) for v in sigma0_basis]
    if len(sigma0_basis) != s or (s and ratlin.rank(sigma0_basis, ctx.n) != s):
        raise ValueError("sigma0_basis must consist of s independent vectors")
    total = ctx.sym_dim(ctx.k)
    grass = s * (ctx.n - s)
    restr_rank = ratlin.rank(restriction_matrix(ctx, sigma0_basis), total) if s else 0
    pol_rows = restriction_matrix(ctx, [[int(i == j) for j in range(ctx.n)] for i in range(ctx.n)])
    pol_rank = ratlin.rank(pol_rows, total)
    iso_dim = len(isotropic_graphs(ctx, sigma0_basis)) if s else 0
    return DimReport(
        ctx, s,
        dim_flag=Quantity(dim_flag_formula(ctx, s), grass + pol_rank),
        dim_Is=Quantity(dim_Is_formula(ctx, s), grass + iso_dim),
        fiber_dim=Quantity(fiber_dim_formula(ctx, s), restr_rank),
        stabilizer_dim=Quantity(stabilizer_dim_formula(ctx, s), total - restr_rank),
        isotropic_graph_dim=Quantity(fiber_dim_formula(ctx, s), iso_dim),
    )


# -- randomized structure checks ------------------------------------------------------

@dataclass
class SampleCertificate:
    sigma0: List[List[str]]
    stabilizer_dim: int
    annihilator_dim: int
    stabilizer_equal: bool
    transitive: bool
    fiber_rank: int
    representative_ok: bool
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.stabilizer_equal and self.transitive and self.representative_ok


@dataclass
class AffineBundleReport:
    ctx: Context
    s: int
    samples: List[SampleCertificate] = field(default_factory=list)
    dims: Optional[DimReport] = None

    @property
    def failures(self) -> List[SampleCertificate]:
        return [c for c in self.samples if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures and (self.dims is None or self.dims.ok) and all(
            c.fiber_rank == fiber_dim_formula(self.ctx, self.s) for c in self.samples)

    def as_dict(self) -> dict:
        return {
            "n": self.ctx.n, "m": self.ctx.m, "k": self.ctx.k, "s": self.s,
            "samples": len(self.samples),
            "failures": [c.__dict__ for c in self.failures],
            "stabilizer_dim": {"FORMULA": stabilizer_dim_formula(self.ctx, self.s),
                               "RANK": sorted({c.stabilizer_dim for c in self.samples})},
            "fiber_dim": {"FORMULA": fiber_dim_formula(self.ctx, self.s),
                          "RANK": sorted({c.fiber_rank for c in self.samples})},
            "dims": self.dims.as_dict() if self.dims else None,
            "ok": self.ok,
        }


def check_sample(ctx: Context, sigma0_basis: Sequence[Sequence], rng) -> SampleCertificate:
    """Stabilizer and transitivity checks at one shadow.

    (a) kernel of the restriction map equals S^k Ann(Sigma0) (x) N;
    (b) a random isotropic graph over Sigma0 (built from the isotropy
        equations, not from a polynomial) has a fiber representative that
        reproduces it.
    """
    from .sampling import random_combination

    sigma0_basis = [ratlin.to_vector(v) for v in sigma0_basis]
    total = ctx.sym_dim(ctx.k)
    stab = stabilizer(ctx, sigma0_basis)
    ann = ratlin.Subspace(total, [q.to_vector() for q in annihilator_power_basis(sigma0_basis, ctx)])
    stab_equal = stab == ann
    fiber_rank = total - stab.dim

    graphs = isotropic_graphs(ctx, sigma0_basis)
    phi = random_combination(rng, graphs, len(sigma0_basis) * ctx.vertical_dim)
    nv = ctx.vertical_dim
    sigma = CartanSubspace(ctx, [tuple(h) + tuple(phi[a * nv:(a + 1) * nv]) for a, h in enumerate(sigma0_basis)])
    transitive, rep_ok, note = True, True, ""
    if not is_integral_element(sigma):
        transitive, note = False, "sampled graph is not isotropic"
    else:
        try:
            q = fiber_representative(sigma)
        except NoSolutionError:
            transitive, note = False, "NO_SOLUTION"
        else:
            rep_ok = lift(ctx, sigma0_basis, q) == sigma
    return SampleCertificate(
        sigma0=[[str(x) for x in v] for v in sigma0_basis],
        stabilizer_dim=stab.dim, annihilator_dim=ann.dim, stabilizer_equal=stab_equal,
        transitive=transitive, fiber_rank=fiber_rank, representative_ok=rep_ok, note=note)


def verify_theorem1(ctx: Context, s: int, rng, samples: int = 10) -> AffineBundleReport:
    """Stabilizer equality, transitivity and dimension identities on random shadows."""
    from .sampling import random_subspace_basis

    if not 1 <= s <= ctx.n:
        raise ValueError(f"s must lie in [1, {ctx.n}]")
    report = AffineBundleReport(ctx, s)
    for i in range(samples):
        sub = rng.fork("shadow", i)
        report.samples.append(check_sample(ctx, random_subspace_basis(sub, ctx.n, s), sub))
    report.dims = dim_report(ctx, s, random_subspace_basis(rng.fork("dims"), ctx.n, s))
    return report
