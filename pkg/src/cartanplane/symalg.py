"""Homogeneous N-valued polynomials on L = Q^n, polarization, annihilator powers.

A degree-d element of S^d L* (x) N is stored in the monomial basis
``xi^sigma (x) y_j``; multinomial factors only ever appear in :func:`polarize`.
Multi-indices of a fixed degree are ordered graded-lexicographically with the
first variable most significant, e.g. ``(2,0), (1,1), (0,2)``.  Flattened
coordinate vectors are sigma-major, j-minor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import ratlin

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class Context:
    """Dimensions at a fixed point: n = dim L, m = dim N, k = jet order."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        for name in ("n", "m", "k"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    def sym_dim(self, d: int) -> int:
        """dim S^d L* (x) N."""
        return sym_dim(self.n, d) * self.m

    @property
    def vertical_dim(self) -> int:
        return self.sym_dim(self.k - 1)

    @property
    def cartan_dim(self) -> int:
        return self.n + self.vertical_dim

    @property
    def omega_dim(self) -> int:
        return self.sym_dim(self.k - 2)


def sym_dim(n: int, d: int) -> int:
    if d < 0:
        return 0
    return comb(n + d - 1, d)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> Tuple[MultiIndex, ...]:
    """All multi-indices of length n and degree d, graded-lex order."""
    if d < 0:
        return ()
    if n == 0:
        return ((),) if d == 0 else ()
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> Dict[MultiIndex, int]:
    return {sigma: i for i, sigma in enumerate(monomials(n, d))}


class SymPoly:
    """An element of S^d L* (x) N.

    ``coeffs`` maps ``(sigma, j)`` (j is 0-based) to a nonzero Fraction.
    A negative degree denotes the zero space; its only element is 0.
    """

    __slots__ = ("n", "m", "degree", "coeffs")

    def __init__(self, n: int, m: int, degree: int, coeffs: Optional[Mapping] = None):
        self.n, self.m, self.degree = n, m, degree
        clean = {}
        for (sigma, j), c in (coeffs or {}).items():
            sigma = tuple(sigma)
            if len(sigma) != n or sum(sigma) != degree or min(sigma, default=0) < 0:
                raise ValueError(f"multi-index {sigma} is not of length {n} and degree {degree}")
            if not 0 <= j < m:
                raise ValueError(f"component index {j} out of range for m={m}")
            c = Fraction(c)
            if c:
                clean[(sigma, j)] = clean.get((sigma, j), 0) + c
        self.coeffs = {key: c for key, c in clean.items() if c}

    @classmethod
    def zero(cls, n: int, m: int, degree: int) -> "SymPoly":
        return cls(n, m, degree)

    @classmethod
    def monomial(cls, sigma: Sequence[int], j: int = 0, m: int = 1, coeff=1) -> "SymPoly":
        sigma = tuple(sigma)
        return cls(len(sigma), m, sum(sigma), {(sigma, j): coeff})

    @classmethod
    def from_vector(cls, n: int, m: int, degree: int, vec: Sequence) -> "SymPoly":
        basis = monomials(n, degree)
        if len(vec) != len(basis) * m:
            raise ratlin.DimensionError(f"expected {len(basis) * m} coordinates, got {len(vec)}")
        coeffs = {}
        for i, sigma in enumerate(basis):
            for j in range(m):
                c = vec[i * m + j]
                if c:
                    coeffs[(sigma, j)] = c
        return cls(n, m, degree, coeffs)

    def to_vector(self) -> Tuple[Fraction, ...]:
        if self.degree < 0:
            return ()
        idx = monomial_index(self.n, self.degree)
        v = [Fraction(0)] * (len(idx) * self.m)
        for (sigma, j), c in self.coeffs.items():
            v[idx[sigma] * self.m + j] = c
        return tuple(v)

    def _same_space(self, other: "SymPoly"):
        if (self.n, self.m, self.degree) != (other.n, other.m, other.degree):
            raise ratlin.DimensionError(
                f"S^{self.degree} (n={self.n}, m={self.m}) vs S^{other.degree} (n={other.n}, m={other.m})")

    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._same_space(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return SymPoly(self.n, self.m, self.degree, out)

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.n, self.m, self.degree, {key: -c for key, c in self.coeffs.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __mul__(self, scalar) -> "SymPoly":
        scalar = Fraction(scalar)
        return SymPoly(self.n, self.m, self.degree, {key: c * scalar for key, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        return (self.n, self.m, self.degree) == (other.n, other.m, other.degree) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.m, self.degree, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def component(self, j: int) -> Dict[MultiIndex, Fraction]:
        """The scalar form multiplying y_j."""
        return {sigma: c for (sigma, jj), c in self.coeffs.items() if jj == j}

    def __repr__(self):
        if not self.coeffs:
            return f"SymPoly(0, degree={self.degree})"
        terms = []
        for sigma, j in sorted(self.coeffs, key=_order_key(self.n, self.degree)):
            mono = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(sigma) if e) or "1"
            terms.append(f"{self.coeffs[(sigma, j)]}*{mono}*y{j + 1}")
        return "SymPoly(" + " + ".join(terms) + ")"


def _order_key(n, d):
    idx = monomial_index(n, d)
    return lambda key: (idx[key[0]], key[1])


# -- scalar forms -----------------------------------------------------------

Form = Dict[MultiIndex, Fraction]


def form_mul(a: Form, b: Form) -> Form:
    out: Form = {}
    for sa, ca in a.items():
        for sb, cb in b.items():
            s = tuple(x + y for x, y in zip(sa, sb))
            out[s] = out.get(s, 0) + ca * cb
    return {s: c for s, c in out.items() if c}


def linear_form(coeffs: Sequence) -> Form:
    n = len(coeffs)
    return {tuple(int(i == j) for j in range(n)): Fraction(c) for i, c in enumerate(coeffs) if c}


def times_form(p: SymPoly, f: Form, degree: int) -> SymPoly:
    """Product of an N-valued polynomial with a scalar form of given degree."""
    out = {}
    for (sigma, j), c in p.coeffs.items():
        for tau, d in f.items():
            key = (tuple(x + y for x, y in zip(sigma, tau)), j)
            out[key] = out.get(key, 0) + c * d
    return SymPoly(p.n, p.m, p.degree + degree, out)


# -- evaluation and polarization ---------------------------------------------

def _power(l: Sequence[Fraction], sigma: MultiIndex) -> Fraction:
    out = Fraction(1)
    for x, e in zip(l, sigma):
        if e:
            out *= x ** e
    return out


def evaluate(p: SymPoly, l: Sequence) -> Tuple[Fraction, ...]:
    """Value of p at a point l of L, as a vector in N."""
    if len(l) != p.n:
        raise ratlin.DimensionError(f"point of length {len(l)} for polynomial in {p.n} variables")
    l = [Fraction(x) for x in l]
    out = [Fraction(0)] * p.m
    for (sigma, j), c in p.coeffs.items():
        out[j] += c * _power(l, sigma)
    return tuple(out)


@dataclass(frozen=True)
class HomLS:
    """Linear map from span(domain_basis) in L into S^d L* (x) N, by images of the basis."""

    domain_basis: Tuple[Tuple[Fraction, ...], ...]
    images: Tuple[SymPoly, ...]

    def __post_init__(self):
        if len(self.domain_basis) != len(self.images):
            raise ValueError("one image per domain basis vector is required")
        degrees = {im.degree for im in self.images}
        if len(degrees) > 1:
            raise ValueError(f"images of mixed degrees {sorted(degrees)}")

    def apply(self, coords: Sequence) -> SymPoly:
        """Image of sum(coords[a] * domain_basis[a])."""
        out = None
        for c, im in zip(coords, self.images):
            term = im * c
            out = term if out is None else out + term
        return out

    def is_zero(self) -> bool:
        return all(im.is_zero() for im in self.images)


def _standard_basis(n: int):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def polarize(p: SymPoly) -> HomLS:
    """(1/d) times the differential of p, as a map L -> S^{d-1} L* (x) N.

    ``polarize(p).images[i]`` has coefficient ``sigma_i/d * p_sigma`` on
    ``xi^(sigma - 1_i)``.
    """
    d = p.degree
    if d < 1:
        raise ValueError("polarization needs degree >= 1")
    images = []
    for i in range(p.n):
        coeffs = {}
        for (sigma, j), c in p.coeffs.items():
            if sigma[i]:
                lowered = sigma[:i] + (sigma[i] - 1,) + sigma[i + 1:]
                coeffs[(lowered, j)] = c * Fraction(sigma[i], d)
        images.append(SymPoly(p.n, p.m, d - 1, coeffs))
    return HomLS(_standard_basis(p.n), tuple(images))


def _basis_rows(sigma0) -> List[Tuple[Fraction, ...]]:
    if isinstance(sigma0, ratlin.Subspace):
        return list(sigma0.basis)
    return [ratlin.to_vector(v) for v in sigma0]


def restrict_polarization(q: SymPoly, sigma0) -> HomLS:
    """polarize(q) restricted to the given basis vectors (or Subspace) of L."""
    basis = _basis_rows(sigma0)
    if not basis:
        raise ValueError("restriction to the zero subspace")
    full = polarize(q)
    return HomLS(tuple(basis), tuple(full.apply(v) for v in basis))


def annihilator_power_basis(sigma0, ctx: Context) -> List[SymPoly]:
    """Basis of S^k Ann(Sigma0) (x) N: products of k annihilating linear forms."""
    basis = _basis_rows(sigma0)
    for v in basis:
        if len(v) != ctx.n:
            raise ratlin.DimensionError(f"vector of length {len(v)} is not in L = Q^{ctx.n}")
    if basis and ratlin.rank(basis, ctx.n) != len(basis):
        raise ValueError("Sigma0 basis vectors are linearly dependent")
    ann = ratlin.kernel_basis(basis, ctx.n) if basis else list(_standard_basis(ctx.n))
    forms = [linear_form(a) for a in ann]
    out = []
    for tau in monomials(len(forms), ctx.k):
        prod: Form = {(0,) * ctx.n: Fraction(1)}
        for f, e in zip(forms, tau):
            for _ in range(e):
                prod = form_mul(prod, f)
        for j in range(ctx.m):
            out.append(SymPoly(ctx.n, ctx.m, ctx.k, {(s, j): c for s, c in prod.items()}))
    return out


def reconstruct_generator(h: HomLS) -> Optional[SymPoly]:
    """The p with polarize(p) = h, if h is a polarization at all.

    The candidate is p(l) = h(l)(l), i.e. sum_i xi^i * h(e_i); it is accepted
    only if its polarization reproduces h exactly.
    """
    if not h.images:
        raise ValueError("empty homomorphism")
    first = h.images[0]
    n, m, d = first.n, first.m, first.degree
    basis = [ratlin.to_vector(v) for v in h.domain_basis]
    if len(basis) != n or ratlin.rank(basis, n) != n:
        raise ValueError("h must be given on a basis of all of L")
    cols = ratlin.transpose(basis, n)
    std_images = []
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        coords = ratlin.solve(cols, e, n)
        std_images.append(h.apply(coords))
    p = SymPoly(n, m, d + 1)
    for i, im in enumerate(std_images):
        p = p + times_form(im, linear_form([int(i == j) for j in range(n)]), 1)
    if list(polarize(p).images) != std_images:
        return None
    return p


# -- pullback and serialization -----------------------------------------------

def pullback(p: SymPoly, vectors: Sequence[Sequence]) -> SymPoly:
    """p composed with t |-> sum_a t_a vectors[a]: a polynomial in len(vectors) variables."""
    s = len(vectors)
    images = [linear_form([Fraction(v[i]) for v in vectors]) for i in range(p.n)]
    out: Dict = {}
    cache: Dict[MultiIndex, Form] = {}
    for (sigma, j), c in p.coeffs.items():
        prod = cache.get(sigma)
        if prod is None:
            prod = {(0,) * s: Fraction(1)}
            for i, e in enumerate(sigma):
                for _ in range(e):
                    prod = form_mul(prod, images[i])
            cache[sigma] = prod
        for tau, d in prod.items():
            out[(tau, j)] = out.get((tau, j), 0) + c * d
    return SymPoly(s, p.m, p.degree, out)


def sympoly_to_records(p: SymPoly) -> List[dict]:
    """Records (sigma, j, num, den) in basis order; j is 1-based."""
    rows = []
    for sigma, j in sorted(p.coeffs, key=_order_key(p.n, p.degree)):
        c = p.coeffs[(sigma, j)]
        rows.append({"sigma": list(sigma), "j": j + 1, "num": str(c.numerator), "den": str(c.denominator)})
    return rows


def sympoly_to_json(p: SymPoly) -> str:
    return json.dumps({"n": p.n, "m": p.m, "degree": p.degree, "terms": sympoly_to_records(p)},
                      sort_keys=True, separators=(",", ":"))


def sympoly_from_json(text: str) -> SymPoly:
    data = json.loads(text)
    return sympoly_from_dict(data)


def sympoly_from_dict(data: Mapping) -> SymPoly:
    coeffs = {}
    for t in data["terms"]:
        key = (tuple(int(x) for x in t["sigma"]), int(t["j"]) - 1)
        coeffs[key] = coeffs.get(key, 0) + Fraction(int(t["num"]), int(t["den"]))
    return SymPoly(int(data["n"]), int(data["m"]), int(data["degree"]), coeffs)


def basis_polys(ctx: Context, d: int) -> List[SymPoly]:
    """Monomial basis of S^d L* (x) N in flattened-coordinate order."""
    return [SymPoly(ctx.n, ctx.m, d, {(sigma, j): 1}) for sigma in monomials(ctx.n, d) for j in range(ctx.m)]
