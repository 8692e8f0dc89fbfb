"""Exact linear algebra over the rationals.

Matrices are plain sequences of rows; entries may be ``int``, ``Fraction``
or anything else ``Fraction`` accepts exactly.  Elimination runs on
``gmpy2.mpq`` when available (same semantics, much faster) and every result
handed back to callers is a ``fractions.Fraction`` in lowest terms.

Pivoting is deterministic (first nonzero entry, scanning rows top-down), so
reduced echelon forms and kernel bases are reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _q
except ImportError:  # pragma: no cover
    _q = Fraction

Vector = Tuple[Fraction, ...]
Rows = Sequence[Sequence]


class DimensionError(ValueError):
    """Raised when ambient dimensions of operands do not agree."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    num = getattr(x, "numerator", None)
    if num is not None:
        return Fraction(int(num), int(x.denominator))
    return Fraction(x)


def to_vector(values: Iterable) -> Vector:
    return tuple(_frac(v) for v in values)


def _ncols(rows: Rows, ncols: Optional[int]) -> int:
    if ncols is not None:
        for r in rows:
            if len(r) != ncols:
                raise DimensionError(f"row of length {len(r)} in a matrix with {ncols} columns")
        return ncols
    if not rows:
        raise DimensionError("ncols is required for a matrix without rows")
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise DimensionError("ragged matrix")
    return width


_ZERO = _q(0)
_DIRECT = (int, Fraction, type(_ZERO))


def _load(rows: Rows) -> List[list]:
    out = []
    for r in rows:
        out.append([(_q(x) if isinstance(x, _DIRECT) else _q(_frac(x))) if x else _ZERO for x in r])
    return out


def _gauss_jordan(m: List[list], ncols: int, reduced: bool = True, stop_col: Optional[int] = None):
    """In-place elimination; returns pivot columns.

    With ``reduced`` the result is the reduced row echelon form (pivots are 1
    and are the only nonzero entries of their columns).  ``stop_col`` limits
    the pivot search to columns ``< stop_col`` (used for augmented systems).
    """
    pivots = []
    nrows = len(m)
    last = ncols if stop_col is None else stop_col
    r = 0
    for c in range(last):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = 1 / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(c, ncols) if prow[j]]
        targets = range(nrows) if reduced else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if not f:
                continue
            for j in nz:
                row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(rows: Rows, ncols: Optional[int] = None) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form: ``(nonzero rows, pivot columns)``."""
    width = _ncols(rows, ncols)
    m = _load(rows)
    pivots = _gauss_jordan(m, width)
    return [to_vector(m[i]) for i in range(len(pivots))], pivots


def rank(rows: Rows, ncols: Optional[int] = None) -> int:
    if not rows:
        return 0
    width = _ncols(rows, ncols)
    m = _load(rows)
    return len(_gauss_jordan(m, width, reduced=False))


def nested_ranks(first: Rows, second: Rows, ncols: int) -> Tuple[int, int]:
    """``(rank(first), rank(first + second))`` with a single pass over ``first``."""
    _ncols(first, ncols)
    _ncols(second, ncols)
    m = _load(first)
    pivots = _gauss_jordan(m, ncols, reduced=False)
    rest = _load(second)
    for row in rest:
        for i, pc in enumerate(pivots):
            f = row[pc]
            if f:
                prow = m[i]
                for j in range(pc, ncols):
                    if prow[j]:
                        row[j] -= f * prow[j]
    return len(pivots), len(pivots) + len(_gauss_jordan(rest, ncols, reduced=False))


def transpose(rows: Rows, ncols: Optional[int] = None) -> List[Vector]:
    width = _ncols(rows, ncols)
    return [tuple(_frac(r[j]) for r in rows) for j in range(width)]


def mat_vec(rows: Rows, v: Sequence) -> Vector:
    if rows and len(rows[0]) != len(v):
        raise DimensionError(f"matrix with {len(rows[0])} columns applied to vector of length {len(v)}")
    return tuple(sum((_frac(a) * _frac(b) for a, b in zip(r, v) if a and b), Fraction(0)) for r in rows)


def kernel_basis(rows: Rows, ncols: Optional[int] = None) -> List[Vector]:
    """Basis of ``{v : M v = 0}``, one vector per free column.

    The vectors are the standard RREF null-space basis: each has a 1 in its
    own free column and 0 in every other free column.
    """
    width = _ncols(rows, ncols)
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(width)) for i in range(width)]
    m = _load(rows)
    pivots = _gauss_jordan(m, width)
    pivot_set = set(pivots)
    basis = []
    for free in range(width):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * width
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            x = m[i][free]
            if x:
                v[pc] = -_frac(x)
        basis.append(tuple(v))
    return basis


def solve(rows: Rows, rhs: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """One exact solution of ``M x = rhs`` (free variables set to 0), or None."""
    width = _ncols(rows, ncols)
    if len(rhs) != len(rows):
        raise DimensionError(f"{len(rows)} equations but right-hand side of length {len(rhs)}")
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m = _load(aug)
    pivots = _gauss_jordan(m, width + 1, stop_col=width)
    for i in range(len(pivots), len(m)):
        if m[i][width]:
            return None
    x = [Fraction(0)] * width
    for i, pc in enumerate(pivots):
        x[pc] = _frac(m[i][width])
    return tuple(x)


class Subspace:
    """A linear subspace of Q^dim, stored by its reduced echelon basis.

    The echelon basis is canonical, but equality is still decided by mutual
    containment so that it never depends on how a basis was produced.
    """

    __slots__ = ("dim_ambient", "basis", "pivots")

    def __init__(self, dim_ambient: int, vectors: Iterable[Sequence] = ()):
        vectors = list(vectors)
        self.dim_ambient = dim_ambient
        if vectors:
            self.basis, self.pivots = rref(vectors, dim_ambient)
        else:
            self.basis, self.pivots = [], []
        self.basis = tuple(self.basis)
        self.pivots = tuple(self.pivots)

    @classmethod
    def full(cls, dim_ambient: int) -> "Subspace":
        return cls(dim_ambient, [[int(i == j) for j in range(dim_ambient)] for i in range(dim_ambient)])

    @classmethod
    def zero(cls, dim_ambient: int) -> "Subspace":
        return cls(dim_ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check(self, other: "Subspace"):
        if self.dim_ambient != other.dim_ambient:
            raise DimensionError(f"ambient dimensions differ: {self.dim_ambient} vs {other.dim_ambient}")

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.dim_ambient:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.dim_ambient}")
        return not any(self.reduce(v))

    def reduce(self, v: Sequence) -> Vector:
        """Coset representative of ``v`` with zeros in all pivot columns."""
        w = [_frac(x) for x in v]
        for row, pc in zip(self.basis, self.pivots):
            f = w[pc]
            if f:
                for j, x in enumerate(row):
                    if x:
                        w[j] -= f * x
        return tuple(w)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return rank(list(self.basis) + list(other.basis), self.dim_ambient) == self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.contains(other) and other.contains(self)

    def __hash__(self):
        return hash((self.dim_ambient, self.basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.dim_ambient, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of ``[A | -B]``."""
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace.zero(self.dim_ambient)
        a, b = self.basis, other.basis
        # columns: coefficients of A's basis, then of B's basis
        system = [[a[i][r] for i in range(len(a))] + [-b[i][r] for i in range(len(b))]
                  for r in range(self.dim_ambient)]
        vecs = []
        for coeffs in kernel_basis(system, len(a) + len(b)):
            vecs.append([sum((coeffs[i] * a[i][r] for i in range(len(a))), Fraction(0))
                         for r in range(self.dim_ambient)])
        return Subspace(self.dim_ambient, vecs)

    def annihilator(self) -> "Subspace":
        """Covectors vanishing on the subspace, in the dual coordinates."""
        return Subspace(self.dim_ambient, kernel_basis(list(self.basis), self.dim_ambient))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.dim_ambient})"


def span(vectors: Iterable[Sequence], dim_ambient: int) -> Subspace:
    return Subspace(dim_ambient, vectors)


def subspace_contains(a: Subspace, b: Subspace) -> bool:
    return a.contains(b)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)
