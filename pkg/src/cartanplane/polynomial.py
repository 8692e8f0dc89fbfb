"""Sparse multivariate polynomials with rational coefficients.

A :class:`Poly` lives in a fixed number of variables and maps exponent
tuples to nonzero Fractions.  Only what the vector-field and PDE code needs
is provided: ring operations, formal partial derivatives, evaluation and
composition.  :meth:`Poly.evaluate` works over any commutative ring whose
elements support ``+`` and ``*`` with Fractions, which is how univariate
restrictions along a line are produced.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

Exp = Tuple[int, ...]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exp, object]] = None):
        self.nvars = nvars
        clean: Dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"exponent {e} does not fit {nvars} variables")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable {i} out of range")
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): coeff})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"polynomials in {self.nvars} and {other.nvars} variables")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Fraction(other)
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == Poly.const(self.nvars, other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Poly(self.nvars, out)

    def evaluate(self, values: Sequence):
        """Substitute values[i] for variable i (numbers, Polys or any ring elements)."""
        if len(values) != self.nvars:
            raise ValueError(f"{len(values)} values for {self.nvars} variables")
        total = None
        powers: Dict[Tuple[int, int], object] = {}
        for e, c in sorted(self.terms.items()):
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = values[i] ** k
                    term = term * powers[key]
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """self(images[0], ..., images[n-1]); the result lives where the images live."""
        if not images:
            return Poly(0, {(): self.constant_term()})
        result = self.evaluate(images)
        if not isinstance(result, Poly):
            result = Poly.const(images[0].nvars, result)
        return result

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"


def variables(nvars: int) -> Tuple[Poly, ...]:
    return tuple(Poly.var(nvars, i) for i in range(nvars))


def poly_to_records(p: Poly, names: Optional[Iterable[str]] = None):
    """Sorted (exponent, num, den) records, optionally with variable names."""
    names = list(names) if names is not None else None
    out = []
    for e, c in sorted(p.terms.items(), reverse=True):
        rec = {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
        if names is not None:
            rec["monomial"] = "*".join(f"{names[i]}^{k}" if k > 1 else names[i]
                                       for i, k in enumerate(e) if k) or "1"
        out.append(rec)
    return out
