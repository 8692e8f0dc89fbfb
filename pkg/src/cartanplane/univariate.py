"""Univariate rational polynomials: Euclid, Sturm sequences, exact real roots.

Real roots are isolated by bisection on Sturm counts.  A rational root p/q
of an integer polynomial has q dividing the leading coefficient a, and two
distinct fractions with denominators at most |a| differ by at least 1/a^2,
so once an isolating interval is narrower than that, the best approximation
with denominator <= |a| of its midpoint is the only rational candidate.  It is
then confirmed or rejected by exact evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple


class UPoly:
    """Coefficients stored low degree first, trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "UPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @staticmethod
    def _coerce(other) -> "UPoly":
        return other if isinstance(other, UPoly) else UPoly((other,))

    def __add__(self, other) -> "UPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UPoly":
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UPoly":
        out, base = UPoly((1,)), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (UPoly, int, Fraction)):
            return self.coeffs == self._coerce(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UPoly":
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "UPoly") -> Tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lc = other.lead()
        for shift in range(len(q) - 1, -1, -1):
            c = rem[shift + other.degree] / lc
            q[shift] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[shift + i] -= c * b
        return UPoly(q), UPoly(rem[:other.degree] if other.degree > 0 else [])

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        lc = self.lead()
        return UPoly([c / lc for c in self.coeffs])

    def primitive_integer(self) -> "UPoly":
        """Integer multiple with coprime integer coefficients and positive leading term."""
        if self.is_zero():
            return self
        den = lcm(*[c.denominator for c in self.coeffs])
        ints = [int(c * den) for c in self.coeffs]
        from math import gcd
        g = 0
        for v in ints:
            g = gcd(g, v)
        sign = 1 if ints[-1] > 0 else -1
        return UPoly([Fraction(sign * v // g) for v in ints])

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"


def gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd (0 if both are 0)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree_part(p: UPoly) -> UPoly:
    if p.degree <= 0:
        return p.monic()
    return p.divmod(gcd(p, p.derivative()))[0].monic()


def sturm_sequence(p: UPoly) -> List[UPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-seq[-2].divmod(seq[-1])[1])
    seq.pop()
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _signs_at(seq: Sequence[UPoly], x) -> List[int]:
    if x == "+inf":
        return [_sign(q.lead()) for q in seq]
    if x == "-inf":
        return [_sign(q.lead()) * (-1) ** q.degree for q in seq]
    return [_sign(q(x)) for q in seq]


def count_roots(seq: Sequence[UPoly], lo, hi) -> int:
    """Distinct real roots in (lo, hi]; lo/hi may be '-inf'/'+inf'."""
    return _variations(_signs_at(seq, lo)) - _variations(_signs_at(seq, hi))


def count_real_roots(p: UPoly) -> int:
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    return count_roots(sturm_sequence(squarefree_part(p)), "-inf", "+inf")


def root_bound(p: UPoly) -> Fraction:
    """Cauchy bound: every root has absolute value < 1 + max |a_i / a_n|."""
    lc = p.lead()
    return 1 + max((abs(c / lc) for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RealRoot:
    """An exact rational root (lo == hi == value) or an isolating interval (lo, hi]."""

    lo: Fraction
    hi: Fraction
    exact: bool

    @property
    def value(self) -> Optional[Fraction]:
        return self.lo if self.exact else None


def isolate_real_roots(p: UPoly) -> List[RealRoot]:
    """Distinct real roots in increasing order, each exact or isolated."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    sq = squarefree_part(p)
    if sq.degree <= 0:
        return []
    seq = sturm_sequence(sq)
    b = root_bound(sq)
    out: List[RealRoot] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(_refine_rational(sq, seq, lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out, key=lambda r: r.lo)


def _refine_rational(sq: UPoly, seq, lo: Fraction, hi: Fraction) -> RealRoot:
    if sq(hi) == 0:
        return RealRoot(hi, hi, True)
    ip = sq.primitive_integer()
    a = abs(int(ip.lead()))
    target = Fraction(1, a * a)
    while hi - lo >= target:
        mid = (lo + hi) / 2
        if sq(mid) == 0:
            return RealRoot(mid, mid, True)
        if count_roots(seq, lo, mid):
            hi = mid
        else:
            lo = mid
    cand = ((lo + hi) / 2).limit_denominator(a)
    if lo < cand <= hi and sq(cand) == 0:
        return RealRoot(cand, cand, True)
    return RealRoot(lo, hi, False)


def rational_roots(p: UPoly) -> List[Fraction]:
    return [r.lo for r in isolate_real_roots(p) if r.exact]
