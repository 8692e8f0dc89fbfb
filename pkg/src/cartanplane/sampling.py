"""Seeded, portable pseudo-randomness for property checks.

The generator is SplitMix64 (Steele, Lea and Flood 2014): a 64-bit state
advanced by the golden-ratio increment and finalized by two xor-shift-multiply
rounds.  It is tiny, has no platform dependence, and is trivial to reimplement
elsewhere, which keeps seeds portable.  Independent sub-streams are derived
with :meth:`Rng.fork`, which hashes the parent seed together with a label.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import ratlin
from .symalg import Context, SymPoly

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class Rng:
    """SplitMix64 stream."""

    __slots__ = ("seed", "state")

    def __init__(self, seed: int):
        if not isinstance(seed, int):
            raise TypeError("seed must be an int")
        self.seed = seed & MASK
        self.state = self.seed

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], by rejection (no modulo bias)."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % span

    def rational(self, bound: int = 3, max_den: int = 1) -> Fraction:
        den = self.randint(1, max_den) if max_den > 1 else 1
        return Fraction(self.randint(-bound, bound), den)

    def fork(self, *labels) -> "Rng":
        text = ":".join([str(self.seed)] + [str(x) for x in labels]).encode()
        return Rng(int.from_bytes(hashlib.sha256(text).digest()[:8], "little"))


def random_vector(rng: Rng, dim: int, bound: int = 3, max_den: int = 1) -> Tuple[Fraction, ...]:
    return tuple(rng.rational(bound, max_den) for _ in range(dim))


def random_subspace_basis(rng: Rng, n: int, s: int, bound: int = 3) -> List[Tuple[Fraction, ...]]:
    """s independent vectors of Q^n with small integer entries (rejection on rank deficiency)."""
    if not 0 <= s <= n:
        raise ValueError("need 0 <= s <= n")
    while True:
        vecs = [random_vector(rng, n, bound) for _ in range(s)]
        if s == 0 or ratlin.rank(vecs, n) == s:
            return vecs


def random_combination(rng: Rng, basis: Sequence[Sequence], dim: int, bound: int = 3) -> Tuple[Fraction, ...]:
    out = [Fraction(0)] * dim
    for b in basis:
        c = rng.randint(-bound, bound)
        if c:
            for i, x in enumerate(b):
                if x:
                    out[i] += c * x
    return tuple(out)


def random_sympoly(rng: Rng, ctx: Context, degree: int, bound: int = 3, max_den: int = 2) -> SymPoly:
    return SymPoly.from_vector(ctx.n, ctx.m, degree, random_vector(rng, ctx.sym_dim(degree), bound, max_den))


def random_integral_element(rng: Rng, ctx: Context, s: int):
    """A random lift of a random s-dimensional shadow, i.e. a point of I_s(C)."""
    from .grassmann import lift

    basis = random_subspace_basis(rng, ctx.n, s)
    return lift(ctx, basis, random_sympoly(rng, ctx, ctx.k))
