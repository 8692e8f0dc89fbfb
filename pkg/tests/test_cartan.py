from __future__ import annotations


import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanplane import ratlin
from cartanplane.cartan import (CartanVector, ContextMismatch, coordinate_frame, flat, horizontal_subspace,
                                omega, omega_flat, omega_operator, omega_orthogonal)
from cartanplane.sampling import Rng, random_sympoly, random_vector
from cartanplane.symalg import Context, SymPoly

contexts = st.builds(Context, st.integers(1, 4), st.integers(1, 2), st.integers(1, 4))


def random_cartan(rng, ctx):
    return CartanVector.make(ctx, random_vector(rng, ctx.n), random_sympoly(rng, ctx, ctx.k - 1))


def test_omega_pairs_horizontal_with_vertical():
    ctx = Context(3, 1, 2)
    e1 = CartanVector.make(ctx, [1, 0, 0])
    xi1 = CartanVector.make(ctx, vertical=SymPoly.monomial((1, 0, 0)))
    xi2 = CartanVector.make(ctx, vertical=SymPoly.monomial((0, 1, 0)))
    assert omega(e1, xi1).to_vector() == (1,)
    assert omega(xi1, e1).to_vector() == (-1,)
    assert omega(e1, xi2).is_zero()


def test_omega_vanishes_for_first_order():
    ctx = Context(2, 1, 1)
    for v in coordinate_frame(ctx):
        for w in coordinate_frame(ctx):
            assert omega(v, w).is_zero()


def test_context_mismatch():
    v = CartanVector.make(Context(2, 1, 2), [1, 0])
    w = CartanVector.make(Context(3, 1, 2), [1, 0, 0])
    with pytest.raises(ContextMismatch):
        omega(v, w)
    with pytest.raises(ContextMismatch):
        CartanVector.make(Context(2, 1, 2), [1, 0, 0])


def test_horizontal_and_vertical_summands_are_lagrangian_like():
    ctx = Context(3, 2, 3)
    frame = [f.to_flat() for f in coordinate_frame(ctx)]
    hor, ver = frame[:ctx.n], frame[ctx.n:]
    for group in (hor, ver):
        for v in group:
            for w in group:
                assert not any(omega_flat(ctx, v, w))
    L = horizontal_subspace(ctx)
    assert omega_orthogonal(ctx, L) == L


@settings(max_examples=60, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_antisymmetry_and_bilinearity(ctx, seed):
    rng = Rng(seed)
    u, v, w = (random_cartan(rng, ctx) for _ in range(3))
    a = rng.rational(4, 3)
    assert omega(v, w) == -omega(w, v)
    assert omega(v, v).is_zero()
    sum_vu = CartanVector.from_flat(ctx, [x + a * y for x, y in zip(v.to_flat(), u.to_flat())])
    assert omega(sum_vu, w) == omega(v, w) + omega(u, w) * a


@settings(max_examples=60, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_flat_table_agrees_with_direct_definition(ctx, seed):
    rng = Rng(seed)
    v, w = random_cartan(rng, ctx), random_cartan(rng, ctx)
    direct = omega(v, w).to_vector()
    assert omega_flat(ctx, v.to_flat(), w.to_flat()) == direct
    assert tuple(ratlin.mat_vec(omega_operator(ctx, v.to_flat()), w.to_flat())) == direct


@settings(max_examples=40, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_flat_round_trip(ctx, seed):
    v = random_cartan(Rng(seed), ctx)
    assert CartanVector.from_flat(ctx, v.to_flat()) == v
    assert flat(ctx, v.horizontal, v.vertical) == v.to_flat()
    assert len(v.to_flat()) == ctx.cartan_dim
