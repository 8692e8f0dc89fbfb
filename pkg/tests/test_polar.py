from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanplane import ratlin
from cartanplane.cartan import omega_flat
from cartanplane.grassmann import CartanSubspace, NotIntegralError, dim_Is_formula
from cartanplane.polar import (NotTangentError, PolarSystem, TangentHom, dim_polar_formula, osculator,
                               osculator_characterization, polar_plane, polar_report, sharp,
                               sharp_target_dim, tangent_space_Is)
from cartanplane.sampling import Rng, random_combination, random_integral_element
from cartanplane.symalg import Context

contexts = st.builds(Context, st.integers(2, 4), st.integers(1, 2), st.integers(2, 4))

# n=3, k=2, m=1; flat coordinates (e1, e2, e3, xi1, xi2, xi3)
CTX = Context(3, 1, 2)
SIGMA = CartanSubspace(CTX, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]])


def coordinate_hom(p2, p3, px):
    """p(e_a) = sum_b p2[a][b] xi^b + p3[a] xi^3 + px[a] e3."""
    images = tuple((0, 0, px[a], p2[a][0], p2[a][1], p3[a]) for a in range(2))
    return TangentHom(SIGMA, tuple(tuple(Fraction(x) for x in v) for v in images))


def test_sharp_in_coordinates_is_the_symmetric_block():
    p = coordinate_hom([[1, 2], [2, 3]], [5, 7], [11, 13])
    value = sharp(p)
    got = [[value.entries[a][b].to_vector() for b in range(2)] for a in range(2)]
    assert got == [[(1,), (2,)], [(2,), (3,)]]
    assert value.is_symmetric() and value.is_totally_symmetric()


def test_asymmetric_block_is_not_tangent():
    with pytest.raises(NotTangentError) as info:
        sharp(coordinate_hom([[1, 2], [0, 3]], [0, 0], [0, 0]))
    assert info.value.pair == (0, 1)


def test_worked_example_polar_plane():
    ps = PolarSystem(SIGMA)
    assert ps.tangent_dim == 7
    assert ps.polar_dim == 4
    assert ps.sharp_rank == 3
    allowed = ratlin.Subspace(6, [[0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1]]) + SIGMA.space
    perp = ratlin.Subspace(6, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
                               [0, 0, 0, 0, 0, 1]])
    for p in polar_plane(SIGMA):
        for v in p.images:
            assert allowed.contains(ratlin.Subspace(6, [v]))
        assert perp.contains(osculator(p))


def test_full_graph_worked_example():
    graph = CartanSubspace(CTX, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]])
    assert PolarSystem(graph).tangent_dim == 6


def test_non_integral_rejected():
    with pytest.raises(NotIntegralError):
        PolarSystem(CartanSubspace(CTX, [[0, 0, 0, 1, 0, 0]]))


@settings(max_examples=25, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_polar_formula_and_surjectivity(ctx, seed):
    rng = Rng(seed)
    s = rng.randint(1, ctx.n)
    rep = polar_report(random_integral_element(rng, ctx, s), rng)
    assert rep.ok, rep.as_dict()
    assert rep.polar_dim == dim_polar_formula(ctx, s)
    assert rep.sharp_rank == sharp_target_dim(ctx, s)
    assert rep.tangent_dim == dim_Is_formula(ctx, s)


@settings(max_examples=20, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_tangent_vectors_are_first_order_isotropic(ctx, seed):
    """Direct check: Omega(b_a, p b_b) + Omega(p b_a, b_b) = 0, independent of the row construction."""
    rng = Rng(seed)
    s = rng.randint(2, ctx.n)
    sigma = random_integral_element(rng, ctx, s)
    ps = PolarSystem(sigma)
    basis = [ps.unknowns_of(p) for p in tangent_space_Is(sigma)]
    p = ps.hom_from_unknowns(random_combination(rng, basis, ps.nunk))
    for a in range(s):
        for b in range(s):
            lhs = omega_flat(ctx, sigma.basis[a], p.images[b])
            rhs = omega_flat(ctx, p.images[a], sigma.basis[b])
            assert all(x + y == 0 for x, y in zip(lhs, rhs))


@settings(max_examples=20, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_polar_vectors_have_zero_sharp(ctx, seed):
    rng = Rng(seed)
    sigma = random_integral_element(rng, ctx, rng.randint(1, ctx.n))
    for p in polar_plane(sigma):
        assert sharp(p).is_zero()


@settings(max_examples=20, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_osculator_condition_implies_polar(ctx, seed):
    rng = Rng(seed)
    s = rng.randint(1, ctx.n)
    status = osculator_characterization(random_integral_element(rng, ctx, s))
    assert status.perp_inside_polar
    if ctx.k == 2 or s == ctx.n:
        assert status.equivalent


def test_osculator_condition_is_strictly_smaller_above_second_order():
    status = osculator_characterization(random_integral_element(Rng(5), Context(3, 1, 3), 1))
    assert status.perp_inside_polar and status.perp_dim < status.polar_dim
