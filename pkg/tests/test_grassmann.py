from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanplane import grassmann, ratlin
from cartanplane.grassmann import (CartanSubspace, IsotropicFlag, NoSolutionError, NotIntegralError, act,
                                   check_sample, dim_Is_formula, dim_report, fiber_dim_formula,
                                   fiber_representative, graph_of, graph_of_hom, is_horizontal,
                                   is_integral_element, is_isotropic, lift, shadow, stabilizer,
                                   verify_theorem1)
from cartanplane.sampling import Rng, random_integral_element, random_subspace_basis, random_sympoly
from cartanplane.symalg import Context, SymPoly, annihilator_power_basis

contexts = st.builds(Context, st.integers(2, 4), st.integers(1, 2), st.integers(2, 4))


def test_worked_example_dimensions():
    ctx = Context(3, 1, 2)
    assert dim_Is_formula(ctx, 3) == 6
    assert dim_Is_formula(ctx, 2) == 7
    for s in (2, 3):
        assert dim_report(ctx, s).ok


def test_vertical_line_is_not_horizontal():
    ctx = Context(2, 1, 2)
    sigma = CartanSubspace(ctx, [[0, 0, 1, 0]])
    assert not is_horizontal(sigma)
    assert is_isotropic(sigma)
    assert not is_integral_element(sigma)
    with pytest.raises(NotIntegralError):
        fiber_representative(sigma)


def test_non_isotropic_graph():
    ctx = Context(2, 1, 2)
    # e1 + xi^2 and e2: Omega(e1 + xi^2, e2) = -xi^2(e2) = -1
    sigma = CartanSubspace(ctx, [[1, 0, 0, 1], [0, 1, 0, 0]])
    assert is_horizontal(sigma) and not is_isotropic(sigma)


def test_flag_validation():
    ctx = Context(2, 1, 2)
    p = SymPoly.monomial((1, 1))
    big = graph_of(ctx, p)
    small = lift(ctx, [[1, 1]], p)
    IsotropicFlag(small, big)
    with pytest.raises(ValueError):
        IsotropicFlag(lift(ctx, [[1, 1]], SymPoly.monomial((2, 0))), big)


def test_no_solution_path_is_reported(monkeypatch):
    ctx = Context(2, 1, 2)
    sigma = graph_of(ctx, SymPoly.monomial((2, 0)))
    monkeypatch.setattr(grassmann.ratlin, "solve", lambda *a, **k: None)
    with pytest.raises(NoSolutionError) as info:
        fiber_representative(sigma)
    assert info.value.subspace == sigma
    cert = check_sample(ctx, [[1, 0]], Rng(1))
    assert not cert.transitive and cert.note == "NO_SOLUTION" and not cert.ok


def test_shadow_of_graph_is_whole_base():
    ctx = Context(3, 2, 3)
    sigma = graph_of(ctx, random_sympoly(Rng(3), ctx, 3))
    assert shadow(sigma) == ratlin.Subspace.full(3)


@settings(max_examples=40, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_graphs_are_integral(ctx, seed):
    assert is_integral_element(graph_of(ctx, random_sympoly(Rng(seed), ctx, ctx.k)))


@settings(max_examples=40, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_non_polarization_graphs_fail_isotropy(ctx, seed):
    """A graph of a random non-symmetric hom is not isotropic (checked only when it is not a polarization)."""
    rng = Rng(seed)
    images = [random_sympoly(rng, ctx, ctx.k - 1) for _ in range(ctx.n)]
    from cartanplane.symalg import HomLS, reconstruct_generator

    h = HomLS(tuple(tuple(int(i == j) for j in range(ctx.n)) for i in range(ctx.n)), tuple(images))
    integral = is_integral_element(graph_of_hom(ctx, images))
    assert integral == (reconstruct_generator(h) is not None)


@settings(max_examples=30, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_stabilizer_equals_annihilator_power(ctx, seed):
    rng = Rng(seed)
    s = rng.randint(1, ctx.n)
    basis = random_subspace_basis(rng, ctx.n, s)
    ann = ratlin.Subspace(ctx.sym_dim(ctx.k), [q.to_vector() for q in annihilator_power_basis(basis, ctx)])
    stab = stabilizer(ctx, basis)
    assert stab == ann
    assert ctx.sym_dim(ctx.k) - stab.dim == fiber_dim_formula(ctx, s)


@settings(max_examples=30, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_action_and_representative(ctx, seed):
    rng = Rng(seed)
    s = rng.randint(1, ctx.n)
    sigma = random_integral_element(rng, ctx, s)
    q = fiber_representative(sigma)
    assert lift(ctx, sigma.horizontal_parts(), q) == sigma
    moved = act(sigma, random_sympoly(rng, ctx, ctx.k))
    assert is_integral_element(moved)
    assert shadow(moved) == shadow(sigma)
    # acting by the stabilizer fixes the point
    for a in annihilator_power_basis(sigma.horizontal_parts(), ctx):
        assert act(sigma, a) == sigma


@settings(max_examples=15, deadline=None)
@given(contexts, st.integers(0, 2**32))
def test_stabilizer_and_transitivity_samples(ctx, seed):
    rng = Rng(seed)
    s = rng.randint(1, ctx.n)
    report = verify_theorem1(ctx, s, rng, samples=2)
    assert report.ok, report.as_dict()


@pytest.mark.parametrize("n,m,k", [(2, 1, 2), (3, 2, 2), (3, 1, 3), (4, 1, 2)])
def test_dim_report_all_s(n, m, k):
    ctx = Context(n, m, k)
    for s in range(1, n + 1):
        rep = dim_report(ctx, s, random_subspace_basis(Rng(s), n, s))
        assert rep.ok, rep.as_dict()
        assert rep.fiber_dim.rank == (comb(n + k - 1, k) - comb(n - s + k - 1, k)) * m
