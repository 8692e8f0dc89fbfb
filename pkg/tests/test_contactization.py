from __future__ import annotations


import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanplane import ratlin
from cartanplane.contactization import (ChartChange, ChartMismatch, NonInvertibleChange, PolyVectorField,
                                        cartan_chart, chart_vector_to_cartan, check_point, contact_change,
                                        contact_identities, kernel_condition_check, lie_bracket, line_at,
                                        polar_chart, polar_condition, polar_frame, pushforward, random_points)
from cartanplane.polar import PolarSystem
from cartanplane.sampling import Rng

sizes = st.tuples(st.integers(2, 4), st.integers(1, 2))


def sympy_field(x: PolyVectorField, syms):
    comps = []
    for c in x.coeffs:
        expr = sympy.Integer(0)
        for e, coef in c.terms.items():
            term = sympy.Rational(coef.numerator, coef.denominator)
            for s, k in zip(syms, e):
                term *= s ** k
            expr += term
        comps.append(expr)
    return comps


def sympy_bracket(x, y, syms):
    return [sympy.expand(sum(x[i] * sympy.diff(y[c], syms[i]) - y[i] * sympy.diff(x[c], syms[i])
                             for i in range(len(syms)))) for c in range(len(syms))]


def test_chart_names():
    assert polar_chart(3, 1).names == ("b2", "b3", "f1_1", "f1_2", "f1_3")
    assert cartan_chart(3, 1).names == ("y2", "y3", "v1", "v1_2", "v1_3")
    with pytest.raises(ValueError):
        polar_chart(1, 1)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(2, 5) for m in range(1, 3)])
def test_contact_identities(n, m):
    rep = contact_identities(n, m)
    assert rep.ok, [c.name for c in rep.checks if not c.holds]
    assert len(polar_frame(n, m)) == rep.as_dict()["frame_size"]["FORMULA"]


@pytest.mark.parametrize("n,m", [(3, 1), (3, 2)])
def test_brackets_against_sympy(n, m):
    ch = polar_chart(n, m)
    syms = sympy.symbols(" ".join(ch.names))
    frame = polar_frame(n, m)
    labels = list(frame)
    for a in labels:
        for b in labels:
            mine = sympy_field(lie_bracket(frame[a], frame[b]), syms)
            ref = sympy_bracket(sympy_field(frame[a], syms), sympy_field(frame[b], syms), syms)
            assert [sympy.expand(x - y) for x, y in zip(mine, ref)] == [0] * len(syms)


def test_pushforward_against_sympy_chain_rule():
    n, m = 3, 1
    change = contact_change(n, m)
    src_syms = sympy.symbols(" ".join(change.source.names))
    tgt_syms = sympy.symbols(" ".join(change.target.names))
    fwd = sympy_field(PolyVectorField(change.source, list(change.forward)), src_syms)
    inv = dict(zip(src_syms, sympy_field(PolyVectorField(change.target, list(change.inverse)), tgt_syms)))
    for label, x in polar_frame(n, m).items():
        comps = sympy_field(x, src_syms)
        ref = [sympy.expand(sum(c * sympy.diff(g, s) for c, s in zip(comps, src_syms)).subs(inv, simultaneous=True))
               for g in fwd]
        mine = sympy_field(pushforward(x, change), tgt_syms)
        assert [sympy.expand(a - b) for a, b in zip(mine, ref)] == [0] * len(ref), label


def test_broken_change_is_rejected():
    good = contact_change(2, 1)
    bad = ChartChange(good.source, good.target, good.forward, tuple(p * 2 for p in good.inverse))
    with pytest.raises(NonInvertibleChange):
        bad.verify_inverse()
    with pytest.raises(NonInvertibleChange):
        pushforward(polar_frame(2, 1)["X_2"], bad)


def test_chart_mismatch():
    with pytest.raises(ChartMismatch):
        lie_bracket(polar_frame(2, 1)["X_2"], polar_frame(3, 1)["X_2"])
    with pytest.raises(ChartMismatch):
        pushforward(PolyVectorField.zero(cartan_chart(2, 1)), contact_change(2, 1))


@settings(max_examples=30, deadline=None)
@given(sizes, st.integers(0, 2**32))
def test_frame_spans_polar_plane(size, seed):
    n, m = size
    rng = Rng(seed)
    (pt,) = random_points(n, m, 1, rng)
    chk = check_point(n, m, pt, rng)
    assert chk.ok and chk.polar_dim == chk.frame_rank


@settings(max_examples=30, deadline=None)
@given(sizes, st.integers(0, 2**32))
def test_perturbed_frame_fails_span_equality(size, seed):
    """Flipping the sign of the correction term in X_a leaves the polar plane."""
    n, m = size
    rng = Rng(seed)
    (pt,) = random_points(n, m, 1, rng)
    ch = polar_chart(n, m)
    if not any(pt[ch.index(f"f1_{a}")] for a in range(2, n + 1)):
        return
    sigma = line_at(n, m, pt)
    ps = PolarSystem(sigma)
    polar = ratlin.Subspace(sigma.ctx.cartan_dim, [p.images[0] for p in ps.kernel(ps.tangency_rows + ps.sharp_rows)])
    frame = polar_frame(n, m)
    bad_vecs = []
    for label, x in frame.items():
        if label.startswith("X_"):
            f1 = PolyVectorField.coordinate(ch, "f1_1")
            x = x - f1 * (ch.var(f"f1_{label[2:]}") * 2)
        bad_vecs.append(sigma.space.reduce(chart_vector_to_cartan(n, m, x.at(pt))))
    assert ratlin.Subspace(sigma.ctx.cartan_dim, bad_vecs) != polar
    assert not all(polar_condition(n, m, pt, v) for v in
                   [x.at(pt) for x in [frame[f"X_{a}"] - PolyVectorField.coordinate(ch, "f1_1") * 1
                                       for a in range(2, n + 1)]])


def test_kernel_condition_report_deterministic():
    a = kernel_condition_check(3, 2, random_points(3, 2, 5, Rng(7)), Rng(8)).as_dict()
    b = kernel_condition_check(3, 2, random_points(3, 2, 5, Rng(7)), Rng(8)).as_dict()
    assert a == b and a["ok"]
