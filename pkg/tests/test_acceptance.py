"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

from __future__ import annotations

import json
import time
from math import comb

import pytest

from cartanplane import ratlin
from cartanplane.cli import main
from cartanplane.contactization import contact_identities, kernel_condition_check, random_points
from cartanplane.grassmann import dim_Is_formula, dim_report, graph_of, is_integral_element, stabilizer
from cartanplane.polar import PolarSystem, dim_polar_formula, sharp_target_dim
from cartanplane.sampling import Rng, random_integral_element, random_subspace_basis, random_sympoly
from cartanplane.symalg import Context, HomLS, annihilator_power_basis, reconstruct_generator

SEED = 20240601
GRID = [Context(n, m, k) for n in range(2, 5) for m in range(1, 3) for k in range(2, 5)]


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        return ok
    return emit


def test_criterion_1_dimension_grid(report):
    start = time.perf_counter()
    bad = []
    cases = 0
    for ctx in GRID:
        for s in range(1, ctx.n + 1):
            cases += 1
            rep = dim_report(ctx, s, random_subspace_basis(Rng(SEED).fork("c1", ctx.n, ctx.m, ctx.k, s), ctx.n, s))
            want_fiber = (comb(ctx.n + ctx.k - 1, ctx.k) - comb(ctx.n - s + ctx.k - 1, ctx.k)) * ctx.m
            want_is = s * (ctx.n - s) + want_fiber
            if not (rep.ok and rep.fiber_dim.rank == want_fiber and rep.dim_Is.rank == want_is):
                bad.append((ctx.n, ctx.m, ctx.k, s))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    assert report(1, "dimension formulas on the full grid", ok, f"{cases} cases, {elapsed:.1f}s, failures {bad}")


def test_criterion_2_stabilizer(report):
    failures = checked = 0
    for ctx in GRID:
        for s in range(1, ctx.n + 1):
            for i in range(100):
                basis = random_subspace_basis(Rng(SEED).fork("c2", ctx.n, ctx.m, ctx.k, s, i), ctx.n, s)
                ann = ratlin.Subspace(ctx.sym_dim(ctx.k),
                                      [q.to_vector() for q in annihilator_power_basis(basis, ctx)])
                checked += 1
                failures += stabilizer(ctx, basis) != ann
    assert report(2, "stabilizer equals S^k Ann (x) N", failures == 0, f"{checked} shadows, {failures} failures")


def test_criterion_3_worked_example(report):
    ctx = Context(3, 1, 2)
    sigma = random_integral_element(Rng(SEED).fork("c3"), ctx, 2)
    ps = PolarSystem(sigma)
    full = PolarSystem(random_integral_element(Rng(SEED).fork("c3", "full"), ctx, 3))
    got = (dim_report(ctx, 3).dim_Is.rank, full.tangent_dim, dim_report(ctx, 2).dim_Is.rank, ps.tangent_dim,
           ps.polar_dim, ps.sharp_rank)
    ok = got == (6, 6, 7, 7, 4, 3) and sharp_target_dim(ctx, 2) == 3
    assert report(3, "n=3 k=2 m=1 worked example", ok,
                  "dim I3={}/{}, dim I2={}/{}, dim P={}, sharp rank={}".format(*got))


def test_criterion_4_polar_formula(report):
    failures = checked = 0
    for ctx in GRID:
        for s in range(1, ctx.n + 1):
            for i in range(100):
                sigma = random_integral_element(Rng(SEED).fork("c4", ctx.n, ctx.m, ctx.k, s, i), ctx, s)
                ps = PolarSystem(sigma)
                checked += 1
                failures += (ps.polar_dim != dim_polar_formula(ctx, s)
                             or ps.sharp_rank != comb(s + ctx.k - 1, ctx.k) * ctx.m
                             or ps.tangent_dim != dim_Is_formula(ctx, s))
    assert report(4, "polar dimension and sharp surjectivity", failures == 0,
                  f"{checked} integral elements, {failures} failures")


def _mixed_partials_agree(images) -> bool:
    """Independent integrability test: d_j h(e_i) == d_i h(e_j) coefficient-wise."""
    n = len(images)

    def d(p, j):
        out = {}
        for (sigma, c_j), c in p.coeffs.items():
            if sigma[j]:
                key = (sigma[:j] + (sigma[j] - 1,) + sigma[j + 1:], c_j)
                out[key] = c * sigma[j]
        return out

    return all(d(images[i], j) == d(images[j], i) for i in range(n) for j in range(i + 1, n))


def test_criterion_5_graph_isotropy(report):
    rng = Rng(SEED).fork("c5")
    graph_fail = reject_fail = 0
    for i in range(500):
        ctx = GRID[i % len(GRID)]
        graph_fail += not is_integral_element(graph_of(ctx, random_sympoly(rng, ctx, ctx.k)))
    rejected = 0
    i = 0
    while rejected < 500:
        ctx = GRID[i % len(GRID)]
        i += 1
        images = tuple(random_sympoly(rng, ctx, ctx.k - 1) for _ in range(ctx.n))
        if _mixed_partials_agree(images):
            continue
        h = HomLS(tuple(tuple(int(a == b) for b in range(ctx.n)) for a in range(ctx.n)), images)
        reject_fail += reconstruct_generator(h) is not None
        rejected += 1
    ok = graph_fail == 0 and reject_fail == 0
    assert report(5, "graph isotropy and non-polarization rejection", ok,
                  f"500 graphs ({graph_fail} failures), 500 non-polarizations ({reject_fail} accepted)")


def test_criterion_6_contact_identities(report):
    bad = []
    for n in range(2, 5):
        for m in range(1, 3):
            if not contact_identities(n, m).ok:
                bad.append(("identities", n, m))
            rng = Rng(SEED).fork("c6", n, m)
            kr = kernel_condition_check(n, m, random_points(n, m, 50, rng.fork("points")), rng.fork("check"))
            if not (kr.ok and len(kr.points) == 50):
                bad.append(("frame", n, m))
    assert report(6, "bracket and pushforward identities, frame equals polar plane", not bad,
                  f"n<=4, m<=2, 50 points each, failures {bad}")


def test_criterion_7_ma_example(report, tmp_path, capsys):
    out = tmp_path / "ma.json"
    start = time.perf_counter()
    code = main(["ma-example", "--seed", str(SEED), "--format", "json", "-o", str(out)])
    elapsed = time.perf_counter() - start
    rep = json.loads(out.read_text())
    fam = rep["witness_family"]
    ok = (code == 0 and elapsed < 30
          and fam["checked"] == 20 and fam["ok"]
          and all(r["on_equation"] and r["symbol_zero"] for r in fam["samples"])
          and rep["lines"]["checked"] == 50
          and all(r["status"] == "MEMBER" and r["verified"] for r in rep["lines"]["samples"])
          and rep["lower_bound"]["value"] >= 1
          and rep["upper_bound"]["value"] == 0
          and rep["verdict"] == "NOT_CONTACT_EQUIVALENT")
    assert report(7, "Monge-Ampere end-to-end", ok, f"verdict {rep['verdict']}, {elapsed:.2f}s")


DETERMINISM_RUNS = [
    ["dims", "-n", "4", "-m", "2", "-k", "3", "-s", "2"],
    ["verify-theorem1", "-n", "3", "-m", "2", "-k", "3", "-s", "2", "--samples", "5"],
    ["polar", "-n", "4", "-m", "1", "-k", "3", "-s", "2"],
    ["contactize", "-n", "3", "-m", "2", "--verify", "--points", "10"],
    ["ma-example"],
    ["grid", "--samples", "2", "--n-max", "3", "--k-max", "3"],
]


def test_criterion_8_determinism(report, tmp_path):
    mismatched = []
    for i, argv in enumerate(DETERMINISM_RUNS):
        blobs = []
        for rep in range(2):
            path = tmp_path / f"run{i}_{rep}.json"
            code = main(argv + ["--seed", "77", "--format", "json", "-o", str(path)])
            assert code == 0, argv
            blobs.append(path.read_bytes())
        if blobs[0] != blobs[1]:
            mismatched.append(argv[0])
    assert report(8, "byte-identical structured reports", not mismatched,
                  f"{len(DETERMINISM_RUNS)} commands, mismatches {mismatched}")
