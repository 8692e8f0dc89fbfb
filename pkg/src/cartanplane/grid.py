"""Property suite over the (n, m, k) parameter grid.

Each cell is independent and deterministic given the seed, so cells can be
run in worker processes and reassembled in key order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

from . import ratlin
from .grassmann import (dim_report, graph_of, is_integral_element, stabilizer)
from .polar import PolarSystem, dim_polar_formula, sharp_target_dim
from .sampling import (Rng, random_integral_element, random_subspace_basis, random_sympoly)
from .symalg import Context, annihilator_power_basis


@dataclass(frozen=True)
class GridBounds:
    n_min: int = 2
    n_max: int = 4
    m_min: int = 1
    m_max: int = 2
    k_min: int = 2
    k_max: int = 4

    def cells(self) -> List[Context]:
        return [Context(n, m, k)
                for n in range(self.n_min, self.n_max + 1)
                for m in range(self.m_min, self.m_max + 1)
                for k in range(self.k_min, self.k_max + 1)]


def cell_key(ctx: Context) -> str:
    return f"n{ctx.n}m{ctx.m}k{ctx.k}"


def run_cell(ctx: Context, seed: int, samples: int) -> Dict:
    """Dimension identities, stabilizer equality, polar formula and graph isotropy in one cell."""
    rng = Rng(seed).fork(cell_key(ctx))
    per_s = {}
    failures = 0
    for s in range(1, ctx.n + 1):
        dims = dim_report(ctx, s, random_subspace_basis(rng.fork("dims", s), ctx.n, s))
        stab_fail = polar_fail = 0
        for i in range(samples):
            sub = rng.fork("sample", s, i)
            basis = random_subspace_basis(sub, ctx.n, s)
            ann = ratlin.Subspace(ctx.sym_dim(ctx.k),
                                  [q.to_vector() for q in annihilator_power_basis(basis, ctx)])
            if stabilizer(ctx, basis) != ann:
                stab_fail += 1
            ps = PolarSystem(random_integral_element(sub, ctx, s))
            if (ps.polar_dim != dim_polar_formula(ctx, s) or ps.sharp_rank != sharp_target_dim(ctx, s)
                    or ps.tangent_dim != dims.dim_Is.formula):
                polar_fail += 1
        per_s[str(s)] = {"dims_ok": dims.ok, "stabilizer_failures": stab_fail, "polar_failures": polar_fail,
                         "dim_Is": dims.dim_Is.formula, "dim_P": dim_polar_formula(ctx, s)}
        failures += (not dims.ok) + stab_fail + polar_fail
    graph_fail = 0
    grng = rng.fork("graphs")
    for _ in range(samples):
        if not is_integral_element(graph_of(ctx, random_sympoly(grng, ctx, ctx.k))):
            graph_fail += 1
    failures += graph_fail
    return {"n": ctx.n, "m": ctx.m, "k": ctx.k, "samples": samples, "by_s": per_s,
            "graph_failures": graph_fail, "failures": failures, "ok": failures == 0}


def _run_cell_args(args):
    n, m, k, seed, samples = args
    return run_cell(Context(n, m, k), seed, samples)


def run_grid(bounds: GridBounds, seed: int, samples: int, workers: Optional[int] = None) -> Dict:
    cells = bounds.cells()
    jobs = [(c.n, c.m, c.k, seed, samples) for c in cells]
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell_args, jobs))
    else:
        results = [_run_cell_args(j) for j in jobs]
    out = {cell_key(c): r for c, r in zip(cells, results)}
    return {"seed": seed, "samples": samples, "bounds": bounds.__dict__,
            "cells": dict(sorted(out.items())), "ok": all(r["ok"] for r in results)}
