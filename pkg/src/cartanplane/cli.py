"""Command-line front end.

Exit status: 0 when every requested check passes, 1 on a failed check or a
falsification event, 2 on malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import ratlin
from .contactization import (contact_identities, kernel_condition_check, polar_frame,
                             random_points)
from .grassmann import (NoSolutionError, NotIntegralError, dim_report, fiber_representative,
                        is_horizontal, is_integral_element, is_isotropic, lift, shadow, verify_theorem1)
from .grid import GridBounds, run_grid
from .pdesing import ma_example
from .polar import (PolarSystem, dim_polar_formula, osculator_characterization, polar_report)
from .sampling import Rng, random_integral_element
from .serialize import InputError, dumps, loads, subspace_from_json, subspace_to_json, vectors
from .symalg import Context

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = 20240601
ENV_SEED = "CARTANPLANE_SEED"
ENV_SAMPLES = "CARTANPLANE_SAMPLES"
ENV_GRID = {"n_max": "CARTANPLANE_GRID_NMAX", "m_max": "CARTANPLANE_GRID_MMAX", "k_max": "CARTANPLANE_GRID_KMAX"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    s: Optional[int] = None
    seed: int = DEFAULT_SEED
    samples: int = 10
    input: Optional[str] = None
    output: Optional[str] = None
    format: str = "text"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"environment variable {name}={raw!r} is not an integer") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a 64-bit integer seed, got {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cartanplane",
                                     description="Exact computations on Cartan planes of jet spaces.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, ctx=True, s=False, seed=False, inp=False, samples=False):
        if ctx:
            p.add_argument("-n", type=_positive, required=not inp, help="dim L")
            p.add_argument("-m", type=_positive, required=not inp, help="dim N")
            p.add_argument("-k", type=_positive, required=not inp, help="jet order")
        if s:
            p.add_argument("-s", type=_nonneg, required=not inp, help="dimension of the integral element")
        if seed:
            p.add_argument("--seed", type=_seed, default=None, help=f"PRNG seed (env {ENV_SEED})")
        if samples:
            p.add_argument("--samples", type=_nonneg, default=None, help=f"sample count (env {ENV_SAMPLES})")
        if inp:
            p.add_argument("--input", "-i", help="JSON subspace file ('-' for stdin)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")

    common(sub.add_parser("dims", help="dimension formulas with rank cross-checks"), s=True, seed=True)
    common(sub.add_parser("check", help="membership tests on a serialized subspace"), ctx=False, inp=True)
    common(sub.add_parser("fiber", help="fiber representative of an integral element"), ctx=False, inp=True)
    common(sub.add_parser("verify-theorem1", help="stabilizer and transitivity on random shadows"),
           s=True, seed=True, samples=True)
    p = sub.add_parser("polar", help="tangent space, sharp map and polar plane")
    common(p, ctx=True, s=True, seed=True, inp=True)
    p = sub.add_parser("contactize", help="polar frame, brackets and pushforward identities (k=2)")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("-m", type=_positive, required=True)
    p.add_argument("--verify", action="store_true", help="compare with polar planes at sample points")
    p.add_argument("--points", type=_nonneg, default=50)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o")
    p = sub.add_parser("ma-example", help="Monge-Ampere versus quasi-linear non-equivalence")
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--c-values", type=_nonneg, default=20)
    p.add_argument("--lines", type=_nonneg, default=50)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o")
    p = sub.add_parser("grid", help="full property suite over the parameter grid")
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--samples", type=_nonneg, default=None)
    p.add_argument("--n-max", type=_positive, default=None)
    p.add_argument("--m-max", type=_positive, default=None)
    p.add_argument("--k-max", type=_positive, default=None)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o")
    return parser


# -- subcommands -------------------------------------------------------------------

def _ctx(args) -> Context:
    return Context(args.n, args.m, args.k)


def config_of(args) -> RunConfig:
    """The resolved run configuration, with environment defaults applied."""
    return RunConfig(
        subcommand=args.subcommand,
        n=getattr(args, "n", None), m=getattr(args, "m", None),
        k=getattr(args, "k", None), s=getattr(args, "s", None),
        seed=_seed_of(args),
        samples=_samples_of(args, 10),
        input=getattr(args, "input", None), output=args.output, format=args.format)


def _seed_of(args) -> int:
    seed = getattr(args, "seed", None)
    return seed if seed is not None else _env_int(ENV_SEED, DEFAULT_SEED)


def _samples_of(args, default: int) -> int:
    samples = getattr(args, "samples", None)
    return samples if samples is not None else _env_int(ENV_SAMPLES, default)


def _read_subspace(path: Optional[str]):
    if not path:
        raise UsageError("--input is required")
    if path == "-":
        text, source = sys.stdin.read(), "<stdin>"
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        source = path
    return subspace_from_json(loads(text, source), "$")


def _check_s(ctx: Context, s: int):
    if not 0 <= s <= ctx.n:
        raise UsageError(f"-s must lie in [0, {ctx.n}]")


def cmd_dims(args) -> Tuple[Dict, bool]:
    ctx = _ctx(args)
    _check_s(ctx, args.s)
    rep = dim_report(ctx, args.s)
    out = rep.as_dict()
    out["dim_P"] = {"FORMULA": dim_polar_formula(ctx, args.s)}
    ok = rep.ok
    if args.s >= 1:
        sigma = random_integral_element(Rng(_seed_of(args)).fork("dims"), ctx, args.s)
        ps = PolarSystem(sigma)
        out["dim_P"]["RANK"] = ps.polar_dim
        out["dim_Is"]["TANGENT_RANK"] = ps.tangent_dim
        ok = ok and ps.polar_dim == dim_polar_formula(ctx, args.s) and ps.tangent_dim == rep.dim_Is.formula
    out["dim_P"]["agree"] = out["dim_P"].get("RANK", out["dim_P"]["FORMULA"]) == out["dim_P"]["FORMULA"]
    out["ok"] = ok
    return out, ok


def cmd_check(args):
    sigma = _read_subspace(args.input)
    sh = shadow(sigma)
    out = {"n": sigma.ctx.n, "m": sigma.ctx.m, "k": sigma.ctx.k, "dim": sigma.dim, "shadow_dim": sh.dim,
           "horizontal": is_horizontal(sigma), "isotropic": is_isotropic(sigma),
           "integral_element": is_integral_element(sigma)}
    return out, out["integral_element"]


def cmd_fiber(args):
    sigma = _read_subspace(args.input)
    if not is_integral_element(sigma):
        return {"error": "NOT_INTEGRAL", "horizontal": is_horizontal(sigma), "isotropic": is_isotropic(sigma)}, False
    try:
        q = fiber_representative(sigma)
    except NoSolutionError as exc:
        return {"error": "NO_SOLUTION", "falsification": True, "certificate": subspace_to_json(exc.subspace)}, False
    roundtrip = lift(sigma.ctx, sigma.horizontal_parts(), q) == sigma
    return {"representative": q, "roundtrip": roundtrip}, roundtrip


def cmd_theorem1(args):
    ctx = _ctx(args)
    if not 1 <= args.s <= ctx.n:
        raise UsageError(f"-s must lie in [1, {ctx.n}]")
    rep = verify_theorem1(ctx, args.s, Rng(_seed_of(args)), _samples_of(args, 10))
    out = rep.as_dict()
    out["seed"] = _seed_of(args)
    return out, rep.ok


def cmd_polar(args):
    if args.input:
        sigma = _read_subspace(args.input)
        if not is_integral_element(sigma):
            raise UsageError("the input subspace is not horizontal and isotropic")
    else:
        if None in (args.n, args.m, args.k, args.s):
            raise UsageError("either --input or -n -m -k -s is required")
        ctx = _ctx(args)
        if not 1 <= args.s <= ctx.n:
            raise UsageError(f"-s must lie in [1, {ctx.n}]")
        sigma = random_integral_element(Rng(_seed_of(args)).fork("polar"), ctx, args.s)
    rep = polar_report(sigma, Rng(_seed_of(args)).fork("sharp"))
    ps = PolarSystem(sigma)
    basis = ps.kernel(ps.tangency_rows + ps.sharp_rows)
    out = rep.as_dict()
    out["sigma"] = subspace_to_json(sigma)
    out["polar_basis"] = [vectors(p.images) for p in basis]
    out["osculator"] = osculator_characterization(sigma).as_dict()
    return out, rep.ok


def cmd_contactize(args):
    if args.n < 2:
        raise UsageError("contactize needs n >= 2")
    rep = contact_identities(args.n, args.m)
    frame = polar_frame(args.n, args.m)
    out = rep.as_dict()
    out["frame"] = {label: {name: _poly_text(c, f.chart.names) for name, c in f.as_dict().items()}
                    for label, f in frame.items()}
    ok = rep.ok
    if args.verify:
        rng = Rng(_seed_of(args)).fork("contactize")
        pts = random_points(args.n, args.m, args.points, rng.fork("points"))
        kr = kernel_condition_check(args.n, args.m, pts, rng.fork("check"))
        out["kernel_check"] = kr.as_dict()
        ok = ok and kr.ok
    return out, ok


def _poly_text(p, names) -> str:
    parts = []
    for e, c in sorted(p.terms.items(), reverse=True):
        mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k)
        coef = str(c)
        parts.append(mono if mono and c == 1 else (f"-{mono}" if mono and c == -1 else
                                                   (f"{coef}*{mono}" if mono else coef)))
    return " + ".join(parts).replace("+ -", "- ") or "0"


def cmd_ma(args):
    seed = _seed_of(args)
    out = ma_example(Rng(seed), c_count=args.c_values, line_count=args.lines)
    out["seed"] = seed
    return out, out["verdict"] == "NOT_CONTACT_EQUIVALENT"


def cmd_grid(args):
    defaults = GridBounds()
    bounds = GridBounds(
        n_max=args.n_max or _env_int(ENV_GRID["n_max"], defaults.n_max),
        m_max=args.m_max or _env_int(ENV_GRID["m_max"], defaults.m_max),
        k_max=args.k_max or _env_int(ENV_GRID["k_max"], defaults.k_max))
    out = run_grid(bounds, _seed_of(args), _samples_of(args, 10), args.workers)
    return out, out["ok"]


COMMANDS = {
    "dims": cmd_dims,
    "check": cmd_check,
    "fiber": cmd_fiber,
    "verify-theorem1": cmd_theorem1,
    "polar": cmd_polar,
    "contactize": cmd_contactize,
    "ma-example": cmd_ma,
    "grid": cmd_grid,
}


# -- rendering ------------------------------------------------------------------------

def _text_lines(obj: Any, prefix: str = "") -> List[str]:
    from .serialize import jsonable

    obj = jsonable(obj)
    lines: List[str] = []

    def walk(x, path):
        if isinstance(x, dict) and set(x) == {"num", "den"}:
            lines.append(f"{path}: {x['num']}" + ("" if x["den"] == "1" else f"/{x['den']}"))
        elif isinstance(x, dict):
            for key in sorted(x):
                walk(x[key], f"{path}.{key}" if path else key)
        elif isinstance(x, list) and len(x) > 12:
            lines.append(f"{path}: [{len(x)} items]")
        elif isinstance(x, list):
            for i, v in enumerate(x):
                walk(v, f"{path}[{i}]")
        else:
            lines.append(f"{path}: {x}")

    walk(obj, prefix)
    return lines


def render(report: Dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    return "\n".join(_text_lines(report)) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        config = config_of(args)
        report, ok = COMMANDS[args.subcommand](args)
    except (InputError, UsageError) as exc:
        print(f"cartanplane {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotIntegralError, ratlin.DimensionError) as exc:
        print(f"cartanplane {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = dict(report, command=args.subcommand)
    text = render(report, config.format)
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    if not ok and isinstance(report.get("error"), str) and report.get("falsification"):
        print("FALSIFICATION EVENT: see certificate in the report", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
