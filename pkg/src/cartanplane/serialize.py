"""JSON I/O: rationals as {"num", "den"} strings, subspaces as basis matrices."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, List, Sequence

from .grassmann import CartanSubspace
from .symalg import Context, SymPoly, sympoly_to_records


class InputError(ValueError):
    """Malformed input; ``where`` locates the problem (JSON path or line:column)."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


def rat(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def jsonable(obj: Any) -> Any:
    """Recursively convert Fractions, tuples and SymPolys into JSON-ready values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, SymPoly):
        return {"n": obj.n, "m": obj.m, "degree": obj.degree, "terms": sympoly_to_records(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def parse_rational(value: Any, where: str) -> Fraction:
    """Accepts ints, "p/q" strings and {"num", "den"} records; never floats."""
    try:
        if isinstance(value, bool):
            raise ValueError("booleans are not numbers")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            if any(ch in value for ch in ".eE"):
                raise ValueError("decimal notation is not exact; use p/q")
            return Fraction(value.strip())
        if isinstance(value, dict) and set(value) == {"num", "den"}:
            den = int(value["den"])
            if den == 0:
                raise ValueError("zero denominator")
            return Fraction(int(value["num"]), den)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(where, f"not a rational number ({exc})") from None
    raise InputError(where, f"not a rational number: {value!r}")


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _int_field(data: dict, key: str, where: str) -> int:
    if key not in data:
        raise InputError(f"{where}.{key}", "missing field")
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InputError(f"{where}.{key}", f"expected a positive integer, got {v!r}")
    return v


def subspace_from_json(data: Any, where: str = "$") -> CartanSubspace:
    """{"n", "m", "k", "basis": [[rational, ...], ...]} in the canonical frame of C."""
    if not isinstance(data, dict):
        raise InputError(where, "expected an object with n, m, k and basis")
    ctx = Context(_int_field(data, "n", where), _int_field(data, "m", where), _int_field(data, "k", where))
    rows = data.get("basis")
    if not isinstance(rows, list):
        raise InputError(f"{where}.basis", "expected a list of vectors")
    basis: List[List[Fraction]] = []
    for i, row in enumerate(rows):
        w = f"{where}.basis[{i}]"
        if not isinstance(row, list):
            raise InputError(w, "expected a list of coordinates")
        if len(row) != ctx.cartan_dim:
            raise InputError(w, f"expected {ctx.cartan_dim} coordinates, got {len(row)}")
        basis.append([parse_rational(x, f"{w}[{j}]") for j, x in enumerate(row)])
    try:
        return CartanSubspace(ctx, basis)
    except ValueError as exc:
        raise InputError(f"{where}.basis", str(exc)) from None


def subspace_to_json(sigma: CartanSubspace) -> dict:
    ctx = sigma.ctx
    return {"n": ctx.n, "m": ctx.m, "k": ctx.k, "basis": [[rat(x) for x in row] for row in sigma.basis]}


def vectors(rows: Sequence[Sequence]) -> list:
    return [[rat(x) for x in row] for row in rows]
