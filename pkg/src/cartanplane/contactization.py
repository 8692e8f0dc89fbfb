"""Polynomial vector fields on the chart of the projectivized Cartan plane (k = 2).

At k = 2, s = 1 a line of C is spanned by

    l = D_1 + b^a D_a + f^j_i d/du^j_i,       a = 2..n,

so (b^a, f^j_i) is a chart.  The polar plane of the line is spanned by

    X_a   = d/db^a   + f^j_a d/df^j_1,
    X^a_j = d/df^j_a - b^a d/df^j_1,

and after the change of chart b = y, f_a = v_a, f_1 = 2 v - v_a y^a these
become the Cartan frame d/dy^a + v^j_a d/dv^j, d/dv^j_a.  This module
implements the fields, their brackets and pushforwards as exact polynomial
identities, and checks the frame against the invariant polar plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from . import ratlin
from .cartan import embed_horizontal
from .grassmann import CartanSubspace
from .polar import PolarSystem, dim_polar_formula
from .polynomial import Poly
from .symalg import Context


class ChartMismatch(ValueError):
    pass


class NonInvertibleChange(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    names: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("chart variable names must be distinct")

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a coordinate of this chart") from None

    def var(self, name: str) -> Poly:
        return Poly.var(self.dim, self.index(name))


class PolyVectorField:
    """sum_i coeffs[i] d/dx_i with polynomial coefficients."""

    __slots__ = ("chart", "coeffs")

    def __init__(self, chart: Chart, coeffs: Sequence[Poly]):
        if len(coeffs) != chart.dim:
            raise ValueError(f"{len(coeffs)} coefficients for a chart of dimension {chart.dim}")
        for c in coeffs:
            if c.nvars != chart.dim:
                raise ValueError("coefficient lives in the wrong number of variables")
        self.chart = chart
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping[str, object]) -> "PolyVectorField":
        coeffs = [Poly(chart.dim) for _ in range(chart.dim)]
        for name, c in comps.items():
            i = chart.index(name)
            coeffs[i] = coeffs[i] + (c if isinstance(c, Poly) else Poly.const(chart.dim, c))
        return cls(chart, coeffs)

    @classmethod
    def zero(cls, chart: Chart) -> "PolyVectorField":
        return cls(chart, [Poly(chart.dim) for _ in range(chart.dim)])

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "PolyVectorField":
        return cls.from_dict(chart, {name: 1})

    def _check(self, other: "PolyVectorField"):
        if self.chart != other.chart:
            raise ChartMismatch(f"{self.chart.names} vs {other.chart.names}")

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check(other)
        return PolyVectorField(self.chart, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check(other)
        return PolyVectorField(self.chart, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "PolyVectorField":
        return PolyVectorField(self.chart, [-a for a in self.coeffs])

    def __mul__(self, scalar) -> "PolyVectorField":
        """Multiplication by a number or a polynomial function."""
        return PolyVectorField(self.chart, [a * scalar for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.chart == other.chart and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.chart, self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def apply(self, f: Poly) -> Poly:
        """The derivative X(f)."""
        out = Poly(self.chart.dim)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                d = f.diff(i)
                if not d.is_zero():
                    out = out + c * d
        return out

    def at(self, point: Sequence) -> Tuple[Fraction, ...]:
        point = [Fraction(x) for x in point]
        return tuple(Fraction(c.evaluate(point)) for c in self.coeffs)

    def as_dict(self) -> Dict[str, Poly]:
        return {name: c for name, c in zip(self.chart.names, self.coeffs) if not c.is_zero()}

    def __repr__(self):
        parts = [f"({c}) d/d{name}" for name, c in self.as_dict().items()]
        return "PolyVectorField(" + (" + ".join(parts) or "0") + ")"


def lie_bracket(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """[X, Y]_c = X(Y_c) - Y(X_c)."""
    x._check(y)
    return PolyVectorField(x.chart, [x.apply(yc) - y.apply(xc) for xc, yc in zip(x.coeffs, y.coeffs)])


# -- the two charts --------------------------------------------------------------

def _check_nm(n: int, m: int):
    if not isinstance(n, int) or n < 2:
        raise ValueError("the chart needs n >= 2")
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")


def b_name(a: int) -> str:
    return f"b{a}"


def f_name(j: int, i: int) -> str:
    return f"f{j}_{i}"


def polar_chart(n: int, m: int) -> Chart:
    """(b^2..b^n, f^j_1..f^j_n), j = 1..m."""
    _check_nm(n, m)
    return Chart(tuple(b_name(a) for a in range(2, n + 1))
                 + tuple(f_name(j, i) for j in range(1, m + 1) for i in range(1, n + 1)))


def cartan_chart(n: int, m: int) -> Chart:
    """(y^2..y^n, v^1..v^m, v^j_2..v^j_n)."""
    _check_nm(n, m)
    return Chart(tuple(f"y{a}" for a in range(2, n + 1))
                 + tuple(f"v{j}" for j in range(1, m + 1))
                 + tuple(f"v{j}_{a}" for j in range(1, m + 1) for a in range(2, n + 1)))


def frame_label_horizontal(a: int) -> str:
    return f"X_{a}"


def frame_label_vertical(a: int, j: int) -> str:
    return f"X^{a}_{j}"


def polar_frame(n: int, m: int) -> Dict[str, PolyVectorField]:
    """X_a (a = 2..n) then X^a_j, keyed by label, in that order."""
    ch = polar_chart(n, m)
    frame: Dict[str, PolyVectorField] = {}
    for a in range(2, n + 1):
        comps = {b_name(a): Poly.const(ch.dim, 1)}
        for j in range(1, m + 1):
            comps[f_name(j, 1)] = ch.var(f_name(j, a))
        frame[frame_label_horizontal(a)] = PolyVectorField.from_dict(ch, comps)
    for a in range(2, n + 1):
        for j in range(1, m + 1):
            frame[frame_label_vertical(a, j)] = PolyVectorField.from_dict(
                ch, {f_name(j, a): Poly.const(ch.dim, 1), f_name(j, 1): -ch.var(b_name(a))})
    return frame


# -- changes of chart -------------------------------------------------------------

@dataclass(frozen=True)
class ChartChange:
    """target coordinates as polynomials of the source ones, and the inverse."""

    source: Chart
    target: Chart
    forward: Tuple[Poly, ...]
    inverse: Tuple[Poly, ...]

    def verify_inverse(self):
        """Raise NonInvertibleChange unless both composites are the identity."""
        if len(self.forward) != self.target.dim or len(self.inverse) != self.source.dim:
            raise NonInvertibleChange("coordinate counts do not match the charts")
        ident_src = [Poly.var(self.source.dim, i) for i in range(self.source.dim)]
        ident_tgt = [Poly.var(self.target.dim, i) for i in range(self.target.dim)]
        if [g.compose(self.forward) for g in self.inverse] != ident_src:
            raise NonInvertibleChange("inverse after forward is not the identity")
        if [f.compose(self.inverse) for f in self.forward] != ident_tgt:
            raise NonInvertibleChange("forward after inverse is not the identity")


def contact_change(n: int, m: int) -> ChartChange:
    """b = y, f_a = v_a, f_1 = 2v - v_a y^a; inversely v = (f_1 + f_a b^a) / 2."""
    src, tgt = polar_chart(n, m), cartan_chart(n, m)
    forward = [src.var(b_name(a)) for a in range(2, n + 1)]
    for j in range(1, m + 1):
        v = src.var(f_name(j, 1))
        for a in range(2, n + 1):
            v = v + src.var(f_name(j, a)) * src.var(b_name(a))
        forward.append(v * Fraction(1, 2))
    forward += [src.var(f_name(j, a)) for j in range(1, m + 1) for a in range(2, n + 1)]
    inverse = []
    for name in src.names:
        if name.startswith("b"):
            inverse.append(tgt.var("y" + name[1:]))
        else:
            j, i = (int(x) for x in name[1:].split("_"))
            if i == 1:
                f1 = tgt.var(f"v{j}") * 2
                for a in range(2, n + 1):
                    f1 = f1 - tgt.var(f"v{j}_{a}") * tgt.var(f"y{a}")
                inverse.append(f1)
            else:
                inverse.append(tgt.var(f"v{j}_{i}"))
    return ChartChange(src, tgt, tuple(forward), tuple(inverse))


def pushforward(x: PolyVectorField, change: ChartChange) -> PolyVectorField:
    """Components X(new_c), rewritten in the new coordinates."""
    if x.chart != change.source:
        raise ChartMismatch("field does not live on the source chart of the change")
    change.verify_inverse()
    return PolyVectorField(change.target, [x.apply(g).compose(change.inverse) for g in change.forward])


# -- the identities ------------------------------------------------------------------

@dataclass
class IdentityCheck:
    name: str
    holds: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "detail": self.detail}


@dataclass
class ContactReport:
    n: int
    m: int
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "checks": [c.as_dict() for c in self.checks],
                "frame_size": {"FORMULA": dim_polar_formula(Context(self.n, self.m, 2), 1),
                               "RANK": len(polar_frame(self.n, self.m))},
                "ok": self.ok}


def contact_identities(n: int, m: int) -> ContactReport:
    """All bracket and pushforward identities as coefficient-wise polynomial equalities."""
    ch = polar_chart(n, m)
    frame = polar_frame(n, m)
    change = contact_change(n, m)
    tgt = change.target
    rep = ContactReport(n, m)
    try:
        change.verify_inverse()
        rep.checks.append(IdentityCheck("change_of_chart_invertible", True))
    except NonInvertibleChange as exc:
        rep.checks.append(IdentityCheck("change_of_chart_invertible", False, str(exc)))
        return rep
    d_f1 = {j: PolyVectorField.coordinate(ch, f_name(j, 1)) for j in range(1, m + 1)}
    d_v = {j: PolyVectorField.coordinate(tgt, f"v{j}") for j in range(1, m + 1)}
    hs = range(2, n + 1)
    for a in hs:
        for b in hs:
            for j in range(1, m + 1):
                br = lie_bracket(frame[frame_label_horizontal(a)], frame[frame_label_vertical(b, j)])
                want = d_f1[j] * (-2 if a == b else 0)
                rep.checks.append(IdentityCheck(f"[X_{a},X^{b}_{j}] = {-2 if a == b else 0} d/df{j}_1", br == want))
                pushed = pushforward(br, change)
                want_v = d_v[j] * (-1 if a == b else 0)
                rep.checks.append(IdentityCheck(f"push[X_{a},X^{b}_{j}] = {-1 if a == b else 0} d/dv{j}", pushed == want_v))
            zero = lie_bracket(frame[frame_label_horizontal(a)], frame[frame_label_horizontal(b)]).is_zero()
            rep.checks.append(IdentityCheck(f"[X_{a},X_{b}] = 0", zero))
    for a in hs:
        want = PolyVectorField.coordinate(tgt, f"y{a}")
        for j in range(1, m + 1):
            want = want + PolyVectorField.coordinate(tgt, f"v{j}") * tgt.var(f"v{j}_{a}")
        rep.checks.append(IdentityCheck(f"push X_{a} = d/dy{a} + v^j_{a} d/dv^j",
                                        pushforward(frame[frame_label_horizontal(a)], change) == want))
        for j in range(1, m + 1):
            want = PolyVectorField.coordinate(tgt, f"v{j}_{a}")
            rep.checks.append(IdentityCheck(f"push X^{a}_{j} = d/dv{j}_{a}",
                                            pushforward(frame[frame_label_vertical(a, j)], change) == want))
    return rep


# -- bridge to the invariant polar plane ------------------------------------------------

def line_at(n: int, m: int, point: Sequence) -> CartanSubspace:
    """span{D_1 + b^a D_a + f^j_i d/du^j_i} in the k = 2 Cartan plane.

    At k = 2 the vertical vector d/du^j_i is xi^i (x) y_j, whose flat index
    is i * m + j (0-based).
    """
    ctx = Context(n, m, 2)
    ch = polar_chart(n, m)
    if len(point) != ch.dim:
        raise ValueError(f"a point of this chart has {ch.dim} coordinates")
    return CartanSubspace(ctx, [chart_vector_to_cartan(n, m, point, horizontal_one=True)])


def chart_vector_to_cartan(n: int, m: int, comps: Sequence, horizontal_one: bool = False) -> Tuple[Fraction, ...]:
    """Chart components (B^a, F^j_i) as the vector B^a D_a + F^j_i d/du^j_i of C."""
    ctx = Context(n, m, 2)
    ch = polar_chart(n, m)
    comps = [Fraction(x) for x in comps]
    h = [Fraction(int(horizontal_one))] + comps[:n - 1]
    v = [Fraction(0)] * ctx.vertical_dim
    for j in range(1, m + 1):
        for i in range(1, n + 1):
            v[(i - 1) * m + (j - 1)] = comps[ch.index(f_name(j, i))]
    return embed_horizontal(ctx, h)[:n] + tuple(v)


def polar_condition(n: int, m: int, point: Sequence, vec: Sequence) -> bool:
    """F^j_1 = f^j_a B^a - b^a F^j_a for every j."""
    ch = polar_chart(n, m)
    p = [Fraction(x) for x in point]
    v = [Fraction(x) for x in vec]
    for j in range(1, m + 1):
        rhs = sum((p[ch.index(f_name(j, a))] * v[ch.index(b_name(a))]
                   - p[ch.index(b_name(a))] * v[ch.index(f_name(j, a))] for a in range(2, n + 1)), Fraction(0))
        if v[ch.index(f_name(j, 1))] != rhs:
            return False
    return True


@dataclass
class PointCheck:
    point: List[str]
    polar_dim: int
    frame_rank: int
    spans_equal: bool
    condition_consistent: bool

    @property
    def ok(self) -> bool:
        return self.spans_equal and self.condition_consistent


@dataclass
class KernelReport:
    n: int
    m: int
    points: List[PointCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        expected = dim_polar_formula(Context(self.n, self.m, 2), 1)
        return all(p.ok and p.polar_dim == expected == p.frame_rank for p in self.points)

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "points": len(self.points),
                "polar_dim": {"FORMULA": dim_polar_formula(Context(self.n, self.m, 2), 1),
                              "RANK": sorted({p.polar_dim for p in self.points})},
                "failures": [p.__dict__ for p in self.points if not p.ok], "ok": self.ok}


def check_point(n: int, m: int, point: Sequence, rng) -> PointCheck:
    """Frame at the point versus polar_plane of the corresponding line, plus the coordinate condition."""
    sigma = line_at(n, m, point)
    ps = PolarSystem(sigma)
    polar = ratlin.Subspace(sigma.ctx.cartan_dim, [p.images[0] for p in ps.kernel(ps.tangency_rows + ps.sharp_rows)])
    frame_vecs = [sigma.space.reduce(chart_vector_to_cartan(n, m, x.at(point))) for x in polar_frame(n, m).values()]
    frame = ratlin.Subspace(sigma.ctx.cartan_dim, frame_vecs)
    consistent = all(polar_condition(n, m, point, x.at(point)) for x in polar_frame(n, m).values())
    dim = len(polar_chart(n, m).names)
    for _ in range(4):
        vec = [rng.rational(3, 2) for _ in range(dim)]
        inside = polar.contains_vector(sigma.space.reduce(chart_vector_to_cartan(n, m, vec)))
        consistent &= inside == polar_condition(n, m, point, vec)
        forced = _force_condition(n, m, point, vec)
        consistent &= polar.contains_vector(sigma.space.reduce(chart_vector_to_cartan(n, m, forced)))
    return PointCheck([str(x) for x in point], polar.dim, frame.dim, polar == frame, consistent)


def _force_condition(n: int, m: int, point: Sequence, vec: Sequence) -> List[Fraction]:
    ch = polar_chart(n, m)
    v = [Fraction(x) for x in vec]
    for j in range(1, m + 1):
        v[ch.index(f_name(j, 1))] = sum((Fraction(point[ch.index(f_name(j, a))]) * v[ch.index(b_name(a))]
                                         - Fraction(point[ch.index(b_name(a))]) * v[ch.index(f_name(j, a))]
                                         for a in range(2, n + 1)), Fraction(0))
    return v


def kernel_condition_check(n: int, m: int, points: Sequence[Sequence], rng) -> KernelReport:
    rep = KernelReport(n, m)
    for i, pt in enumerate(points):
        rep.points.append(check_point(n, m, pt, rng.fork("point", i)))
    return rep


def random_points(n: int, m: int, count: int, rng) -> List[Tuple[Fraction, ...]]:
    dim = polar_chart(n, m).dim
    return [tuple(rng.rational(4, 3) for _ in range(dim)) for _ in range(count)]
