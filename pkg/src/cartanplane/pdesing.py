"""Third-order scalar PDEs in two variables over a fixed second-order jet.

The Cartan plane is the n = 2, m = 1, k = 3 one: C = L + S^2 L*, spanned by
D_1, D_2, d/du_xx, d/du_xy, d/du_yy.  Jet coordinates are identified with
the monomial basis through Taylor normalization, d/du_sigma <-> xi^sigma /
sigma!, which is the identification under which every jet plane L_theta is
Omega-isotropic.

A horizontal line Sigma = span{l} is in the singularity equation when some
theta in E_theta has l in its jet plane and l is a root of the symbol at
theta.  Containment is linear in theta, so the candidates form an affine
family theta_0 + t kappa and the remaining two conditions become univariate
polynomials in t, handled by gcd and exact real root isolation.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from . import ratlin
from .grassmann import CartanSubspace, is_horizontal, is_integral_element
from .polar import PolarSystem
from .polynomial import Poly
from .symalg import Context, monomial_index
from .univariate import RealRoot, UPoly, gcd, isolate_real_roots

CTX = Context(2, 1, 3)
VARS = ("u_xxx", "u_xxy", "u_xyy", "u_yyy")
# exponent of (x, y) carried by each third-order coordinate, in VARS order
ORDERS = ((3, 0), (2, 1), (1, 2), (0, 3))
SECOND = ((2, 0), (1, 1), (0, 2))
SECOND_NAMES = ("u_xx", "u_xy", "u_yy")
DEFAULT_DEGREE_BUDGET = 24


class ParseError(ValueError):
    """Malformed PDE expression; ``col`` is the 1-based column of the offending token."""

    def __init__(self, msg: str, col: int):
        super().__init__(f"column {col}: {msg}")
        self.col = col


class Undecided(RuntimeError):
    """Elimination exceeded the degree budget."""

    def __init__(self, degree: int, budget: int):
        super().__init__(f"UNDECIDED: eliminant of degree {degree} exceeds budget {budget}")
        self.degree = degree
        self.budget = budget


@dataclass(frozen=True)
class FiberPoint3:
    u_xxx: Fraction = Fraction(0)
    u_xxy: Fraction = Fraction(0)
    u_xyy: Fraction = Fraction(0)
    u_yyy: Fraction = Fraction(0)

    @classmethod
    def of(cls, values: Sequence) -> "FiberPoint3":
        if len(values) != 4:
            raise ValueError("a third-order fiber point has 4 coordinates")
        return cls(*(Fraction(v) for v in values))

    def values(self) -> Tuple[Fraction, ...]:
        return (Fraction(self.u_xxx), Fraction(self.u_xxy), Fraction(self.u_xyy), Fraction(self.u_yyy))

    def by_order(self, order: Tuple[int, int]) -> Fraction:
        return self.values()[ORDERS.index(tuple(order))]


# -- parsing ----------------------------------------------------------------------

def _caret_to_power(text: str) -> Tuple[str, List[int]]:
    """Replace '^' by '**'; returns the new text and, per new column, the original column."""
    out, cols = [], []
    for i, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            cols.extend([i, i])
        else:
            out.append(ch)
            cols.append(i)
    cols.append(len(text))
    return "".join(out), cols


class _Builder:
    def __init__(self, cols: List[int]):
        self.cols = cols

    def fail(self, node, msg: str):
        off = getattr(node, "col_offset", 0)
        raise ParseError(msg, self.cols[min(off, len(self.cols) - 1)] + 1)

    def const(self, node) -> Fraction:
        value = self.build(node)
        if not value.is_constant():
            self.fail(node, "expected a constant")
        return value.constant_term()

    def build(self, node) -> Poly:
        if isinstance(node, ast.Expression):
            return self.build(node.body)
        if isinstance(node, ast.Name):
            if node.id not in VARS:
                self.fail(node, f"unknown variable {node.id!r}; expected one of {', '.join(VARS)}")
            return Poly.var(4, VARS.index(node.id))
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self.fail(node, f"only integer literals are allowed, got {node.value!r}")
            return Poly.const(4, node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = self.build(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = self.build(node.left)
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)
                        and not isinstance(exp.value, bool) and exp.value >= 0):
                    self.fail(exp, "exponents must be non-negative integer literals")
                return base ** exp.value
            left, right = self.build(node.left), self.build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                d = self.const(node.right)
                if not d:
                    self.fail(node.right, "division by zero")
                return left * (1 / d)
        self.fail(node, f"unsupported syntax {type(node).__name__}")


def parse_pde(text: str) -> Poly:
    """Polynomial in u_xxx, u_xxy, u_xyy, u_yyy from an expression string."""
    body = text.rstrip()
    lead = len(body) - len(body.lstrip())
    src, cols = _caret_to_power(body.lstrip())
    cols = [c + lead for c in cols]
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        # offset 0 means the input ended early
        off = exc.offset - 1 if exc.offset else len(src)
        raise ParseError(exc.msg, cols[min(off, len(cols) - 1)] + 1) from None
    return _Builder(cols).build(tree)


@dataclass(frozen=True)
class PDE3:
    poly: Poly
    text: str = ""

    def __post_init__(self):
        if self.poly.nvars != 4:
            raise ValueError("a PDE3 is a polynomial in the four third-order coordinates")
        if self.poly.is_zero():
            raise ValueError("F must not be identically zero")

    @classmethod
    def parse(cls, text: str) -> "PDE3":
        return cls(parse_pde(text), text.strip())

    @property
    def quasi_linear(self) -> bool:
        return self.poly.total_degree() <= 1

    def __call__(self, theta: FiberPoint3) -> Fraction:
        return Fraction(self.poly.evaluate(list(theta.values())))


MONGE_AMPERE = "u_xxy*u_yyy - u_xyy^2"
QUASI_LINEAR_CONTROL = "u_xxx + u_yyy"


# -- symbols and root counting -------------------------------------------------------

@dataclass(frozen=True)
class BinaryCubic:
    """c0 dx^3 + c1 dx^2 dy + c2 dx dy^2 + c3 dy^3."""

    coeffs: Tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        if len(self.coeffs) != 4:
            raise ValueError("a binary cubic has 4 coefficients")

    def __call__(self, dx, dy):
        return sum(c * dx ** (3 - i) * dy ** i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def symbol_at(pde: PDE3, theta: FiberPoint3) -> BinaryCubic:
    """Coefficient of dx^a dy^b is dF/du_sigma at theta, sigma = (a, b)."""
    vals = list(theta.values())
    return BinaryCubic(tuple(Fraction(pde.poly.diff(i).evaluate(vals)) for i in range(4)))


@dataclass
class CharacteristicRoots:
    """Real projective roots (dx : dy) of a binary cubic."""

    infinite: bool
    exact: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    intervals: List[Tuple[Fraction, Fraction]] = field(default_factory=list)

    @property
    def count(self) -> Optional[int]:
        return None if self.infinite else len(self.exact) + len(self.intervals)


def characteristic_shadow_count(q: BinaryCubic) -> CharacteristicRoots:
    """Roots at infinity (1:0) when c0 = 0, plus real roots x of q(x, 1) as (x:1).

    Irrational roots come with an isolating interval (lo, hi] for x.
    """
    if q.is_zero():
        return CharacteristicRoots(True)
    c0, c1, c2, c3 = q.coeffs
    out = CharacteristicRoots(False)
    if not c0:
        out.exact.append((Fraction(1), Fraction(0)))
    affine = UPoly((c3, c2, c1, c0))
    if affine.degree > 0:
        for r in isolate_real_roots(affine):
            if r.exact:
                out.exact.append((r.lo, Fraction(1)))
            else:
                out.intervals.append((r.lo, r.hi))
    return out


# -- jet planes -------------------------------------------------------------------------

def _sigma_factorial(sigma) -> int:
    out = 1
    for e in sigma:
        out *= factorial(e)
    return out


def cartan_vector(horizontal: Sequence, vertical_u: Sequence = (0, 0, 0)) -> Tuple[Fraction, ...]:
    """a D_1 + b D_2 + w_xx d/du_xx + w_xy d/du_xy + w_yy d/du_yy as a flat vector of C."""
    if len(horizontal) != 2 or len(vertical_u) != 3:
        raise ValueError("expected 2 horizontal and 3 vertical components")
    idx = monomial_index(2, 2)
    v = [Fraction(0)] * 3
    for sigma, w in zip(SECOND, vertical_u):
        v[idx[sigma]] = Fraction(w) / _sigma_factorial(sigma)
    return tuple(Fraction(x) for x in horizontal) + tuple(v)


def vertical_u_coords(vec: Sequence) -> Tuple[Fraction, ...]:
    """Inverse of :func:`cartan_vector` on the vertical part."""
    idx = monomial_index(2, 2)
    return tuple(Fraction(vec[2 + idx[sigma]]) * _sigma_factorial(sigma) for sigma in SECOND)


def jet_plane(theta: FiberPoint3) -> CartanSubspace:
    """span{D_i + sum_sigma theta_{sigma + 1_i} d/du_sigma : i = 1, 2}."""
    rows = []
    for i in range(2):
        unit = (1, 0) if i == 0 else (0, 1)
        w = [theta.by_order((s[0] + unit[0], s[1] + unit[1])) for s in SECOND]
        rows.append(cartan_vector(unit, w))
    return CartanSubspace(CTX, rows)


def line(horizontal: Sequence, vertical_u: Sequence = (0, 0, 0)) -> CartanSubspace:
    return CartanSubspace(CTX, [cartan_vector(horizontal, vertical_u)])


# -- singularity-equation membership -------------------------------------------------------

def _check_line(sigma: CartanSubspace):
    if sigma.ctx != CTX:
        raise ValueError("lines must live in the n=2, m=1, k=3 Cartan plane")
    if sigma.dim != 1 or not is_horizontal(sigma):
        raise ValueError("expected a horizontal line")


def containment_family(sigma: CartanSubspace) -> Tuple[Optional[Tuple[Fraction, ...]], List[Tuple[Fraction, ...]]]:
    """theta_0 and a kernel basis with span{l} inside jet_plane(theta_0 + span kernel)."""
    _check_line(sigma)
    vec = sigma.basis[0]
    a1, a2 = vec[0], vec[1]
    w = vertical_u_coords(vec)
    rows = []
    for s in SECOND:
        row = [Fraction(0)] * 4
        row[ORDERS.index((s[0] + 1, s[1]))] += a1
        row[ORDERS.index((s[0], s[1] + 1))] += a2
        rows.append(row)
    return ratlin.solve(rows, w, 4), ratlin.kernel_basis(rows, 4)


@dataclass
class Membership:
    """Outcome of the membership search.

    status is MEMBER (exact rational witness), MEMBER_IRRATIONAL (witnesses
    exist only at irrational parameters; intervals isolate them) or
    NOT_MEMBER.
    """

    status: str
    witness: Optional[FiberPoint3] = None
    base: Optional[Tuple[Fraction, ...]] = None
    direction: Optional[Tuple[Fraction, ...]] = None
    intervals: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    eliminant_degree: int = 0

    @property
    def is_member(self) -> bool:
        return self.status in ("MEMBER", "MEMBER_IRRATIONAL")


def _along(base, direction, t) -> FiberPoint3:
    return FiberPoint3.of([b + t * d for b, d in zip(base, direction)])


def singular_membership(sigma: CartanSubspace, pde: PDE3, degree_budget: int = DEFAULT_DEGREE_BUDGET) -> Membership:
    """Search for theta with F(theta) = 0, sigma in L_theta and q_theta(shadow sigma) = 0."""
    base, kernel = containment_family(sigma)
    if base is None:
        return Membership("NOT_MEMBER")
    if len(kernel) != 1:
        # only possible for a vanishing shadow, excluded by horizontality
        raise AssertionError("containment family is expected to be one-dimensional")
    direction = kernel[0]
    a1, a2 = sigma.basis[0][0], sigma.basis[0][1]
    t = UPoly.x()
    theta_t = [UPoly.const(b) + t * d for b, d in zip(base, direction)]
    f_t = UPoly._coerce(pde.poly.evaluate(theta_t))
    s_t = UPoly()
    for i, (ex, ey) in enumerate(ORDERS):
        s_t = s_t + UPoly._coerce(pde.poly.diff(i).evaluate(theta_t)) * (a1 ** ex * a2 ** ey)
    if f_t.is_zero() and s_t.is_zero():
        return Membership("MEMBER", _along(base, direction, 0), base, direction)
    g = gcd(f_t, s_t)
    if g.degree > degree_budget:
        raise Undecided(g.degree, degree_budget)
    if g.degree <= 0:
        return Membership("NOT_MEMBER", base=base, direction=direction, eliminant_degree=max(g.degree, 0))
    roots: List[RealRoot] = isolate_real_roots(g)
    exact = [r.lo for r in roots if r.exact]
    if exact:
        best = min(exact, key=lambda x: (abs(x), x))
        return Membership("MEMBER", _along(base, direction, best), base, direction, eliminant_degree=g.degree)
    if roots:
        return Membership("MEMBER_IRRATIONAL", None, base, direction,
                          [(r.lo, r.hi) for r in roots], g.degree)
    return Membership("NOT_MEMBER", base=base, direction=direction, eliminant_degree=g.degree)


@dataclass
class WitnessCheck:
    on_equation: bool
    line_in_jet_plane: bool
    characteristic: bool
    jet_plane_integral: bool

    @property
    def ok(self) -> bool:
        return self.on_equation and self.line_in_jet_plane and self.characteristic and self.jet_plane_integral

    def as_dict(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def verify_witness(sigma: CartanSubspace, pde: PDE3, theta: FiberPoint3) -> WitnessCheck:
    """Re-check conditions (i)-(iii) from scratch."""
    _check_line(sigma)
    plane = jet_plane(theta)
    vec = sigma.basis[0]
    return WitnessCheck(
        on_equation=pde(theta) == 0,
        line_in_jet_plane=plane.contains(sigma),
        characteristic=symbol_at(pde, theta)(vec[0], vec[1]) == 0,
        jet_plane_integral=is_integral_element(plane) and plane.dim == 2,
    )


# -- restricted polar dimension -------------------------------------------------------------

@dataclass
class PolarBounds:
    lower_bound: int
    upper_bound: Optional[int]
    pencil_in_polar_plane: bool = False
    pencil_symbol: Tuple[str, ...] = ()
    characteristic_count: Optional[int] = None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def polar_dim_on_singularity(pde: PDE3, sigma: CartanSubspace, theta: FiberPoint3) -> PolarBounds:
    """Lower bound from the in-plane pencil, upper bound from a constant symbol.

    The pencil l + t l' (l' completing l to a basis of L_theta) stays in the
    singularity equation identically in t when q_theta vanishes on the whole
    pencil; its tangent hom l -> l' is checked to lie in the polar plane of
    span{l}.  For quasi-linear F every polar curve through sigma is tangent
    to P(L_theta), which meets the singularity equation in finitely many
    points whenever the constant symbol is nonzero, forcing dimension 0.
    """
    _check_line(sigma)
    if not verify_witness(sigma, pde, theta).ok:
        raise ValueError("theta is not a verified witness for sigma")
    plane = jet_plane(theta)
    vec = sigma.basis[0]
    other = next(b for b in plane.basis if any(sigma.space.reduce(b)))
    q = symbol_at(pde, theta)
    t = UPoly.x()
    pencil = q(UPoly.const(vec[0]) + t * other[0], UPoly.const(vec[1]) + t * other[1])
    pencil = UPoly._coerce(pencil)

    ps = PolarSystem(sigma)
    polar = ratlin.Subspace(CTX.cartan_dim, [p.images[0] for p in ps.kernel(ps.tangency_rows + ps.sharp_rows)])
    in_polar = polar.contains_vector(sigma.space.reduce(other))
    lower = 1 if pencil.is_zero() and in_polar else 0

    upper = None
    count = None
    if pde.quasi_linear:
        roots = characteristic_shadow_count(q)
        count = roots.count
        if not roots.infinite:
            upper = 0
    return PolarBounds(lower, upper, in_polar, tuple(str(c) for c in pencil.coeffs), count)


# -- the end-to-end driver ---------------------------------------------------------------

def _rat(x: Fraction) -> Dict[str, str]:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _distinct_rationals(rng, count: int, bound: int = 9, max_den: int = 5) -> List[Fraction]:
    seen: List[Fraction] = []
    while len(seen) < count:
        x = rng.rational(bound, max_den)
        if x not in seen:
            seen.append(x)
    return seen


def ma_example(rng, c_count: int = 20, line_count: int = 50, control_count: int = 10) -> dict:
    """Monge-Ampere versus a quasi-linear control; returns a JSON-ready report."""
    ma = PDE3.parse(MONGE_AMPERE)
    ql = PDE3.parse(QUASI_LINEAR_CONTROL)

    # (a) the witness family (c, 0, 0, 0)
    family = []
    for c in _distinct_rationals(rng.fork("c"), c_count):
        theta = FiberPoint3.of([c, 0, 0, 0])
        family.append({"c": _rat(c), "on_equation": ma(theta) == 0, "symbol_zero": symbol_at(ma, theta).is_zero(),
                       "jet_plane_integral": is_integral_element(jet_plane(theta))})
    a_ok = all(r["on_equation"] and r["symbol_zero"] and r["jet_plane_integral"] for r in family)

    # (b), (c) lines D_1 + a D_2 + c d/du_xx of P(D)
    lines = []
    lrng = rng.fork("lines")
    for _ in range(line_count):
        a, c = lrng.rational(9, 5), lrng.rational(9, 5)
        sigma = line((1, a), (c, 0, 0))
        mem = singular_membership(sigma, ma)
        rec = {"a": _rat(a), "c": _rat(c), "status": mem.status}
        if mem.witness is not None:
            chk = verify_witness(sigma, ma, mem.witness)
            bounds = polar_dim_on_singularity(ma, sigma, mem.witness)
            rec.update(witness=[_rat(x) for x in mem.witness.values()],
                       witness_is_c000=mem.witness == FiberPoint3.of([c, 0, 0, 0]),
                       verified=chk.ok, lower_bound=bounds.lower_bound)
        lines.append(rec)
    b_ok = all(r["status"] == "MEMBER" and r.get("verified") for r in lines)
    c_ok = b_ok and all(r["lower_bound"] >= 1 for r in lines)

    # (d) the quasi-linear control
    crng = rng.fork("control")
    symbols_constant = True
    q0 = symbol_at(ql, FiberPoint3())
    for _ in range(10):
        theta = FiberPoint3.of([crng.rational(9, 5) for _ in range(4)])
        symbols_constant &= symbol_at(ql, theta) == q0
    roots = characteristic_shadow_count(q0)
    control = []
    for _ in range(control_count):
        x, y = roots.exact[0]
        w = [crng.rational(9, 5) for _ in range(3)]
        sigma = line((x, y), w)
        mem = singular_membership(sigma, ql)
        rec = {"shadow": [_rat(x), _rat(y)], "vertical": [_rat(v) for v in w], "status": mem.status}
        if mem.witness is not None:
            bounds = polar_dim_on_singularity(ql, sigma, mem.witness)
            rec.update(witness=[_rat(v) for v in mem.witness.values()],
                       verified=verify_witness(sigma, ql, mem.witness).ok,
                       upper_bound=bounds.upper_bound, lower_bound=bounds.lower_bound)
        control.append(rec)
    off_root = singular_membership(line((1, 1)), ql)
    d_ok = (ql.quasi_linear and symbols_constant and roots.count is not None
            and all(r["status"] == "MEMBER" and r.get("verified") and r.get("upper_bound") == 0 for r in control)
            and not off_root.is_member)

    ma_lower = min((r["lower_bound"] for r in lines if "lower_bound" in r), default=0)
    ql_upper = max((r["upper_bound"] for r in control if r.get("upper_bound") is not None), default=None)
    verdict = "NOT_CONTACT_EQUIVALENT" if (a_ok and b_ok and c_ok and d_ok and ql_upper == 0 and ma_lower >= 1) \
        else "INCONCLUSIVE"
    return {
        "equation": MONGE_AMPERE,
        "control": QUASI_LINEAR_CONTROL,
        "witness_family": {"checked": len(family), "ok": a_ok, "samples": family},
        "lines": {"checked": len(lines), "members": sum(r["status"] == "MEMBER" for r in lines),
                  "ok": b_ok, "samples": lines},
        "lower_bound": {"value": ma_lower, "ok": c_ok},
        "upper_bound": {"value": ql_upper, "quasi_linear": ql.quasi_linear, "symbol_constant": symbols_constant,
                        "characteristic_directions": roots.count,
                        "off_root_line_member": off_root.is_member, "ok": d_ok, "samples": control},
        "verdict": verdict,
    }
