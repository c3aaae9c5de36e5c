"""Quadratic self-maps of the projective plane.

Fixed points with exact multiplicities, multiplier data (t, d) = trace and
determinant of I - Df, invariant lines, the affine normal form
(x, y) -> (x - P/L, y - Q/L) with marked fixed points, the auxiliary planar
vector field H = P dx + Q dy, and the correspondence with homogeneous
quadratic vector fields on C^3 (Kowalevski exponents).

Fixed-point extraction works scheme-theoretically: per affine chart the
fixed locus is a zero-dimensional ideal whose quotient algebra is split into
generalized eigenspaces of the coordinate multiplication operators.  Points
whose coordinates stay inside the coefficient field (or one quadratic
extension of Q) come out with exact coordinates; deeper conjugacy classes
are reported with their defining univariate factor and, when possible,
exact per-class (t, d).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from . import unipoly
from .errors import (
    CollinearMarkedPoints,
    DegenerateMap,
    InfinitelyManyLines,
    NoInvariantLine,
    NonSimpleLineFixedPoint,
    PointOnLine,
    PreconditionError,
    QuadspecError,
    TowerTooDeep,
)
from .groebner import Ideal, QuotientAlgebra
from .linalg import (
    Matrix,
    charpoly,
    det,
    identity,
    inverse,
    mat_mul,
    mat_pow,
    mat_vec,
    nullspace,
    solve,
    trace,
)
from .linalg import eig2, order_eigenpair
from .poly import GREVLEX, MPoly
from .scalars import (
    QE,
    Scalar,
    as_scalar,
    common_field,
    is_zero,
    rat,
    scalar_from_str,
    scalar_to_str,
)

Z3 = ("z1", "z2", "z3")
#: coefficient slots of a quadratic in the JSON interchange format
QUAD_MONOMIALS = (
    (2, 0, 0),
    (1, 1, 0),
    (1, 0, 1),
    (0, 2, 0),
    (0, 1, 1),
    (0, 0, 2),
)


def _sort_key(x: Scalar) -> str:
    """Deterministic (presentation-only) ordering key for scalars."""
    return scalar_to_str(x)


def _point_key(p: Sequence[Scalar]) -> tuple:
    return tuple(_sort_key(c) for c in p)


def normalize_projective(coords: Sequence[Scalar]) -> tuple[Scalar, ...]:
    """Scale so the first nonzero coordinate is 1."""
    coords = [as_scalar(c) for c in coords]
    for c in coords:
        if not is_zero(c):
            inv = c.inverse() if isinstance(c, QE) else 1 / c
            return tuple(x * inv for x in coords)
    raise QuadspecError("zero vector is not a projective point")


class LineP2:
    """A projective line, stored as a normalized linear form."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Scalar]):
        self.coeffs = normalize_projective(coords=coeffs)

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        total: Scalar = rat(0)
        for c, x in zip(self.coeffs, point):
            total = total + c * x
        return total

    def contains(self, point: Sequence[Scalar]) -> bool:
        return is_zero(self.evaluate(point))

    def form(self) -> MPoly:
        return MPoly(Z3, {(1, 0, 0): self.coeffs[0], (0, 1, 0): self.coeffs[1], (0, 0, 1): self.coeffs[2]})

    def __eq__(self, other):
        return isinstance(other, LineP2) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"LineP2({[scalar_to_str(c) for c in self.coeffs]})"


class QuadraticMapP2:
    """A self-map of P^2 given by three homogeneous quadratics up to scale.

    Components are normalized so the first nonzero coefficient, scanning
    components in order and monomials in descending grevlex, equals 1.
    """

    __slots__ = ("components", "_degenerate")

    def __init__(self, components: Sequence[MPoly]):
        comps = list(components)
        if len(comps) != 3:
            raise PreconditionError("a map of P^2 needs three components")
        for c in comps:
            if c.vars != Z3:
                raise PreconditionError("components must live in the z1,z2,z3 ring")
            if not (c.is_zero() or c.is_homogeneous(2)):
                raise PreconditionError("components must be homogeneous of degree 2")
        lead = None
        for c in comps:
            if not c.is_zero():
                lead = c.terms[c.leading_monomial(GREVLEX)]
                break
        if lead is None:
            raise PreconditionError("all components are zero")
        inv = lead.inverse() if isinstance(lead, QE) else 1 / lead
        self.components = tuple(c * inv for c in comps)
        self._degenerate: Optional[bool] = None

    # -- validation ------------------------------------------------------

    def is_degenerate(self) -> bool:
        """True when the components share a common projective zero."""
        if self._degenerate is None:
            self._degenerate = False
            for chart in range(3):
                polys = [_dehomogenize(c, chart) for c in self.components]
                polys = [p for p in polys if not p.is_zero()]
                if not polys or not Ideal(polys).is_inconsistent():
                    self._degenerate = True
                    break
        return self._degenerate

    def validate(self):
        if self.is_degenerate():
            raise DegenerateMap("components share a common projective zero")

    def coefficient_field(self):
        return common_field(
            c for comp in self.components for c in comp.terms.values()
        )

    def evaluate(self, point: Sequence[Scalar]) -> tuple[Scalar, ...]:
        return tuple(c.evaluate(list(point)) for c in self.components)

    # -- equality and serialization ---------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticMapP2) and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def to_json(self) -> dict:
        d = self.coefficient_field()
        comps = []
        for c in self.components:
            comps.append(
                [scalar_to_str(c.terms.get(m, rat(0))) for m in QUAD_MONOMIALS]
            )
        return {"field": "Q" if d is None else {"sqrt": d}, "components": comps}

    @classmethod
    def from_json(cls, payload) -> "QuadraticMapP2":
        if isinstance(payload, str):
            payload = json.loads(payload)
        comps = []
        for row in payload["components"]:
            if len(row) != 6:
                raise PreconditionError("each component needs six coefficients")
            terms = {
                m: scalar_from_str(s) for m, s in zip(QUAD_MONOMIALS, row)
            }
            comps.append(MPoly(Z3, terms))
        return cls(comps)

    def __repr__(self):
        return f"QuadraticMapP2({[str(c) for c in self.components]})"


@dataclass
class FixedPointRecord:
    """One fixed point (or conjugacy class of fixed points) of a map.

    ``t`` and ``d`` are the trace and determinant of I - Df at the point;
    ``uv`` holds the eigenvalues of I - Df when they live in the coefficient
    field or one quadratic extension.  Classes whose coordinates need a
    deeper extension have ``point = None`` and carry the defining univariate
    factor of their chart eliminant; ``t``/``d`` are populated when they are
    constant along the class.
    """

    point: Optional[tuple[Scalar, Scalar, Scalar]]
    multiplicity: int
    t: Optional[Scalar] = None
    d: Optional[Scalar] = None
    uv: Optional[tuple[Scalar, Scalar]] = None
    on_line: Optional[bool] = None
    class_factor: Optional[MPoly] = None

    def to_json(self) -> dict:
        return {
            "point": None
            if self.point is None
            else [scalar_to_str(c) for c in self.point],
            "multiplicity": self.multiplicity,
            "t": None if self.t is None else scalar_to_str(self.t),
            "d": None if self.d is None else scalar_to_str(self.d),
            "uv": None if self.uv is None else [scalar_to_str(c) for c in self.uv],
            "on_line": self.on_line,
            "class_factor": None
            if self.class_factor is None
            else str(self.class_factor),
        }


@dataclass
class SpectrumRecord:
    """Full spectral data of a map relative to an invariant line."""

    off_line: list[FixedPointRecord]
    on_line: list[FixedPointRecord]
    line: LineP2

    def to_json(self) -> dict:
        return {
            "line": [scalar_to_str(c) for c in self.line.coeffs],
            "off_line": [r.to_json() for r in self.off_line],
            "on_line": [r.to_json() for r in self.on_line],
        }


@dataclass
class AffineNormalForm:
    """The normalized affine data (L, P, Q, p4) of a map with invariant line.

    L = 1 + a x + b y; P and Q vanish at (0,0), (1,0), (0,1) and at p4.
    """

    L: MPoly
    P: MPoly
    Q: MPoly
    p4: tuple[Scalar, Scalar]

    @property
    def a(self) -> Scalar:
        return self.L.terms.get((1, 0), rat(0))

    @property
    def b(self) -> Scalar:
        return self.L.terms.get((0, 1), rat(0))

    def to_map(self) -> QuadraticMapP2:
        return normal_form_to_map(self)


@dataclass
class AuxiliaryVF:
    """The planar vector field H = P dx + Q dy of an affine normal form."""

    P: MPoly
    Q: MPoly

    def jacobian_at(self, point: Sequence[Scalar]) -> Matrix:
        pt = list(point)
        return [
            [self.P.diff("x").evaluate(pt), self.P.diff("y").evaluate(pt)],
            [self.Q.diff("x").evaluate(pt), self.Q.diff("y").evaluate(pt)],
        ]

    def has_isolated_singularities(self) -> bool:
        if self.P.is_zero() or self.Q.is_zero():
            return False
        try:
            QuotientAlgebra(Ideal([self.P, self.Q]))
        except PreconditionError:
            return False
        return True


@dataclass
class HomQuadVF:
    """A homogeneous quadratic vector field on C^3."""

    components: tuple[MPoly, MPoly, MPoly]

    def __init__(self, components: Sequence[MPoly]):
        comps = tuple(components)
        if len(comps) != 3:
            raise PreconditionError("a vector field on C^3 needs three components")
        for c in comps:
            if c.vars != Z3 or not (c.is_zero() or c.is_homogeneous(2)):
                raise PreconditionError("components must be homogeneous quadratics in z1,z2,z3")
        object.__setattr__(self, "components", comps)


# ---------------------------------------------------------------------------
# chart plumbing
# ---------------------------------------------------------------------------

_CHART_VARS = (("x", "y"), ("u", "w"), ("s", "v"))
# (numerator-1 index, numerator-2 index, denominator index) of the affine map
_CHART_ROLES = ((1, 2, 0), (0, 2, 1), (0, 1, 2))


def _dehomogenize(p: MPoly, chart: int) -> MPoly:
    """Set z_{chart+1} = 1 and move to the two chart variables."""
    names = _CHART_VARS[chart]
    keep = [i for i in range(3) if i != chart]
    terms = {}
    for mono, coeff in p.terms.items():
        key = (mono[keep[0]], mono[keep[1]])
        acc = terms.get(key)
        terms[key] = coeff if acc is None else acc + coeff
    return MPoly(names, terms)


def _chart_point(chart: int, coords: tuple[Scalar, Scalar]) -> tuple[Scalar, ...]:
    full = [rat(0), rat(0), rat(0)]
    full[chart] = rat(1)
    keep = [i for i in range(3) if i != chart]
    full[keep[0]] = coords[0]
    full[keep[1]] = coords[1]
    return normalize_projective(full)


def _chart_data(f: QuadraticMapP2, chart: int):
    """(G1, G2, C) with the affine map reading (a, b) -> (G1/C, G2/C)."""
    i, j, k = _CHART_ROLES[chart]
    g1 = _dehomogenize(f.components[i], chart)
    g2 = _dehomogenize(f.components[j], chart)
    den = _dehomogenize(f.components[k], chart)
    return g1, g2, den


def _fixed_ideal_gens(f: QuadraticMapP2, chart: int) -> list[MPoly]:
    g1, g2, den = _chart_data(f, chart)
    names = _CHART_VARS[chart]
    a, b = MPoly.gens(names)
    return [g1 - a * den, g2 - b * den]


def _one_minus_jacobian(f: QuadraticMapP2, chart: int, coords) -> Matrix:
    """I - Df at an exact chart point, as a 2x2 scalar matrix."""
    g1, g2, den = _chart_data(f, chart)
    names = _CHART_VARS[chart]
    pt = list(coords)
    c = den.evaluate(pt)
    if is_zero(c):
        raise DegenerateMap("chart denominator vanishes at a fixed point")
    cinv = c.inverse() if isinstance(c, QE) else 1 / c
    rows = []
    for g in (g1, g2):
        gval = g.evaluate(pt)
        row = []
        for name in names:
            dg = g.diff(name).evaluate(pt)
            dc = den.diff(name).evaluate(pt)
            row.append((c * dg - gval * dc) * cinv * cinv)
        rows.append(row)
    return [
        [1 - rows[0][0], -rows[0][1]],
        [-rows[1][0], 1 - rows[1][1]],
    ]


def _trace_det_numerators(f: QuadraticMapP2, chart: int):
    """(T, D, C) with t = T/C^2 and d = D/C^4 on the chart fixed locus."""
    g1, g2, den = _chart_data(f, chart)
    names = _CHART_VARS[chart]
    n = {}
    for gi, g in enumerate((g1, g2)):
        for vi, name in enumerate(names):
            n[(gi, vi)] = den * g.diff(name) - g * den.diff(name)
    c2 = den * den
    t_num = 2 * c2 - n[(0, 0)] - n[(1, 1)]
    d_num = (c2 - n[(0, 0)]) * (c2 - n[(1, 1)]) - n[(0, 1)] * n[(1, 0)]
    return t_num, d_num, den


# ---------------------------------------------------------------------------
# zero-dimensional splitting
# ---------------------------------------------------------------------------


def _restrict_operator(big: Matrix, basis: list[list[Scalar]]) -> Matrix:
    """Matrix of an operator on the invariant subspace spanned by basis."""
    if not basis:
        return []
    n = len(basis[0])
    bmat = [[basis[j][i] for j in range(len(basis))] for i in range(n)]
    cols = []
    for b in basis:
        x = solve(bmat, mat_vec(big, b))
        if x is None:
            raise QuadspecError("subspace is not operator-invariant")
        cols.append(x)
    return [list(row) for row in zip(*cols)]


def _combine(basis: list[list[Scalar]], weights: Sequence[Scalar]) -> list[Scalar]:
    out = [rat(0)] * len(basis[0])
    for w, b in zip(weights, basis):
        if is_zero(w):
            continue
        for i, x in enumerate(b):
            out[i] = out[i] + w * x
    return out


def _poly_of_matrix(coeffs: Sequence[Scalar], m: Matrix) -> Matrix:
    n = len(m)
    out = [[rat(0)] * n for _ in range(n)]
    for c in reversed(list(coeffs)):
        out = mat_mul(out, m)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


def _shifted(m: Matrix, r: Scalar) -> Matrix:
    out = [row[:] for row in m]
    for i in range(len(m)):
        out[i][i] = out[i][i] - r
    return out


@dataclass
class PointCluster:
    """A generalized-eigenspace component of a zero-dimensional algebra."""

    coords: Optional[tuple[Scalar, ...]]
    multiplicity: int
    basis: list[list[Scalar]] = dc_field(repr=False, default_factory=list)
    factor: Optional[list[Scalar]] = None  # stalling eliminant factor, ascending
    factor_var: Optional[str] = None


def _split_points(
    algebra: QuotientAlgebra,
    names: Sequence[str],
    basis: Optional[list[list[Scalar]]] = None,
    field_d: Optional[int] = None,
) -> list[PointCluster]:
    """Split a component of a quotient algebra into per-point clusters."""
    if basis is None:
        basis = identity(algebra.dim)
    if not basis:
        return []
    ops = []
    for name in names:
        big = algebra.mult_matrix(MPoly.var(algebra.ideal.vars, name))
        ops.append(_restrict_operator(big, basis))
    out: list[PointCluster] = []

    def recurse(prefix, cur_basis, cur_ops, name_idx):
        if name_idx == len(names):
            out.append(
                PointCluster(tuple(prefix), len(cur_basis), basis=cur_basis)
            )
            return
        m = cur_ops[0]
        cp = charpoly(m)
        roots, residual = unipoly.roots_with_multiplicity(cp, field_d)
        for r, _mult in sorted(roots, key=lambda rm: _sort_key(rm[0])):
            kern = nullspace(mat_pow(_shifted(m, r), len(m)))
            sub_basis = [_combine(cur_basis, w) for w in kern]
            sub_ops = [_restrict_operator(op, kern) for op in cur_ops[1:]]
            recurse(prefix + [r], sub_basis, sub_ops, name_idx + 1)
        if unipoly.degree(residual) >= 1:
            factors = (
                [g for g, _ in unipoly.factor_rational(residual)]
                if unipoly.is_rational_poly(residual)
                else [residual]
            )
            for g in factors:
                gm = _poly_of_matrix(g, m)
                kern = nullspace(mat_pow(gm, len(m)))
                sub_basis = [_combine(cur_basis, w) for w in kern]
                out.append(
                    PointCluster(
                        None,
                        len(sub_basis),
                        basis=sub_basis,
                        factor=list(g),
                        factor_var=names[name_idx],
                    )
                )

    recurse([], basis, ops, 0)
    return out


def _constant_on_cluster(
    algebra: QuotientAlgebra,
    cluster: PointCluster,
    num: MPoly,
    den: MPoly,
    field_d: Optional[int],
) -> Optional[Scalar]:
    """Value of num/den on the cluster if constant there, else None."""
    m_num = _restrict_operator(algebra.mult_matrix(num), cluster.basis)
    m_den = _restrict_operator(algebra.mult_matrix(den), cluster.basis)
    m = mat_mul(inverse(m_den), m_num)
    roots, residual = unipoly.roots_with_multiplicity(charpoly(m), field_d)
    if unipoly.degree(residual) >= 1 or len(roots) != 1:
        return None
    return roots[0][0]


# ---------------------------------------------------------------------------
# fixed points and multipliers
# ---------------------------------------------------------------------------


def _chart_quotient(f: QuadraticMapP2, chart: int) -> Optional[QuotientAlgebra]:
    gens = _fixed_ideal_gens(f, chart)
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise DegenerateMap("map fixes an entire chart (non-isolated fixed points)")
    ideal = Ideal(gens)
    if ideal.is_inconsistent():
        return None
    try:
        return QuotientAlgebra(ideal)
    except PreconditionError as exc:
        raise DegenerateMap(f"non-isolated fixed points: {exc}") from exc


def _nilpotent_basis(
    algebra: QuotientAlgebra, name: str, basis: Optional[list[list[Scalar]]] = None
) -> list[list[Scalar]]:
    big = algebra.mult_matrix(MPoly.var(algebra.ideal.vars, name))
    if basis is None:
        return nullspace(mat_pow(big, algebra.dim))
    m = _restrict_operator(big, basis)
    kern = nullspace(mat_pow(m, len(m)))
    return [_combine(basis, w) for w in kern]


def _records_from_chart(
    f: QuadraticMapP2,
    chart: int,
    algebra: QuotientAlgebra,
    basis: Optional[list[list[Scalar]]],
    field_d: Optional[int],
) -> list[FixedPointRecord]:
    clusters = _split_points(algebra, _CHART_VARS[chart], basis, field_d)
    records = []
    t_num, d_num, den = _trace_det_numerators(f, chart)
    c2 = den * den
    c4 = c2 * c2
    for cl in clusters:
        if cl.coords is not None:
            mat = _one_minus_jacobian(f, chart, cl.coords)
            t = mat[0][0] + mat[1][1]
            d = det(mat)
            try:
                uv = eig2(mat)
            except TowerTooDeep:
                uv = None
            records.append(
                FixedPointRecord(
                    point=_chart_point(chart, cl.coords),
                    multiplicity=cl.multiplicity,
                    t=t,
                    d=d,
                    uv=uv,
                )
            )
        else:
            t = _constant_on_cluster(algebra, cl, t_num, c2, field_d)
            d = _constant_on_cluster(algebra, cl, d_num, c4, field_d)
            factor = MPoly.from_univariate((cl.factor_var,), cl.factor_var, cl.factor)
            records.append(
                FixedPointRecord(
                    point=None,
                    multiplicity=cl.multiplicity,
                    t=t,
                    d=d,
                    class_factor=factor,
                )
            )
    return records


def fixed_points(f: QuadraticMapP2) -> list[FixedPointRecord]:
    """All fixed points of f, with multiplicities summing to 7.

    Charts are visited in disjoint strata: z1 != 0, then z1 = 0 != z2,
    then the single point [0:0:1].
    """
    f.validate()
    field_d = f.coefficient_field()
    records: list[FixedPointRecord] = []

    a1 = _chart_quotient(f, 0)
    if a1 is not None:
        records.extend(_records_from_chart(f, 0, a1, None, field_d))

    a2 = _chart_quotient(f, 1)
    if a2 is not None:
        basis = _nilpotent_basis(a2, "u")
        if basis:
            records.extend(_records_from_chart(f, 1, a2, basis, field_d))

    a3 = _chart_quotient(f, 2)
    if a3 is not None:
        basis = _nilpotent_basis(a3, "s")
        if basis:
            basis = _nilpotent_basis(a3, "v", basis)
        if basis:
            records.extend(_records_from_chart(f, 2, a3, basis, field_d))

    total = sum(r.multiplicity for r in records)
    if total != 7:
        raise QuadspecError(f"fixed-point multiplicities sum to {total}, not 7")
    records.sort(
        key=lambda r: ((0, _point_key(r.point)) if r.point else (1, str(r.class_factor)))
    )
    return records


def multipliers(f: QuadraticMapP2, record: FixedPointRecord) -> FixedPointRecord:
    """Fill in (t, d) and, when possible, the (u, v) pair of a fixed point."""
    if record.point is None:
        raise PreconditionError("multipliers need exact point coordinates")
    chart = next(i for i, c in enumerate(record.point) if not is_zero(c))
    keep = [i for i in range(3) if i != chart]
    coords = (record.point[keep[0]], record.point[keep[1]])
    mat = _one_minus_jacobian(f, chart, coords)
    record.t = mat[0][0] + mat[1][1]
    record.d = det(mat)
    try:
        record.uv = eig2(mat)
    except TowerTooDeep:
        record.uv = None
    return record


# ---------------------------------------------------------------------------
# invariant lines
# ---------------------------------------------------------------------------


def _line_condition_coeffs(f: QuadraticMapP2, subs_var: int, params: Sequence[MPoly], ring):
    """Coefficients (in the remaining z's) of l(F) after substituting the
    leading z variable of the line by minus the parametrized tail."""
    big = tuple(list(ring) + list(Z3))
    comps = [c.rename(big) for c in f.components]
    nparams = len(ring)
    # l = z_subs + sum(params * later z's); substitute z_subs accordingly
    later = [i for i in range(3) if i > subs_var]
    zsub = MPoly.zero(big)
    for p, zi in zip(params, later):
        zsub = zsub - p.rename(big) * MPoly.var(big, Z3[zi])
    comps = [c.subs({Z3[subs_var]: zsub}) for c in comps]
    lf = comps[subs_var]
    for p, zi in zip(params, later):
        lf = lf + p.rename(big) * comps[zi]
    # group by the exponents of the surviving z variables
    grouped: dict[tuple, MPoly] = {}
    for mono, coeff in lf.terms.items():
        zkey = tuple(mono[nparams + i] for i in range(3))
        pkey = mono[:nparams]
        g = grouped.setdefault(zkey, MPoly.zero(ring))
        grouped[zkey] = g + MPoly(ring, {pkey: coeff})
    return list(grouped.values())


def invariant_lines(f: QuadraticMapP2) -> list[LineP2]:
    """All invariant lines with coefficients in the field or one quadratic
    extension of Q (deeper classes are omitted)."""
    f.validate()
    field_d = f.coefficient_field()
    lines: list[LineP2] = []

    # l = z1 + a z2 + b z3
    ring = ("a", "b")
    a, b = MPoly.gens(ring)
    eqs = _line_condition_coeffs(f, 0, [a, b], ring)
    eqs = [e for e in eqs if not e.is_zero()]
    if not eqs:
        raise InfinitelyManyLines("every line through z1-type pencil is invariant")
    ideal = Ideal(eqs)
    if not ideal.is_inconsistent():
        try:
            alg = QuotientAlgebra(ideal)
        except PreconditionError as exc:
            raise InfinitelyManyLines(str(exc)) from exc
        for cl in _split_points(alg, ring, None, field_d):
            if cl.coords is not None:
                lines.append(LineP2((rat(1), cl.coords[0], cl.coords[1])))

    # l = z2 + b z3
    ring1 = ("b",)
    (b1,) = MPoly.gens(ring1)
    eqs = _line_condition_coeffs(f, 1, [b1], ring1)
    eqs = [e for e in eqs if not e.is_zero()]
    if not eqs:
        raise InfinitelyManyLines("every line z2 + b z3 = 0 is invariant")
    g = None
    for e in eqs:
        coeffs = e.univariate_in("b")
        g = coeffs if g is None else unipoly.gcd(g, coeffs)
    if unipoly.degree(g) >= 1:
        roots, _ = unipoly.roots_with_multiplicity(g, field_d)
        for r, _m in roots:
            lines.append(LineP2((rat(0), rat(1), r)))
    elif not unipoly.trim(list(g)):
        raise InfinitelyManyLines("gcd of line conditions vanishes identically")

    # l = z3
    if f.components[2].subs({"z3": MPoly.zero(Z3)}).is_zero():
        lines.append(LineP2((rat(0), rat(0), rat(1))))

    lines.sort(key=lambda l: _point_key(l.coeffs))
    return lines


# ---------------------------------------------------------------------------
# coordinates adapted to an invariant line
# ---------------------------------------------------------------------------


def conjugate_map(f: QuadraticMapP2, a: Matrix) -> QuadraticMapP2:
    """The map A^-1 . f . A in the new coordinates w with z = A w."""
    ainv = inverse(a)
    z = MPoly.gens(Z3)
    images = []
    for k in range(3):
        img = MPoly.zero(Z3)
        for m in range(3):
            img = img + a[k][m] * z[m]
        images.append(img)
    fa = [c.subs({"z1": images[0], "z2": images[1], "z3": images[2]}) for c in f.components]
    comps = []
    for i in range(3):
        acc = MPoly.zero(Z3)
        for j in range(3):
            acc = acc + ainv[i][j] * fa[j]
        comps.append(acc)
    return QuadraticMapP2(comps)


def line_adapted_transform(line: LineP2) -> Matrix:
    """A matrix A with A(span(e2, e3)) = the given line."""
    n = list(line.coeffs)
    i0 = next(i for i in range(3) if not is_zero(n[i]))
    cols = []
    e = identity(3)
    cols.append(e[i0])
    ninv = n[i0].inverse() if isinstance(n[i0], QE) else 1 / n[i0]
    for j in range(3):
        if j == i0:
            continue
        v = list(e[j])
        v[i0] = v[i0] - n[j] * ninv
        cols.append(v)
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def _extract_line_factor(f: QuadraticMapP2) -> MPoly:
    """L-hat with F1 = z1 * L-hat, for a map preserving z1 = 0."""
    f1 = f.components[0]
    terms = {}
    for mono, coeff in f1.terms.items():
        if mono[0] == 0:
            raise NoInvariantLine("the line z1 = 0 is not invariant")
        terms[(mono[0] - 1, mono[1], mono[2])] = coeff
    return MPoly(Z3, terms)


def _line_restriction(f: QuadraticMapP2):
    """(G2, G3) with f|_{z1=0} : [z2:z3] -> [G2:G3], as binary forms in (z2, z3)."""
    g2 = f.components[1].subs({"z1": MPoly.zero(Z3)})
    g3 = f.components[2].subs({"z1": MPoly.zero(Z3)})
    return g2, g3


def _on_line_tangent_eigenvalue(f: QuadraticMapP2, point) -> Scalar:
    """(f|l)' at an on-line fixed point of a map preserving z1 = 0."""
    g2, g3 = _line_restriction(f)
    if not is_zero(point[1]):
        # chart [0:1:w]
        w0 = point[2] / point[1] if not isinstance(point[1], QE) else point[2] * point[1].inverse()
        den_poly = _binary_to_univariate(g2, True)
        num_poly = _binary_to_univariate(g3, True)
        denv = unipoly.evaluate(den_poly, w0)
        if is_zero(denv):
            raise DegenerateMap("indeterminacy of f restricted to the line")
        numd = unipoly.evaluate(unipoly.derivative(num_poly), w0)
        dend = unipoly.evaluate(unipoly.derivative(den_poly), w0)
        numv = unipoly.evaluate(num_poly, w0)
        dinv = denv.inverse() if isinstance(denv, QE) else 1 / denv
        return (denv * numd - numv * dend) * dinv * dinv
    # point [0:0:1], chart s = z2/z3
    den_poly = _binary_to_univariate(g3, False)
    num_poly = _binary_to_univariate(g2, False)
    denv = unipoly.evaluate(den_poly, rat(0))
    if is_zero(denv):
        raise DegenerateMap("indeterminacy of f restricted to the line")
    numd = unipoly.evaluate(unipoly.derivative(num_poly), rat(0))
    numv = unipoly.evaluate(num_poly, rat(0))
    dend = unipoly.evaluate(unipoly.derivative(den_poly), rat(0))
    dinv = denv.inverse() if isinstance(denv, QE) else 1 / denv
    return (denv * numd - numv * dend) * dinv * dinv


def _binary_to_univariate(p: MPoly, in_w: bool) -> list[Scalar]:
    """Binary form in (z2, z3) as a dense univariate list.

    in_w: substitute z2 = 1 (variable w = z3); else z3 = 1 (variable s = z2).
    """
    deg = 0
    for mono in p.terms:
        deg = max(deg, mono[2] if in_w else mono[1])
    out = [rat(0)] * (deg + 1)
    for mono, coeff in p.terms.items():
        e = mono[2] if in_w else mono[1]
        out[e] = out[e] + coeff
    return unipoly.trim(out) if p.terms else []


def spectrum(f: QuadraticMapP2, line: LineP2) -> SpectrumRecord:
    """All fixed points split along the invariant line, with multipliers.

    Requires seven simple fixed points with coordinates in the coefficient
    field or one quadratic extension; on-line records get (u, v) ordered
    with u the eigenvalue of I - Df tangent to the line.
    """
    f.validate()
    a = line_adapted_transform(line)
    g = conjugate_map(f, a)
    _extract_line_factor(g)  # validates invariance
    field_d = f.coefficient_field()

    off = []
    alg = _chart_quotient(g, 0)
    if alg is not None:
        off = _records_from_chart(g, 0, alg, None, field_d)
    on = []
    a2 = _chart_quotient(g, 1)
    if a2 is not None:
        basis = _nilpotent_basis(a2, "u")
        if basis:
            on.extend(_records_from_chart(g, 1, a2, basis, field_d))
    a3 = _chart_quotient(g, 2)
    if a3 is not None:
        basis = _nilpotent_basis(a3, "s")
        if basis:
            basis = _nilpotent_basis(a3, "v", basis)
        if basis:
            on.extend(_records_from_chart(g, 2, a3, basis, field_d))

    if len(off) != 4 or any(r.point is None or r.multiplicity != 1 for r in off):
        raise PreconditionError(
            "expected four simple off-line fixed points with exact coordinates"
        )
    if len(on) != 3 or any(r.point is None or r.multiplicity != 1 for r in on):
        raise NonSimpleLineFixedPoint(
            "expected three simple on-line fixed points with exact coordinates"
        )

    for r in off:
        r.on_line = False
    for r in on:
        r.on_line = True
        lam = _on_line_tangent_eigenvalue(g, r.point)
        u = 1 - lam if not isinstance(lam, QE) else rat(1) - lam
        v = r.t - u
        r.uv = (u, v)

    # report points in the original coordinates
    for r in off + on:
        r.point = normalize_projective(mat_vec(a, list(r.point)))
    off.sort(key=lambda r: _point_key(r.point))
    on.sort(key=lambda r: _point_key(r.point))
    return SpectrumRecord(off_line=off, on_line=on, line=line)


# ---------------------------------------------------------------------------
# affine normal form
# ---------------------------------------------------------------------------

XY = ("x", "y")


def _homogenize_affine(p: MPoly, degree: int) -> MPoly:
    """x -> z2/z1, y -> z3/z1, cleared by z1^degree."""
    terms = {}
    for mono, coeff in p.terms.items():
        e1 = degree - mono[0] - mono[1]
        if e1 < 0:
            raise QuadspecError("degree too small to homogenize")
        terms[(e1, mono[0], mono[1])] = coeff
    return MPoly(Z3, terms)


def normal_form_to_map(nf: AffineNormalForm) -> QuadraticMapP2:
    lhat = _homogenize_affine(nf.L, 1)
    phat = _homogenize_affine(nf.P, 2)
    qhat = _homogenize_affine(nf.Q, 2)
    z1, z2, z3 = MPoly.gens(Z3)
    return QuadraticMapP2([z1 * lhat, z2 * lhat - phat, z3 * lhat - qhat])


def affine_normal_form(
    f: QuadraticMapP2, line: LineP2, marked: Sequence
) -> tuple[AffineNormalForm, Matrix]:
    """Normalize so the line is z1 = 0 and the marked fixed points sit at
    (0,0), (1,0), (0,1); returns the normal form and the matrix used."""
    points = []
    for p in marked:
        if isinstance(p, FixedPointRecord):
            p = p.point
        if p is None:
            raise PreconditionError("marked points need exact coordinates")
        points.append(normalize_projective(p))
    if len(points) != 3:
        raise PreconditionError("exactly three marked points required")
    n = line.coeffs
    lvals = [line.evaluate(p) for p in points]
    if any(is_zero(v) for v in lvals):
        raise PointOnLine("a marked point lies on the invariant line")
    if is_zero(det([list(p) for p in points])):
        raise CollinearMarkedPoints("the marked points lie on a common line")
    p1, p2, p3 = points
    lam2 = lvals[0] / lvals[1] if not isinstance(lvals[1], QE) else lvals[0] * lvals[1].inverse()
    lam3 = lvals[0] / lvals[2] if not isinstance(lvals[2], QE) else lvals[0] * lvals[2].inverse()
    a = [
        [p1[i], lam2 * p2[i] - p1[i], lam3 * p3[i] - p1[i]]
        for i in range(3)
    ]
    g = conjugate_map(f, a)
    lhat = _extract_line_factor(g)
    c = lhat.terms.get((1, 0, 0), rat(0))
    if is_zero(c):
        raise DegenerateMap("L vanishes at the first marked point")
    cinv = c.inverse() if isinstance(c, QE) else 1 / c
    comps = [comp * cinv for comp in g.components]
    lhat = lhat * cinv
    z1, z2, z3 = MPoly.gens(Z3)
    phat = z2 * lhat - comps[1]
    qhat = z3 * lhat - comps[2]
    big_l = _dehomogenize_affine(lhat)
    big_p = _dehomogenize_affine(phat)
    big_q = _dehomogenize_affine(qhat)
    for pt in ((rat(0), rat(0)), (rat(1), rat(0)), (rat(0), rat(1))):
        if not (is_zero(big_p.evaluate(list(pt))) and is_zero(big_q.evaluate(list(pt)))):
            raise PreconditionError("a marked point is not a fixed point of the map")
    # fourth common zero of P and Q
    field_d = f.coefficient_field()
    try:
        alg = QuotientAlgebra(Ideal([big_p, big_q]))
    except PreconditionError as exc:
        raise DegenerateMap(f"P and Q do not meet properly: {exc}") from exc
    p4 = None
    known = {(rat(0), rat(0)), (rat(1), rat(0)), (rat(0), rat(1))}
    for cl in _split_points(alg, XY, None, field_d):
        if cl.coords is None:
            raise DegenerateMap("fourth fixed point escapes a quadratic extension")
        if tuple(cl.coords) not in known:
            if p4 is not None:
                raise DegenerateMap("ambiguous fourth fixed point")
            p4 = tuple(cl.coords)
    if p4 is None:
        raise DegenerateMap("no fourth off-line fixed point distinct from the marks")
    nf = AffineNormalForm(L=big_l, P=big_p, Q=big_q, p4=p4)
    return nf, a


def _dehomogenize_affine(p: MPoly) -> MPoly:
    """z1 = 1 with x = z2, y = z3."""
    terms = {}
    for mono, coeff in p.terms.items():
        key = (mono[1], mono[2])
        acc = terms.get(key)
        terms[key] = coeff if acc is None else acc + coeff
    return MPoly(XY, terms)


def auxiliary_vf(nf: AffineNormalForm) -> AuxiliaryVF:
    """H = P dx + Q dy; DH at each singular point equals L(p) (I - Df|p)."""
    return AuxiliaryVF(P=nf.P, Q=nf.Q)


# ---------------------------------------------------------------------------
# vector-field correspondence
# ---------------------------------------------------------------------------


def vf_to_map(x: HomQuadVF) -> QuadraticMapP2:
    f = QuadraticMapP2(x.components)
    f.validate()
    return f


def map_to_vf(f: QuadraticMapP2) -> HomQuadVF:
    return HomQuadVF(f.components)


def kowalevski_exponents(x: HomQuadVF) -> list[tuple]:
    """Multiset of Kowalevski exponent pairs, one per nondegenerate radial
    orbit; integer values are returned as Python ints."""
    f = vf_to_map(x)
    out = []
    for rec in fixed_points(f):
        if rec.d is not None and is_zero(rec.d):
            continue
        if rec.point is None or rec.uv is None:
            raise TowerTooDeep(
                "a radial orbit has exponents outside a quadratic extension"
            )
        out.append(tuple(_as_int_if_integral(v) for v in rec.uv))
    return out


def _as_int_if_integral(x: Scalar):
    if not isinstance(x, QE) and rat(x).denominator == 1:
        return int(x)
    return x


# ---------------------------------------------------------------------------
# relative fixed-point sum along an invariant line
# ---------------------------------------------------------------------------


def relative_fixed_point_sum(f: QuadraticMapP2, line: LineP2) -> Scalar:
    """Sum of (1 - mu_i)/(1 - lambda_i) over the fixed points of f restricted
    to the line (lambda tangent); equals 1 whenever the restricted fixed
    points are simple."""
    f.validate()
    a = line_adapted_transform(line)
    g = conjugate_map(f, a)
    lhat = _extract_line_factor(g)
    g2, g3 = _line_restriction(g)
    den_w = _binary_to_univariate(g2, True)   # F2(0,1,w)
    num_w = _binary_to_univariate(g3, True)   # F3(0,1,w)
    gpoly = unipoly.sub(num_w, unipoly.mul([rat(0), rat(1)], den_w))
    gpoly = unipoly.trim(gpoly)
    if not gpoly:
        raise NonSimpleLineFixedPoint("f restricted to the line is the identity")
    deg_g = unipoly.degree(gpoly)
    if deg_g < 2:
        raise NonSimpleLineFixedPoint("multiple fixed point at infinity on the line")
    if unipoly.degree(unipoly.gcd(gpoly, unipoly.derivative(gpoly))) > 0:
        raise NonSimpleLineFixedPoint("f restricted to the line has a multiple fixed point")

    total: Scalar = rat(0)
    lhat_w = _binary_line_values(lhat)
    if deg_g >= 1:
        ring = ("w",)
        gmp = MPoly.from_univariate(ring, "w", gpoly)
        alg = QuotientAlgebra(Ideal([gmp]))
        den_mp = MPoly.from_univariate(ring, "w", den_w)
        num_mp = MPoly.from_univariate(ring, "w", num_w)
        lw_mp = MPoly.from_univariate(ring, "w", lhat_w)
        # (1-mu)/(1-lambda) = (F2 - Lhat) F2 / (F2^2 - F2 F3' + F3 F2')
        e_num = (den_mp - lw_mp) * den_mp
        e_den = den_mp * den_mp - den_mp * num_mp.diff("w") + num_mp * den_mp.diff("w")
        m_den = alg.mult_matrix(e_den)
        vec = solve(m_den, alg.nf_vector(e_num))
        if vec is None:
            raise NonSimpleLineFixedPoint("degenerate transverse data on the line")
        total = total + trace(alg.mult_matrix_of_vector(vec))
    if deg_g < 3:
        # simple fixed point at [0:0:1]
        den_s = _binary_to_univariate(g3, False)
        num_s = _binary_to_univariate(g2, False)
        denv = unipoly.evaluate(den_s, rat(0))
        if is_zero(denv):
            raise DegenerateMap("indeterminacy on the line")
        dinv = denv.inverse() if isinstance(denv, QE) else 1 / denv
        lam = (
            denv * unipoly.evaluate(unipoly.derivative(num_s), rat(0))
            - unipoly.evaluate(num_s, rat(0))
            * unipoly.evaluate(unipoly.derivative(den_s), rat(0))
        ) * dinv * dinv
        mu = lhat.evaluate([rat(0), rat(0), rat(1)]) * dinv
        one_minus_lam = 1 - lam if not isinstance(lam, QE) else rat(1) - lam
        if is_zero(one_minus_lam):
            raise NonSimpleLineFixedPoint("multiple fixed point at [0:0:1]")
        inv = (
            one_minus_lam.inverse()
            if isinstance(one_minus_lam, QE)
            else 1 / one_minus_lam
        )
        one_minus_mu = 1 - mu if not isinstance(mu, QE) else rat(1) - mu
        total = total + one_minus_mu * inv
    return total


def _binary_line_values(lhat: MPoly) -> list[Scalar]:
    """L-hat(0, 1, w) as a dense univariate list."""
    out = [rat(0), rat(0)]
    for mono, coeff in lhat.terms.items():
        if mono[0] != 0:
            continue
        if mono[1] == 1:
            out[0] = out[0] + coeff
        elif mono[2] == 1:
            out[1] = out[1] + coeff
    return unipoly.trim(out)
