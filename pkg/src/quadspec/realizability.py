"""Realizability of prescribed multiplier spectra.

A quadratic self-map with invariant line z1 = 0 and marked off-line fixed
points (0,0), (1,0), (0,1) is parametrized by w = (w1, ..., w8) via

    P = w1 (x^2 - x) + w2 xy + w3 (y^2 - y),
    Q = w4 (x^2 - x) + w5 xy + w6 (y^2 - y),
    L = 1 + w7 x + w8 y,

with the map (x, y) -> (x - P/L, y - Q/L).  This module builds the ideal
cutting out the parameter vectors whose spectrum matches prescribed data,
and uses it for:

* run_test — decide whether fourteen prescribed multipliers can lie in the
  closure of realizable spectra (a non-realizability certificate; a passing
  verdict may still be a false positive, never a false negative),
* compute_h — the degree-at-most-four polynomial whose roots are the values
  a symmetric function of the on-line multipliers can take over the (at
  most four) maps realizing given off-line data,
* solve_normalization / realize_maps — the explicit fiber over generic
  off-line data: two (a, b, x4, y4) normalizations, each carrying two maps,
* spectral_rank — the rank of the derivative of w -> (t_1, d_1, ..., t_4, d_4).

The on-line symmetric values e_{i,j} are imposed through exact resultant
identities: on z1 = 0 the fixed points are the roots of the cubic binary
form G = z3 M2 - z2 M3, and for a linear chart form ell_c = z2 + c z3 the
generating product of the multipliers is the resultant ratio

    sum e_{i,j} x^i y^j = Res(G, W_c + x U_c + y V_c) / Res(G, W_c),

with W_c = M2 + c M3, U_c = 3 W_c - ell_c tr J, V_c = W_c - ell_c L-hat.
At a root of G where ell_c vanishes the whole chart factor vanishes, so
that chart's cleared equations become vacuous there; since a cubic has at
most three roots, at least one of the four charts c in {0, 1, -1, 2} is
fully active at every solution, and imposing all four charts' equations
never excludes a genuine solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import unipoly
from .errors import (
    DegenerateFixedPoint,
    DegenerateTau,
    NonGenericTau,
    PreconditionError,
    TowerTooDeep,
)
from .groebner import Budget, Ideal, QuotientAlgebra
from .linalg import charpoly, nullspace, rank, solve
from .poly import MPoly, sylvester_resultant
from .projmap import (
    AffineNormalForm,
    LineP2,
    QuadraticMapP2,
    _split_points,
    affine_normal_form,
    normal_form_to_map,
)
from .relations import SymmetricProfile, symmetric_profile
from .scalars import QE, Scalar, is_zero, rat, scalar_to_str

W8 = ("w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8")
V7 = ("w3", "w4", "w6", "w7", "w8", "x4", "y4")
CHARTS = (rat(0), rat(1), rat(-1), rat(2))
E_ORDER = (
    (0, 0),
    (1, 0), (2, 0), (3, 0),
    (0, 1), (1, 1), (2, 1),
    (1, 2), (0, 2), (0, 3),
)
XY = ("x", "y")


def param_normal_form(w: Sequence[Scalar]) -> AffineNormalForm:
    """The (L, P, Q) data of a parameter vector; p4 is filled lazily by
    callers that need it (the marked points are fixed by construction)."""
    if len(w) != 8:
        raise PreconditionError("a parameter vector has eight entries")
    w1, w2, w3, w4, w5, w6, w7, w8 = w
    x, y = MPoly.gens(XY)
    p = w1 * (x * x - x) + w2 * x * y + w3 * (y * y - y)
    q = w4 * (x * x - x) + w5 * x * y + w6 * (y * y - y)
    l = 1 + w7 * x + w8 * y
    return AffineNormalForm(L=l, P=p, Q=q, p4=(rat(0), rat(0)))


def param_map(w: Sequence[Scalar]) -> QuadraticMapP2:
    return normal_form_to_map(param_normal_form(w))


# ---------------------------------------------------------------------------
# target data
# ---------------------------------------------------------------------------


@dataclass
class TargetSpectrum:
    """Prescribed data: four off-line (t_i, d_i) pairs and the symmetric
    values e_{i,j} of the three on-line (u, v) pairs."""

    off: list[tuple[Scalar, Scalar]]
    e: dict[tuple[int, int], Scalar]

    def __post_init__(self):
        if len(self.off) != 4:
            raise PreconditionError("four off-line (t, d) pairs required")
        for _, d in self.off:
            if is_zero(d):
                raise PreconditionError("off-line determinants must be nonzero")

    @classmethod
    def from_pairs(cls, off_pairs: Sequence, line_pairs: Sequence) -> "TargetSpectrum":
        off = [(u + v, u * v) for u, v in off_pairs]
        for u, v in line_pairs:
            if is_zero(u) or is_zero(u * v):
                raise PreconditionError("on-line multipliers must be nonzero")
        profile = symmetric_profile(list(line_pairs))
        return cls(off=off, e=dict(profile.e))

    @classmethod
    def from_values(cls, off_td: Sequence, e_values: dict) -> "TargetSpectrum":
        off = [(t, d) for t, d in off_td]
        return cls(off=off, e={k: v for k, v in e_values.items()})

    @property
    def tau(self) -> tuple[Scalar, ...]:
        return tuple(x for pair in self.off for x in pair)


@dataclass
class TestVerdict:
    """Outcome of the realizability test."""

    status: str  # "passed" | "not_realizable"
    fourth_point_ok: bool
    witness: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == "passed"

    def to_json(self) -> dict:
        out = {"status": self.status, "fourth_point_ok": self.fourth_point_ok}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# ---------------------------------------------------------------------------
# resultant identities for the on-line symmetric values
# ---------------------------------------------------------------------------

_E_CACHE: Optional[dict] = None


def _conv(f: list, g: list) -> list:
    out = [None] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            prod = a * b
            out[i + j] = prod if out[i + j] is None else out[i + j] + prod
    return out


def _chart_resultants() -> dict:
    """For each chart c: the polynomials E^c_{i,j} in w1..w8 with
    sum E_{i,j} x^i y^j = Res(G, W_c + x U_c + y V_c)."""
    global _E_CACHE
    if _E_CACHE is not None:
        return _E_CACHE
    ring = XY + W8
    x, y = MPoly.var(ring, "x"), MPoly.var(ring, "y")
    w = {name: MPoly.var(ring, name) for name in W8}
    # coefficient lists of the binary forms on z1 = 0, ascending in z3/z2
    g_coeffs = [w["w4"], w["w5"] - w["w1"], w["w6"] - w["w2"], -w["w3"]]
    m2 = [w["w7"] - w["w1"], w["w8"] - w["w2"], -w["w3"]]
    m3 = [-w["w4"], w["w7"] - w["w5"], w["w8"] - w["w6"]]
    tr_j = [3 * w["w7"] - 2 * w["w1"] - w["w5"], 3 * w["w8"] - w["w2"] - 2 * w["w6"]]
    l_hat = [w["w7"], w["w8"]]
    cache = {}
    for c in CHARTS:
        ell = [MPoly.const(ring, 1), MPoly.const(ring, c)]
        wc = [a + c * b for a, b in zip(m2, m3)]
        uc = [3 * a - b for a, b in zip(wc, _conv(ell, tr_j))]
        vc = [a - b for a, b in zip(wc, _conv(ell, l_hat))]
        h = [wi + x * ui + y * vi for wi, ui, vi in zip(wc, uc, vc)]
        res = sylvester_resultant(g_coeffs, h)
        per_chart = {}
        for (i, j) in E_ORDER:
            acc = MPoly.zero(W8)
            for mono, coeff in res.terms.items():
                if mono[0] == i and mono[1] == j:
                    acc = acc + MPoly(W8, {mono[2:]: coeff})
            per_chart[(i, j)] = acc
        cache[scalar_to_str(c)] = per_chart
    _E_CACHE = cache
    return cache


def _drop_to_v7(p: MPoly) -> MPoly:
    """Reinterpret a w1..w8 polynomial without w1, w2, w5 in the seven
    working variables."""
    terms = {}
    for mono, coeff in p.terms.items():
        if mono[0] or mono[1] or mono[4]:
            raise PreconditionError("polynomial still involves eliminated parameters")
        terms[(mono[2], mono[3], mono[5], mono[6], mono[7], 0, 0)] = coeff
    return MPoly(V7, terms)


def _elimination_map(tau: Sequence[Scalar]) -> dict[str, MPoly]:
    """w1, w2, w5 as functions of (w6, w7, w8) for given trace targets."""
    t1, _, t2, _, t3, _, _, _ = tau
    w6 = MPoly.var(W8, "w6")
    w7 = MPoly.var(W8, "w7")
    w8 = MPoly.var(W8, "w8")
    return {
        "w1": -t1 - w6,
        "w5": t2 * (1 + w7) + t1 + 2 * w6,
        "w2": t3 * (1 + w8) - t1 - 2 * w6,
    }


def _tau_generators(tau: Sequence[Scalar]) -> list[MPoly]:
    """The seven determinant / fourth-point equations in the seven working
    variables (traces at the marked points already eliminated)."""
    t1, d1, t2, d2, t3, d3, t4, d4 = tau
    w3, w4, w6, w7, w8, x4, y4 = MPoly.gens(V7)
    w1 = -t1 - w6
    w5 = t2 * (1 + w7) + t1 + 2 * w6
    w2 = t3 * (1 + w8) - t1 - 2 * w6
    l4 = 1 + w7 * x4 + w8 * y4
    px = w1 * (2 * x4 - 1) + w2 * y4
    py = w2 * x4 + w3 * (2 * y4 - 1)
    qx = w4 * (2 * x4 - 1) + w5 * y4
    qy = w5 * x4 + w6 * (2 * y4 - 1)
    return [
        w1 * w6 - w3 * w4 - d1,
        w1 * (w5 - w6) - (w2 - w3) * w4 - d2 * (1 + w7) ** 2,
        (w2 - w1) * w6 - w3 * (w5 - w4) - d3 * (1 + w8) ** 2,
        w1 * (x4 * x4 - x4) + w2 * x4 * y4 + w3 * (y4 * y4 - y4),
        w4 * (x4 * x4 - x4) + w5 * x4 * y4 + w6 * (y4 * y4 - y4),
        px + qy - t4 * l4,
        px * qy - py * qx - d4 * l4 * l4,
    ]


def _sat_poly() -> MPoly:
    """(1 + w7)(1 + w8)(1 + w7 x4 + w8 y4): L at the marked points p2, p3
    and at p4; solutions with a vanishing factor are degenerate."""
    _, _, _, w7, w8, x4, y4 = MPoly.gens(V7)
    return (1 + w7) * (1 + w8) * (1 + w7 * x4 + w8 * y4)


def _e_residuals(target: TargetSpectrum) -> list[MPoly]:
    """The 36 cleared chart equations E_{i,j} - e_{i,j} E_{0,0} in the seven
    working variables."""
    elim = _elimination_map(target.tau)
    out = []
    for per_chart in _chart_resultants().values():
        e00 = _drop_to_v7(per_chart[(0, 0)].subs(elim))
        for key in E_ORDER[1:]:
            eij = _drop_to_v7(per_chart[key].subs(elim))
            out.append(eij - target.e[key] * e00)
    return out


def build_family_ideal(target: TargetSpectrum, budget: Optional[Budget] = None) -> Ideal:
    """Ideal over Q whose solutions are the parameter vectors realizing the
    target, in variables (w3, w4, w6, w7, w8, x4, y4, m) with the auxiliary
    m enforcing nonvanishing of L at p2, p3, p4.  (The traces at the marked
    points eliminate w1, w2, w5 linearly.)"""
    ring = V7 + ("m",)
    gens = [g.rename(ring) for g in _tau_generators(target.tau)]
    gens += [g.rename(ring) for g in _e_residuals(target)]
    gens.append(MPoly.var(ring, "m") * _sat_poly().rename(ring) - 1)
    return Ideal(gens, budget=budget)


# ---------------------------------------------------------------------------
# the fiber over off-line data, branch by branch
# ---------------------------------------------------------------------------
#
# The residue identities of the auxiliary vector field pin down the
# normalization (a, b, x4, y4) of any realizing map (generically two
# branches).  On a fixed branch the trace equations and the vanishing of
# P, Q at p4 are linear in (w1, ..., w6) with a one-dimensional solution
# line w = base + s * direction; the four determinant equations then cut
# the line in the roots of their gcd g(s).  The fiber over the off-line
# data is the disjoint union of the algebras K[s]/(g) over the branches,
# which keeps every computation univariate.


@dataclass
class _FiberBranch:
    sol: NormalizationSolution
    base: list[Scalar]
    direction: list[Scalar]
    g: list[Scalar]  # monic, ascending in the line parameter s
    field_d: Optional[int]


def _fiber_branches(
    tau: Sequence[Scalar], budget: Optional[Budget] = None
) -> list[_FiberBranch]:
    branches = []
    for sol in solve_normalization(tau, budget=budget):
        rows, rhs = _linear_system(tau, sol)
        base = solve(rows, rhs)
        if base is None:
            continue
        kernel = nullspace(rows)
        if len(kernel) != 1:
            raise NonGenericTau(
                f"expected a one-parameter family of fields, got {len(kernel)} directions"
            )
        direction = kernel[0]
        eqs = _det_equations(tau, sol, base, direction)
        g: Optional[list[Scalar]] = None
        for e in eqs:
            g = e if g is None else unipoly.gcd(g, e)
        g = unipoly.trim(list(g))
        if g and unipoly.degree(g) < 1:
            continue  # determinant equations have no common root on the line
        # g == [] means every point of the line satisfies all equations:
        # the fiber slice is the whole line (positive-dimensional)
        branches.append(
            _FiberBranch(
                sol,
                base,
                direction,
                unipoly.monic(g) if g else [],
                _field_of_branch(sol),
            )
        )
    return branches


def _branch_chart_polys(branch: _FiberBranch) -> list[dict]:
    """Per chart, the resultant coefficients E_{i,j} as univariate
    polynomials (ascending lists) in the line parameter s."""
    ring = ("x", "y", "s")
    x, y, s = MPoly.gens(ring)
    w = [MPoly.const(ring, bb) + s * dd for bb, dd in zip(branch.base, branch.direction)]
    w.append(MPoly.const(ring, branch.sol.a))
    w.append(MPoly.const(ring, branch.sol.b))
    w1, w2, w3, w4, w5, w6, w7, w8 = w
    g_coeffs = [w4, w5 - w1, w6 - w2, -w3]
    m2 = [w7 - w1, w8 - w2, -w3]
    m3 = [-w4, w7 - w5, w8 - w6]
    tr_j = [3 * w7 - 2 * w1 - w5, 3 * w8 - w2 - 2 * w6]
    l_hat = [w7, w8]
    out = []
    for c in CHARTS:
        ell = [MPoly.const(ring, 1), MPoly.const(ring, c)]
        wc = [a + c * b for a, b in zip(m2, m3)]
        uc = [3 * a - b for a, b in zip(wc, _conv(ell, tr_j))]
        vc = [a - b for a, b in zip(wc, _conv(ell, l_hat))]
        h = [wi + x * ui + y * vi for wi, ui, vi in zip(wc, uc, vc)]
        res = sylvester_resultant(g_coeffs, h)
        per = {}
        for (i, j) in E_ORDER:
            coeffs: dict[int, Scalar] = {}
            for mono, coeff in res.terms.items():
                if mono[0] == i and mono[1] == j:
                    coeffs[mono[2]] = coeff
            size = max(coeffs) + 1 if coeffs else 0
            per[(i, j)] = unipoly.trim(
                [coeffs.get(k, rat(0)) for k in range(size)]
            )
        out.append(per)
    return out


# ---------------------------------------------------------------------------
# the realizability test
# ---------------------------------------------------------------------------


def run_test(
    off_pairs: Sequence,
    line_pairs: Sequence,
    budget: Optional[Budget] = None,
) -> TestVerdict:
    """Decide realizability of seven prescribed (u, v) pairs, the last
    three marked as lying on the invariant line.

    A not_realizable verdict is a certificate; a passed verdict asserts
    only membership in the closure of the realizable locus."""
    target = TargetSpectrum.from_pairs(off_pairs, line_pairs)
    return run_test_target(target, budget=budget)


def run_test_target(target: TargetSpectrum, budget: Optional[Budget] = None) -> TestVerdict:
    try:
        branches = _fiber_branches(target.tau, budget=budget)
    except (DegenerateTau, NonGenericTau):
        # degenerate off-line data: fall back to a direct consistency
        # check of the defining ideal
        ideal = build_family_ideal(target, budget=budget)
        if ideal.is_inconsistent():
            return TestVerdict(status="not_realizable", fourth_point_ok=False)
        return TestVerdict(status="passed", fourth_point_ok=True)
    for branch in branches:
        # h == [] stands for the whole line; a nonzero constant h means the
        # branch is already ruled out
        h = branch.g
        dead = False
        for per in _branch_chart_polys(branch):
            e00 = per[(0, 0)]
            for key in E_ORDER[1:]:
                residual = unipoly.sub(per[key], unipoly.scale(e00, target.e[key]))
                h = unipoly.gcd(h, residual)
                if h and unipoly.degree(h) < 1:
                    dead = True
                    break
            if dead:
                break
        if not dead and (not h or unipoly.degree(h) >= 1):
            return TestVerdict(status="passed", fourth_point_ok=True)
    return TestVerdict(status="not_realizable", fourth_point_ok=False)


# ---------------------------------------------------------------------------
# the polynomial h_sigma
# ---------------------------------------------------------------------------

SIGMA_NAMES = {f"e{i}{j}": (i, j) for i, j in E_ORDER[1:]}
E_VARS = tuple(sorted(SIGMA_NAMES))


def _pad(coeffs: Sequence[Scalar], size: int) -> list[Scalar]:
    out = list(coeffs) + [rat(0)] * (size - len(coeffs))
    return out[:size]


def _mod_mul(u: list, v: list, g: list) -> list:
    return unipoly.divmod_poly(unipoly.mul(u, v), g)[1]


def _mult_matrix_mod(u: list, g: list) -> list[list[Scalar]]:
    d = unipoly.degree(g)
    cols = []
    for k in range(d):
        e = [rat(0)] * k + [rat(1)]
        cols.append(_pad(_mod_mul(u, e, g), d))
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _branch_e_vectors(branch: _FiberBranch, keys: Sequence[tuple[int, int]]) -> dict:
    """e_{i,j} as elements of K[s]/(g), via the stacked chart identities
    E00 * e = E (inactive charts contribute vacuous equations)."""
    g = branch.g
    d = unipoly.degree(g)
    per_charts = _branch_chart_polys(branch)
    mults = [
        _mult_matrix_mod(unipoly.divmod_poly(per[(0, 0)], g)[1], g)
        for per in per_charts
    ]
    out = {}
    for key in keys:
        rows: list[list[Scalar]] = []
        rhs: list[Scalar] = []
        for per, m in zip(per_charts, mults):
            rows.extend(m)
            rhs.extend(_pad(unipoly.divmod_poly(per[key], g)[1], d))
        u = solve(rows, rhs)
        if u is None:
            raise NonGenericTau(
                f"the symmetric value e{key[0]}{key[1]} is not single-valued on the fiber"
            )
        out[key] = u
    return out


def _primitive_int(coeffs: Sequence[Scalar]) -> list[int]:
    from gmpy2 import mpq, gcd, lcm

    qs = [mpq(c) for c in coeffs]
    denom = 1
    for c in qs:
        denom = lcm(denom, c.denominator)
    ints = [int(c * denom) for c in qs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g:
        ints = [int(v // g) for v in ints]
    if ints and ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def compute_h(
    sigma: Union[str, MPoly],
    tau: Sequence[Scalar],
    budget: Optional[Budget] = None,
) -> list[int]:
    """Primitive integer polynomial (ascending coefficients, positive
    leading coefficient, degree at most four) whose roots are the values
    sigma takes on the maps realizing the off-line data tau.

    sigma: an e-name like "e10", or a polynomial in the variables
    e10..e30, e01..e21, e12, e02, e03."""
    tau = [rat(x) if not isinstance(x, QE) else x for x in tau]
    if len(tau) != 8:
        raise PreconditionError("tau must list (t1, d1, ..., t4, d4)")
    for k in range(1, 8, 2):
        if is_zero(tau[k]):
            raise PreconditionError("off-line determinants must be nonzero")
    if isinstance(sigma, str):
        if sigma not in SIGMA_NAMES:
            raise PreconditionError(f"unknown symmetric function name: {sigma}")
        sigma = MPoly.var((sigma,), sigma)
    bad = [name for name in sigma.vars if name not in SIGMA_NAMES]
    if bad:
        raise PreconditionError(f"unknown symmetric function names: {bad}")
    try:
        branches = _fiber_branches(tau, budget=budget)
    except DegenerateTau as exc:
        raise NonGenericTau(str(exc)) from exc
    if not branches:
        raise NonGenericTau("no nondegenerate map realizes the off-line data")
    needed = [name for name in sigma.vars if sigma.degree_in(name) > 0]
    product = [rat(1)]
    total_degree = 0
    for branch in branches:
        g = branch.g
        if not g:
            raise NonGenericTau("the off-line data admits a continuum of maps")
        vectors = _branch_e_vectors(
            branch, [SIGMA_NAMES[name] for name in needed]
        )
        value: list[Scalar] = []
        for mono, coeff in sigma.terms.items():
            term = [coeff]
            for name, exp in zip(sigma.vars, mono):
                for _ in range(exp):
                    term = _mod_mul(term, vectors[SIGMA_NAMES[name]], g)
            value = unipoly.add(value, term)
        cp = charpoly(_mult_matrix_mod(unipoly.trim(value), g))
        product = unipoly.mul(product, cp)
        total_degree += unipoly.degree(g)
    if not unipoly.is_rational_poly(product):
        raise NonGenericTau("fiber values do not close up over the rationals")
    h = unipoly.squarefree_part(product)
    if unipoly.degree(h) > 4 or total_degree > 4:
        raise NonGenericTau("fiber carries more than four symmetric values")
    return _primitive_int(h)


# ---------------------------------------------------------------------------
# explicit fiber: normalization and realizing maps
# ---------------------------------------------------------------------------

AB_RING = ("a", "b", "x4", "y4", "l2", "l3", "l4")


@dataclass
class NormalizationSolution:
    a: Scalar
    b: Scalar
    x4: Scalar
    y4: Scalar
    multiplicity: int = 1


def _normalization_ideal(tau: Sequence[Scalar]) -> Ideal:
    """Residue-sum system in (a, b, x4, y4) with the inverse values
    l_i = 1/L(p_i) as auxiliary variables (keeps the generators at degree
    at most three and builds the nonvanishing of L in)."""
    t1, d1, t2, d2, t3, d3, t4, d4 = tau
    a, b, x4, y4, l2, l3, l4 = MPoly.gens(AB_RING)
    c = [1 / rat(d) if not isinstance(d, QE) else d.inverse() for d in (d1, d2, d3, d4)]
    e = [t / d for t, d in ((t1, d1), (t2, d2), (t3, d3), (t4, d4))]
    jac1 = c[0] + c[1] * l2 * l2 + c[2] * l3 * l3 + c[3] * l4 * l4
    jac2 = c[1] * l2 * l2 + c[3] * x4 * l4 * l4
    jac3 = c[2] * l3 * l3 + c[3] * y4 * l4 * l4
    jac4 = e[0] + e[1] * l2 + e[2] * l3 + e[3] * l4
    jac5 = c[0] + c[1] * l2 + c[2] * l3 + c[3] * l4
    inv2 = l2 * (1 + a) - 1
    inv3 = l3 * (1 + b) - 1
    inv4 = l4 * (1 + a * x4 + b * y4) - 1
    return Ideal([jac1, jac2, jac3, jac4, jac5, inv2, inv3, inv4])


def solve_normalization(
    tau: Sequence[Scalar], budget: Optional[Budget] = None
) -> list[NormalizationSolution]:
    """Solutions (a, b, x4, y4) of the residue-sum system under the
    normalization p1 = (0,0), p2 = (1,0), p3 = (0,1), constant term of L
    equal to 1; b satisfies a quadratic equation and the other three
    coordinates are determined by its root."""
    tau = [rat(x) if not isinstance(x, QE) else x for x in tau]
    for k in range(1, 8, 2):
        if is_zero(tau[k]):
            raise PreconditionError("determinants must be nonzero")
    ideal = _normalization_ideal(tau)
    if budget is not None:
        ideal.budget = budget
    if ideal.is_inconsistent():
        raise DegenerateTau("the residue-sum system has no nondegenerate solution")
    try:
        alg = QuotientAlgebra(ideal)
    except PreconditionError as exc:
        raise DegenerateTau(f"normalization fiber is not finite: {exc}") from exc
    out = []
    for cl in _split_points(alg, ("a", "b", "x4", "y4"), None, None):
        if cl.coords is None:
            raise DegenerateTau("normalization solution needs a deeper extension")
        a, b, x4, y4 = cl.coords
        out.append(NormalizationSolution(a, b, x4, y4, multiplicity=cl.multiplicity))
    out.sort(key=lambda sol: scalar_to_str(sol.b))
    return out


@dataclass
class RealizationResult:
    maps: list[QuadraticMapP2]
    count: int  # solutions of the defining ideal, with multiplicity
    params: list[tuple[Scalar, ...]]


def _linear_system(tau, sol: NormalizationSolution):
    """Coefficient rows and right sides of the six equations linear in
    w1..w6 for a fixed normalization branch."""
    t1, d1, t2, d2, t3, d3, t4, d4 = tau
    a, b, x4, y4 = sol.a, sol.b, sol.x4, sol.y4
    zero, one = rat(0), rat(1)
    l4 = 1 + a * x4 + b * y4
    rows = [
        [one, zero, zero, zero, zero, one],
        [one, zero, zero, zero, one, -one],
        [-one, one, zero, zero, zero, one],
        [x4 * x4 - x4, x4 * y4, y4 * y4 - y4, zero, zero, zero],
        [zero, zero, zero, x4 * x4 - x4, x4 * y4, y4 * y4 - y4],
        [2 * x4 - 1, y4, zero, zero, x4, 2 * y4 - 1],
    ]
    rhs = [
        -t1,
        t2 * (1 + a),
        t3 * (1 + b),
        zero,
        zero,
        t4 * l4,
    ]
    return rows, rhs


def _det_equations(tau, sol: NormalizationSolution, base, direction):
    """The four determinant equations as univariate polynomials in the line
    parameter s along w = base + s * direction."""
    t1, d1, t2, d2, t3, d3, t4, d4 = tau
    a, b, x4, y4 = sol.a, sol.b, sol.x4, sol.y4
    ring = ("s",)
    s = MPoly.var(ring, "s")
    w = [MPoly.const(ring, bb) + s * dd for bb, dd in zip(base, direction)]
    w1, w2, w3, w4, w5, w6 = w
    l4 = 1 + a * x4 + b * y4
    px = w1 * (2 * x4 - 1) + w2 * y4
    py = w2 * x4 + w3 * (2 * y4 - 1)
    qx = w4 * (2 * x4 - 1) + w5 * y4
    qy = w5 * x4 + w6 * (2 * y4 - 1)
    eqs = [
        w1 * w6 - w3 * w4 - d1,
        w1 * (w5 - w6) - (w2 - w3) * w4 - d2 * (1 + a) ** 2,
        (w2 - w1) * w6 - w3 * (w5 - w4) - d3 * (1 + b) ** 2,
        px * qy - py * qx - d4 * l4 * l4,
    ]
    return [e.univariate_in("s") for e in eqs]


def realize_maps(
    tau: Sequence[Scalar], budget: Optional[Budget] = None
) -> RealizationResult:
    """The maps realizing generic off-line data: two normalization branches
    with two maps each.  Maps whose parameters need a deeper extension than
    one square root are counted but not listed."""
    tau = [rat(x) if not isinstance(x, QE) else x for x in tau]
    maps: list[QuadraticMapP2] = []
    params: list[tuple[Scalar, ...]] = []
    count = 0
    for branch in _fiber_branches(tau, budget=budget):
        if not branch.g:
            raise NonGenericTau("the off-line data admits a continuum of maps")
        count += unipoly.degree(branch.g)
        try:
            roots, _residual = unipoly.roots_with_multiplicity(
                branch.g, branch.field_d
            )
        except TowerTooDeep:
            roots = []
        for s0, _mult in roots:
            w16 = [bb + s0 * dd for bb, dd in zip(branch.base, branch.direction)]
            w = tuple(w16) + (branch.sol.a, branch.sol.b)
            params.append(w)
            try:
                maps.append(param_map(w))
            except PreconditionError:
                continue
    return RealizationResult(maps=maps, count=count, params=params)


def _field_of_branch(sol: NormalizationSolution) -> Optional[int]:
    for v in (sol.a, sol.b, sol.x4, sol.y4):
        if isinstance(v, QE):
            return v.d
    return None


# ---------------------------------------------------------------------------
# rank of the spectral map
# ---------------------------------------------------------------------------


def spectral_rank(w: Sequence[Scalar]) -> int:
    """Rank over the coefficient field of the 8x8 derivative of
    w -> (t1, d1, t2, d2, t3, d3, t4, d4)."""
    w = [rat(x) if not isinstance(x, QE) else x for x in w]
    nf = param_normal_form(w)
    f = normal_form_to_map(nf)
    marked = [
        (rat(1), rat(0), rat(0)),
        (rat(1), rat(1), rat(0)),
        (rat(1), rat(0), rat(1)),
    ]
    nf_full, _ = affine_normal_form(f, LineP2((rat(1), rat(0), rat(0))), marked)
    x4, y4 = nf_full.p4

    ring = W8 + XY
    wv = {name: MPoly.var(ring, name) for name in W8}
    x, y = MPoly.var(ring, "x"), MPoly.var(ring, "y")
    p = wv["w1"] * (x * x - x) + wv["w2"] * x * y + wv["w3"] * (y * y - y)
    q = wv["w4"] * (x * x - x) + wv["w5"] * x * y + wv["w6"] * (y * y - y)
    l = 1 + wv["w7"] * x + wv["w8"] * y

    point = list(w) + [x4, y4]

    def ev(poly: MPoly) -> Scalar:
        return poly.evaluate(point)

    # implicit derivatives of (x4, y4): J_PQ * d(x4,y4)/dwk = -(dP/dwk, dQ/dwk)
    jpq = [[ev(p.diff("x")), ev(p.diff("y"))], [ev(q.diff("x")), ev(q.diff("y"))]]
    dpoint = {}
    for name in W8:
        rhs = [-ev(p.diff(name)), -ev(q.diff(name))]
        d = solve(jpq, rhs)
        if d is None:
            raise DegenerateFixedPoint("the fourth fixed point is degenerate")
        dpoint[name] = d

    lp2 = 1 + wv["w7"]
    lp3 = 1 + wv["w8"]
    l4 = l
    px = p.diff("x")
    py = p.diff("y")
    qx = q.diff("x")
    qy = q.diff("y")

    # (numerator, denominator, evaluation point) per spectral coordinate;
    # overall signs do not affect the rank
    one = MPoly.const(ring, 1)
    specs = [
        (px + qy, one, (rat(0), rat(0)), False),
        (px * qy - py * qx, one, (rat(0), rat(0)), False),
        (px + qy, lp2, (rat(1), rat(0)), False),
        (px * qy - py * qx, lp2 * lp2, (rat(1), rat(0)), False),
        (px + qy, lp3, (rat(0), rat(1)), False),
        (px * qy - py * qx, lp3 * lp3, (rat(0), rat(1)), False),
        (px + qy, l4, (x4, y4), True),
        (px * qy - py * qx, l4 * l4, (x4, y4), True),
    ]
    rows = []
    for num, den, pt, moving in specs:
        pt_full = list(w) + [pt[0], pt[1]]
        nval = num.evaluate(pt_full)
        dval = den.evaluate(pt_full)
        if is_zero(dval):
            raise DegenerateFixedPoint("L vanishes at a marked fixed point")
        dinv = dval.inverse() if isinstance(dval, QE) else 1 / dval
        row = []
        for name in W8:
            dn = num.diff(name).evaluate(pt_full)
            dd = den.diff(name).evaluate(pt_full)
            if moving:
                dx, dy = dpoint[name]
                dn = dn + num.diff("x").evaluate(pt_full) * dx + num.diff("y").evaluate(pt_full) * dy
                dd = dd + den.diff("x").evaluate(pt_full) * dx + den.diff("y").evaluate(pt_full) * dy
            row.append((dval * dn - nval * dd) * dinv * dinv)
        rows.append(row)
    return rank(rows)
