"""Algebraic relations among multiplier spectra.

For a quadratic self-map of P^2 with an invariant line and seven
nondegenerate fixed points, the pairs (u_i, v_i) of eigenvalues of I - Df
satisfy five rational identities: three holomorphic-Lefschetz sums over all
seven points and two more over the three on-line points.  This module
evaluates those residuals exactly, together with:

* the Jacobi residue sums of the auxiliary planar field H = P dx + Q dy,
* elementary symmetric data of a triple of (u, v) pairs and the Mattuck
  completion expressing the remaining symmetric functions in terms of the
  six generating ones,
* the reduced relations R0, R1, R2 in the coordinates (p, q, r, s) of the
  constraint plane, and the certificate that they are algebraically
  independent of the coordinate p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DegenerateFixedPoint, DiscriminantZero
from .groebner import Ideal
from .linalg import det, trace
from .poly import MPoly
from .projmap import (
    AffineNormalForm,
    SpectrumRecord,
    auxiliary_vf,
    relative_fixed_point_sum,
)
from .scalars import QE, Scalar, is_zero, rat, scalar_to_str

__all__ = [
    "BetaTriple",
    "SymmetricProfile",
    "RelationReport",
    "check_known_relations",
    "known_relation_residuals",
    "jacobi_residues",
    "symmetric_profile",
    "discriminant",
    "mattuck_complete",
    "cleared_relation_values",
    "reduced_relation_polys",
    "reduced_relations",
    "independence_certificate",
    "relative_fixed_point_sum",
]


def _inv(x: Scalar) -> Scalar:
    if is_zero(x):
        raise DegenerateFixedPoint("division by a vanishing multiplier datum")
    return x.inverse() if isinstance(x, QE) else 1 / x


@dataclass(frozen=True)
class BetaTriple:
    """The three combinations beta_k = 3^k - sum t_i^k / d_i over the four
    off-line fixed points."""

    beta0: Scalar
    beta1: Scalar
    beta2: Scalar

    @classmethod
    def from_tau(cls, tau: Sequence) -> "BetaTriple":
        """tau: four (t_i, d_i) pairs, or the flat tuple (t1, d1, ..., t4, d4)."""
        pairs = _as_pairs(tau, 4)
        b0, b1, b2 = rat(1), rat(3), rat(9)
        for t, d in pairs:
            dinv = _inv(d)
            b0 = b0 - dinv
            b1 = b1 - t * dinv
            b2 = b2 - t * t * dinv
        return cls(b0, b1, b2)

    def as_tuple(self):
        return (self.beta0, self.beta1, self.beta2)


def _as_pairs(data: Sequence, count: int) -> list[tuple[Scalar, Scalar]]:
    items = list(data)
    if len(items) == 2 * count and not isinstance(items[0], (tuple, list)):
        items = [(items[2 * i], items[2 * i + 1]) for i in range(count)]
    if len(items) != count:
        raise ValueError(f"expected {count} pairs")
    return [(a, b) for a, b in items]


@dataclass
class RelationReport:
    """Exact residuals of the five multiplier identities."""

    lefschetz: Scalar       # sum of 1/(u_i v_i) over all seven points, minus 1
    trace_sum: Scalar       # sum of (u_i + v_i)/(u_i v_i), minus 4
    square_sum: Scalar      # sum of (u_i + v_i)^2/(u_i v_i), minus 16
    line_inverse: Scalar    # sum of 1/u_i over the line points, minus 1
    line_ratio: Scalar      # sum of v_i/u_i over the line points, minus 1

    def residuals(self) -> tuple[Scalar, ...]:
        return (
            self.lefschetz,
            self.trace_sum,
            self.square_sum,
            self.line_inverse,
            self.line_ratio,
        )

    @property
    def all_zero(self) -> bool:
        return all(is_zero(r) for r in self.residuals())

    def to_json(self) -> dict:
        names = ("lefschetz", "trace_sum", "square_sum", "line_inverse", "line_ratio")
        out = {n: scalar_to_str(r) for n, r in zip(names, self.residuals())}
        out["all_zero"] = self.all_zero
        return out


def known_relation_residuals(
    all_td: Sequence, on_line_uv: Sequence
) -> RelationReport:
    """Residuals from raw data: seven (t, d) pairs and the three on-line
    (u, v) pairs (where t = u + v, d = u v)."""
    td = _as_pairs(all_td, 7)
    uv = _as_pairs(on_line_uv, 3)
    s1 = sum((_inv(d) for _, d in td), rat(0)) - 1
    s2 = sum((t * _inv(d) for t, d in td), rat(0)) - 4
    s3 = sum((t * t * _inv(d) for t, d in td), rat(0)) - 16
    s4 = sum((_inv(u) for u, _ in uv), rat(0)) - 1
    s5 = sum((v * _inv(u) for u, v in uv), rat(0)) - 1
    return RelationReport(s1, s2, s3, s4, s5)


def check_known_relations(s: SpectrumRecord) -> RelationReport:
    """The five residuals for a computed spectrum; all vanish for a genuine
    map."""
    records = list(s.off_line) + list(s.on_line)
    for r in records:
        if r.t is None or r.d is None:
            raise DegenerateFixedPoint("a fixed point lacks exact (t, d) data")
    for r in s.on_line:
        if r.uv is None:
            raise DegenerateFixedPoint("an on-line fixed point lacks its (u, v) pair")
    return known_relation_residuals(
        [(r.t, r.d) for r in records], [r.uv for r in s.on_line]
    )


# ---------------------------------------------------------------------------
# Jacobi residue sums of the auxiliary field
# ---------------------------------------------------------------------------

_BASE_POINTS = ((rat(0), rat(0)), (rat(1), rat(0)), (rat(0), rat(1)))


def jacobi_residues(nf: AffineNormalForm, spectra: Sequence) -> tuple[Scalar, ...]:
    """The five residue sums of H = P dx + Q dy over its four singular
    points (0,0), (1,0), (0,1), p4:

        sum 1/(L^2 d),  sum x/(L^2 d),  sum y/(L^2 d),
        sum t/(L d),    sum 1/(L d);

    spectra supplies the (t_i, d_i) in that point order.  All five vanish
    for the field of a genuine map."""
    pairs = _as_pairs(spectra, 4)
    points = list(_BASE_POINTS) + [nf.p4]
    sums = [rat(0)] * 5
    for (t, d), pt in zip(pairs, points):
        lval = nf.L.evaluate(list(pt))
        if is_zero(lval) or is_zero(d):
            raise DegenerateFixedPoint("L or det(I - Df) vanishes at a singular point")
        w2 = _inv(lval * lval * d)
        w1 = _inv(lval * d)
        sums[0] = sums[0] + w2
        sums[1] = sums[1] + pt[0] * w2
        sums[2] = sums[2] + pt[1] * w2
        sums[3] = sums[3] + t * w1
        sums[4] = sums[4] + w1
    return tuple(sums)


def jacobi_residues_of_spectrum(
    nf: AffineNormalForm, s: SpectrumRecord
) -> tuple[Scalar, ...]:
    """Convenience wrapper matching off-line records to the normal-form
    points by evaluating P, Q placement: records must be in the order
    (0,0), (1,0), (0,1), p4 after normalization."""
    h = auxiliary_vf(nf)
    pairs = []
    for pt in list(_BASE_POINTS) + [nf.p4]:
        j = h.jacobian_at(pt)
        lval = nf.L.evaluate(list(pt))
        if is_zero(lval):
            raise DegenerateFixedPoint("L vanishes at a singular point")
        linv = _inv(lval)
        pairs.append((trace(j) * linv, det(j) * linv * linv))
    return jacobi_residues(nf, pairs)


# ---------------------------------------------------------------------------
# symmetric functions of a triple of (u, v) pairs
# ---------------------------------------------------------------------------

E_KEYS = ((1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (1, 2), (0, 2), (0, 3))


@dataclass
class SymmetricProfile:
    """The nine elementary symmetric values e_{i,j} of three (u, v) pairs,
    defined by prod_k (1 + x u_k + y v_k) = sum e_{i,j} x^i y^j, together
    with the u-cubic discriminant and the plane coordinates
    (p, q, r, s) = (e10, e30, e01, e11)."""

    e: dict[tuple[int, int], Scalar]

    @property
    def delta(self) -> Scalar:
        return discriminant(self.e[(1, 0)], self.e[(2, 0)], self.e[(3, 0)])

    @property
    def pqrs(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.e[(1, 0)], self.e[(3, 0)], self.e[(0, 1)], self.e[(1, 1)])

    def generators(self) -> tuple[Scalar, ...]:
        """(e10, e20, e30, e01, e11, e21) — the six free generators."""
        return tuple(self.e[k] for k in E_KEYS[:6])

    def to_json(self) -> dict:
        return {
            f"e{i}{j}": scalar_to_str(self.e[(i, j)]) for i, j in E_KEYS
        } | {"delta": scalar_to_str(self.delta)}


def symmetric_profile(pairs: Sequence) -> SymmetricProfile:
    """Expand prod (1 + x u_k + y v_k) for three pairs."""
    triple = _as_pairs(pairs, 3)
    # polynomial in (x, y), coefficients indexed by (i, j)
    acc: dict[tuple[int, int], Scalar] = {(0, 0): rat(1)}
    for u, v in triple:
        nxt: dict[tuple[int, int], Scalar] = {}
        for (i, j), c in acc.items():
            for di, dj, w in ((0, 0, rat(1)), (1, 0, u), (0, 1, v)):
                key = (i + di, j + dj)
                cur = nxt.get(key)
                val = c * w
                nxt[key] = val if cur is None else cur + val
        acc = nxt
    e = {k: acc.get(k, rat(0)) for k in E_KEYS}
    return SymmetricProfile(e=e)


def discriminant(e10: Scalar, e20: Scalar, e30: Scalar) -> Scalar:
    """Discriminant of the cubic with elementary symmetric values
    (e10, e20, e30)."""
    return (
        27 * e30 * e30
        - e20 * e20 * e10 * e10
        + 4 * e20 * e20 * e20
        + 4 * e30 * e10 * e10 * e10
        - 18 * e30 * e20 * e10
    )


def mattuck_complete(
    e10: Scalar, e20: Scalar, e30: Scalar, e01: Scalar, e11: Scalar, e21: Scalar
) -> tuple[Scalar, Scalar, Scalar]:
    """Recover (e12, e02, e03) from the six generating symmetric values.

    These are the closed forms of Mattuck's rationality theorem for
    (C^2)^3 / S_3; they require the u-discriminant to be nonzero."""
    delta = discriminant(e10, e20, e30)
    if is_zero(delta):
        raise DiscriminantZero("the three u-values have a repeated root")
    dinv = _inv(delta)
    d_e12 = (
        -e30 * e20 * e11 * e10 * e01
        - e21 * e20 * e11 * e10 * e10
        - 3 * e30 * e20 * e11 * e11
        + 2 * e30 * e21 * e10 * e10 * e01
        - 3 * e30 * e21 * e11 * e10
        - 6 * e30 * e21 * e20 * e01
        + e30 * e11 * e11 * e10 * e10
        + e21 * e21 * e10 * e10 * e10
        + 9 * e30 * e21 * e21
        + 9 * e30 * e30 * e11 * e01
        + 4 * e21 * e20 * e20 * e11
        - 4 * e21 * e21 * e20 * e10
        + e30 * e20 * e20 * e01 * e01
        - 3 * e30 * e30 * e10 * e01 * e01
    )
    d_e02 = (
        -e21 * e20 * e11 * e10
        - e20 * e20 * e11 * e10 * e01
        + 4 * e30 * e11 * e10 * e10 * e01
        - 4 * e30 * e20 * e10 * e01 * e01
        - 3 * e30 * e20 * e11 * e01
        - 6 * e30 * e21 * e10 * e01
        - 3 * e21 * e21 * e20
        + e20 * e20 * e11 * e11
        + e20 * e20 * e20 * e01 * e01
        + e21 * e21 * e10 * e10
        + 2 * e21 * e20 * e20 * e01
        + 9 * e30 * e30 * e01 * e01
        + 9 * e30 * e21 * e11
        - 3 * e30 * e11 * e11 * e10
    )
    d_e03 = (
        -e21 * e21 * e11 * e10
        + e21 * e20 * e11 * e11
        + e21 * e20 * e20 * e01 * e01
        + e21 * e21 * e10 * e10 * e01
        - 2 * e21 * e21 * e20 * e01
        - e30 * e20 * e11 * e01 * e01
        + e30 * e11 * e11 * e10 * e01
        - e30 * e11 * e11 * e11
        + e30 * e30 * e01 * e01 * e01
        - e21 * e20 * e11 * e10 * e01
        + e21 * e21 * e21
        - 2 * e30 * e21 * e10 * e01 * e01
        + 3 * e30 * e21 * e11 * e01
    )
    return (d_e12 * dinv, d_e02 * dinv, d_e03 * dinv)


# ---------------------------------------------------------------------------
# cleared relations between the off-line and on-line data
# ---------------------------------------------------------------------------


def cleared_relation_values(
    profile: SymmetricProfile, beta: BetaTriple
) -> tuple[Scalar, ...]:
    """The five denominator-cleared relations linking the nine symmetric
    values to (beta0, beta1, beta2); all vanish for realizable data.

    g1 = e30 - e21, g2 = e30 - e20,
    g3 = beta2 e03 - e12, g4 = beta1 e03 - e02,
    g5 = 3 beta0 e30 e03
         - (e11^2 - e20 e02 - e21 e01 - e12 e10 + e20 e01^2 + e02 e10^2
            - e11 e10 e01).
    """
    e = profile.e
    e10, e20, e30 = e[(1, 0)], e[(2, 0)], e[(3, 0)]
    e01, e11, e21 = e[(0, 1)], e[(1, 1)], e[(2, 1)]
    e12, e02, e03 = e[(1, 2)], e[(0, 2)], e[(0, 3)]
    g1 = e30 - e21
    g2 = e30 - e20
    g3 = beta.beta2 * e03 - e12
    g4 = beta.beta1 * e03 - e02
    g5 = 3 * beta.beta0 * e30 * e03 - (
        e11 * e11
        - e20 * e02
        - e21 * e01
        - e12 * e10
        + e20 * e01 * e01
        + e02 * e10 * e10
        - e11 * e10 * e01
    )
    return (g1, g2, g3, g4, g5)


# ---------------------------------------------------------------------------
# reduced relations on the constraint plane
# ---------------------------------------------------------------------------

PQRS = ("p", "q", "r", "s")


def _theta() -> MPoly:
    p, q, r, s = MPoly.gens(PQRS)
    return (
        q * q
        + q * s * s
        + q * q * r * r
        + q * p * p * r
        - q * s * r * r
        - 2 * q * p * r * r
        + 3 * q * s * r
        - s * s * s
        + s * s * p * r
        - q * s * p * r
        + q * r * r * r
        - q * s * p
        - 2 * q * q * r
    )


def reduced_relation_polys(beta: BetaTriple) -> tuple[MPoly, MPoly, MPoly]:
    """R0, R1, R2 as polynomials in (p, q, r, s) for fixed beta values.

    The shared correction term Theta is built once; R_k subtracts
    beta_k * Theta."""
    p, q, r, s = MPoly.gens(PQRS)
    theta = _theta()
    r0 = (
        4 * s * p * p
        - 4 * p * p * p * r
        - 3 * q * s
        - 12 * s * p * r
        - q * s * p * r
        - 4 * s * s * p
        - 5 * q * p * r * r
        + q * s * r
        - q * s * p
        + q * p * p * r
        + 10 * q * p * r
        + 4 * s * p * p * r
        + 9 * s * s
        + q * s * s
        + q * q * r * r
        + q * q
        - 3 * q * p
        + 4 * p * p * r * r
        + 6 * q * r * r
        - 9 * q * r
        - 2 * q * q * r
        - theta * beta.beta0
    )
    r1 = (
        q * q * r * r
        + q * p * p
        + q * s * s
        - 3 * s * s * p
        + 9 * q * s
        + 2 * q * q * r
        - 3 * q * q
        + 9 * q * r * r
        + 4 * s * p * p * r
        - 4 * q * p * r * r
        - 3 * q * s * r
        - 6 * q * p * r
        - q * s * p
        - q * s * p * r
        - theta * beta.beta1
    )
    r2 = (
        q * q * r * r
        - q * s * p * r
        - q * s * p * p
        - 3 * q * s * s
        + 4 * q * q * s
        + s * s * p * p
        - 3 * q * s * p
        + q * p * p * p
        + 9 * q * s * r
        + 9 * q * q
        - 3 * q * p * r * r
        - 6 * q * q * r
        + 2 * q * p * p * r
        - 4 * q * q * p
        - theta * beta.beta2
    )
    return (r0, r1, r2)


def reduced_relations(pqrs: Sequence[Scalar], beta: BetaTriple) -> tuple[Scalar, ...]:
    """Evaluate (R0, R1, R2) at a point of the (p, q, r, s) plane."""
    point = [rat(x) if not isinstance(x, QE) else x for x in pqrs]
    if len(point) != 4:
        raise ValueError("expected four plane coordinates (p, q, r, s)")
    return tuple(poly.evaluate(point) for poly in reduced_relation_polys(beta))


def independence_certificate(beta: BetaTriple) -> bool:
    """True when the Jacobian determinant of (p, R0, R1, R2) with respect
    to (p, q, r, s) is not in the ideal generated by R0, R1, R2.

    Since the first coordinate is p itself, the 4x4 determinant reduces to
    the 3x3 block in the (q, r, s) partials."""
    polys = reduced_relation_polys(beta)
    rows = [[f.diff(v) for v in ("q", "r", "s")] for f in polys]
    jac = (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    )
    ideal = Ideal(list(polys))
    return not ideal.contains(jac)
