import pytest
from hypothesis import given, settings, strategies as st

from quadspec.errors import (
    CollinearMarkedPoints,
    DegenerateMap,
    NoInvariantLine,
    NonSimpleLineFixedPoint,
    PointOnLine,
    PreconditionError,
)
from quadspec.linalg import det, trace
from quadspec.poly import MPoly
from quadspec.projmap import (
    AffineNormalForm,
    HomQuadVF,
    LineP2,
    QuadraticMapP2,
    Z3,
    affine_normal_form,
    auxiliary_vf,
    conjugate_map,
    fixed_points,
    invariant_lines,
    kowalevski_exponents,
    normal_form_to_map,
    relative_fixed_point_sum,
    spectrum,
    vf_to_map,
)
from quadspec.scalars import QE, rat

Z1, Z2, Z3G = MPoly.gens(Z3)
X, Y = MPoly.gens(("x", "y"))

LINE_Z1 = LineP2((rat(1), rat(0), rat(0)))


def case_study_map() -> QuadraticMapP2:
    return QuadraticMapP2(
        [
            Z1 * (Z1 + 4 * Z2 + 2 * Z3G),
            2 * Z1 * Z2 + 3 * Z2 * Z2,
            4 * Z1 * Z3G + 5 * Z2 * Z3G - Z3G * Z3G,
        ]
    )


def squaring_map() -> QuadraticMapP2:
    return QuadraticMapP2([Z1 * Z1, Z2 * Z2, Z3G * Z3G])


# -- fixed points ---------------------------------------------------------


def test_squaring_map_has_seven_simple_fixed_points():
    recs = fixed_points(squaring_map())
    assert sum(r.multiplicity for r in recs) == 7
    pts = {r.point for r in recs}
    assert len(pts) == 7
    one, zero = rat(1), rat(0)
    assert (one, one, one) in pts
    assert (zero, zero, one) in pts
    assert (zero, one, zero) in pts
    # at [1:1:1] the map is z -> z^2, Df = 2I, so I - Df = -I
    rec = next(r for r in recs if r.point == (one, one, one))
    assert (rec.t, rec.d) == (rat(-2), rat(1))


def test_case_study_fixed_point_data():
    recs = fixed_points(case_study_map())
    assert sum(r.multiplicity for r in recs) == 7
    by_point = {r.point: r for r in recs}
    one, zero = rat(1), rat(0)

    expected = {
        (one, zero, zero): (rat(-4), rat(3)),
        (one, one, zero): (rat(-3, 5), rat(-4, 25)),
        (one, zero, one): (rat(4, 3), rat(1, 3)),
        (one, rat(-3, 5), rat(4, 5)): (rat(9), rat(-60)),
        (zero, one, zero): (rat(-1), rat(2, 9)),
        (zero, one, rat(2)): (rat(-1), rat(-10, 9)),
        (zero, zero, one): (rat(4), rat(3)),
    }
    assert set(by_point) == set(expected)
    for pt, (t, d) in expected.items():
        rec = by_point[pt]
        assert rec.multiplicity == 1
        assert (rec.t, rec.d) == (t, d)

    p4 = by_point[(one, rat(-3, 5), rat(4, 5))]
    assert p4.uv is not None and {v.d for v in p4.uv} == {321}


def test_multiple_fixed_point_multiplicity():
    # z -> z^2 + z in the affine chart keeps 0 as a multiple fixed point
    f = QuadraticMapP2([Z1 * Z1, Z2 * Z1 + Z2 * Z2, Z3G * Z1 + Z3G * Z3G])
    recs = fixed_points(f)
    assert sum(r.multiplicity for r in recs) == 7
    origin = next(r for r in recs if r.point == (rat(1), rat(0), rat(0)))
    assert origin.multiplicity == 4


def test_irrational_class_reported_with_factor():
    # (x, y) -> (x - (x^2 - y), y - (y^2 - 2x)) fixes the cubic locus x^3 = 2
    f = QuadraticMapP2(
        [
            Z1 * Z1,
            Z1 * Z2 - (Z2 * Z2 - Z1 * Z3G),
            Z1 * Z3G - (Z3G * Z3G - 2 * Z1 * Z2),
        ]
    )
    recs = fixed_points(f)
    assert sum(r.multiplicity for r in recs) == 7
    cubic = [r for r in recs if r.point is None]
    assert len(cubic) == 1 and cubic[0].multiplicity == 3
    assert cubic[0].class_factor is not None


def test_degenerate_map_rejected():
    with pytest.raises(DegenerateMap):
        QuadraticMapP2([Z1 * Z1, Z1 * Z2, Z1 * Z3G]).validate()


def test_json_round_trip():
    f = case_study_map()
    again = QuadraticMapP2.from_json(f.to_json())
    assert again == f
    s2 = QE(0, 1, 2)
    g = QuadraticMapP2([Z1 * Z1 * s2, Z2 * Z2, Z3G * Z3G])
    assert QuadraticMapP2.from_json(g.to_json()) == g


# -- invariant lines ------------------------------------------------------


def test_case_study_invariant_lines_are_coordinate_lines():
    coeff_sets = {l.coeffs for l in invariant_lines(case_study_map())}
    one, zero = rat(1), rat(0)
    assert coeff_sets == {
        (one, zero, zero),
        (zero, one, zero),
        (zero, zero, one),
    }


def test_generic_perturbation_loses_lines():
    f = QuadraticMapP2(
        [
            Z1 * Z1 + Z2 * Z3G,
            Z2 * Z2 + 2 * Z1 * Z3G + Z1 * Z1,
            Z3G * Z3G + 3 * Z1 * Z2 + Z1 * Z1,
        ]
    )
    for line in invariant_lines(f):
        # every reported line must actually be invariant
        form = line.form()
        pulled = form.subs(
            {"z1": f.components[0], "z2": f.components[1], "z3": f.components[2]}
        )
        q, r = _poly_div_by_linear(pulled, form)
        assert r.is_zero()


def _poly_div_by_linear(p: MPoly, l: MPoly):
    # reduce p modulo the linear form l (single-generator ideal membership)
    from quadspec.groebner import Ideal

    ideal = Ideal([l])
    return None, ideal.normal_form(p)


# -- spectrum -------------------------------------------------------------


def test_case_study_spectrum_splits_and_orders_multipliers():
    sp = spectrum(case_study_map(), LINE_Z1)
    assert len(sp.off_line) == 4 and len(sp.on_line) == 3
    off = {r.point: (r.t, r.d) for r in sp.off_line}
    assert off[(rat(1), rat(0), rat(0))] == (rat(-4), rat(3))
    assert off[(rat(1), rat(1), rat(0))] == (rat(-3, 5), rat(-4, 25))
    assert off[(rat(1), rat(0), rat(1))] == (rat(4, 3), rat(1, 3))
    assert off[(rat(1), rat(-3, 5), rat(4, 5))] == (rat(9), rat(-60))
    on = {r.point: r.uv for r in sp.on_line}
    # u is the eigenvalue of I - Df tangent to the line
    assert on[(rat(0), rat(1), rat(0))] == (rat(-2, 3), rat(-1, 3))
    assert on[(rat(0), rat(1), rat(2))] == (rat(2, 3), rat(-5, 3))
    assert on[(rat(0), rat(0), rat(1))] == (rat(1), rat(3))


def test_spectrum_requires_invariant_line():
    with pytest.raises(NoInvariantLine):
        spectrum(case_study_map(), LineP2((rat(1), rat(1), rat(0))))


def test_spectrum_relations_on_case_study():
    sp = spectrum(case_study_map(), LINE_Z1)
    total = rat(0)
    for r in sp.off_line + sp.on_line:
        total += 1 / r.d
    assert total == 1  # sum of 1/(u_i v_i) over all seven points
    on_sum = sum((1 / r.uv[0] for r in sp.on_line), rat(0))
    assert on_sum == 1  # sum of 1/u_i over the line points
    on_ratio = sum((r.uv[1] / r.uv[0] for r in sp.on_line), rat(0))
    assert on_ratio == 1  # sum of v_i/u_i over the line points


# -- affine normal form ---------------------------------------------------

MARKED = [
    (rat(1), rat(0), rat(0)),
    (rat(1), rat(1), rat(0)),
    (rat(1), rat(0), rat(1)),
]


def test_case_study_normal_form():
    nf, _ = affine_normal_form(case_study_map(), LINE_Z1, MARKED)
    assert nf.L == 1 + 4 * X + 2 * Y
    assert nf.P == X * X + 2 * X * Y - X
    assert nf.Q == 3 * Y * Y - X * Y - 3 * Y
    assert nf.p4 == (rat(-3, 5), rat(4, 5))
    assert (nf.a, nf.b) == (rat(4), rat(2))
    assert normal_form_to_map(nf) == case_study_map()


def test_normal_form_rejects_bad_marks():
    with pytest.raises(PointOnLine):
        affine_normal_form(
            case_study_map(), LINE_Z1, [(rat(0), rat(1), rat(0))] + MARKED[1:]
        )
    collinear = [
        (rat(1), rat(0), rat(0)),
        (rat(1), rat(1), rat(0)),
        (rat(1), rat(2), rat(0)),
    ]
    with pytest.raises(CollinearMarkedPoints):
        affine_normal_form(case_study_map(), LINE_Z1, collinear)
    not_fixed = [MARKED[0], (rat(1), rat(5), rat(7)), MARKED[2]]
    with pytest.raises(PreconditionError):
        affine_normal_form(case_study_map(), LINE_Z1, not_fixed)


def test_auxiliary_field_jacobian_identity():
    # DH at each singular point equals L(p) (I - Df|p): compare trace and det
    nf, _ = affine_normal_form(case_study_map(), LINE_Z1, MARKED)
    vf = auxiliary_vf(nf)
    assert vf.has_isolated_singularities()
    data = [
        ((rat(0), rat(0)), rat(-4), rat(3)),
        ((rat(1), rat(0)), rat(-3, 5), rat(-4, 25)),
        ((rat(0), rat(1)), rat(4, 3), rat(1, 3)),
        (nf.p4, rat(9), rat(-60)),
    ]
    for pt, t, d in data:
        lval = nf.L.evaluate(list(pt))
        j = vf.jacobian_at(pt)
        assert trace(j) == lval * t
        assert det(j) == lval * lval * d


# -- vector fields --------------------------------------------------------


def test_kowalevski_exponents_of_case_study_field():
    x = HomQuadVF(case_study_map().components)
    pairs = kowalevski_exponents(x)
    assert len(pairs) == 7
    as_sets = [frozenset(p) for p in pairs if not any(isinstance(v, QE) for v in p)]
    assert frozenset((1, 3)) in as_sets
    assert frozenset((rat(-2, 3), rat(-1, 3))) in as_sets
    assert frozenset((rat(2, 3), rat(-5, 3))) in as_sets
    assert frozenset((-3, -1)) in as_sets
    assert frozenset((rat(1, 3), 1)) in as_sets
    assert frozenset((rat(-4, 5), rat(1, 5))) in as_sets


def test_vf_map_round_trip():
    f = case_study_map()
    assert vf_to_map(HomQuadVF(f.components)) == f


# -- relative fixed-point sum ---------------------------------------------


def test_relative_sum_on_case_study():
    assert relative_fixed_point_sum(case_study_map(), LINE_Z1) == 1


def test_relative_sum_rejects_multiple_line_fixed_point():
    # restriction to z1 = 0 is [z2^2 : z2 z3]: identity-like degenerate data
    f = QuadraticMapP2([Z1 * Z1, Z2 * Z2, Z2 * Z3G + Z1 * Z1])
    with pytest.raises((NonSimpleLineFixedPoint, DegenerateMap)):
        relative_fixed_point_sum(f, LINE_Z1)


@settings(max_examples=20, deadline=None)
@given(
    st.tuples(*[st.integers(-3, 3) for _ in range(8)]),
)
def test_relative_sum_is_one_on_normal_form_family(ws):
    w1, w2, w3, w4, w5, w6, w7, w8 = (rat(w) for w in ws)
    p = w1 * (X * X - X) + w2 * X * Y + w3 * (Y * Y - Y)
    q = w4 * (X * X - X) + w5 * X * Y + w6 * (Y * Y - Y)
    l = 1 + w7 * X + w8 * Y
    nf = AffineNormalForm(L=l, P=p, Q=q, p4=(rat(0), rat(0)))
    try:
        f = normal_form_to_map(nf)
        f.validate()
        total = relative_fixed_point_sum(f, LINE_Z1)
    except (DegenerateMap, NonSimpleLineFixedPoint, PreconditionError):
        return
    assert total == 1


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 2))
def test_fixed_point_count_is_seven_for_random_maps(a, b, c):
    f1 = Z1 * Z1 + a * Z2 * Z3G + Z2 * Z2
    f2 = Z2 * Z2 + b * Z1 * Z3G + 2 * Z1 * Z1 + Z2 * Z3G
    f3 = Z3G * Z3G + c * Z1 * Z2 + 3 * Z1 * Z1 + Z1 * Z3G
    try:
        f = QuadraticMapP2([f1, f2, f3])
        recs = fixed_points(f)
    except DegenerateMap:
        return
    assert sum(r.multiplicity for r in recs) == 7


def test_fixed_points_commute_with_linear_conjugation():
    f = case_study_map()
    a = [
        [rat(1), rat(2), rat(0)],
        [rat(0), rat(1), rat(1)],
        [rat(1), rat(0), rat(3)],
    ]
    g = conjugate_map(f, a)
    data_f = sorted(
        (r.t, r.d, r.multiplicity) for r in fixed_points(f) if r.point is not None
    )
    data_g = sorted(
        (r.t, r.d, r.multiplicity) for r in fixed_points(g) if r.point is not None
    )
    assert data_f == data_g
