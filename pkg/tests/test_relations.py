import random

import pytest
from hypothesis import given, settings, strategies as st

from mapgen import LINE_Z1, random_spectra
from quadspec.errors import DegenerateFixedPoint, DiscriminantZero
from quadspec.poly import MPoly
from quadspec.projmap import (
    QuadraticMapP2,
    affine_normal_form,
    relative_fixed_point_sum,
    spectrum,
)
from quadspec.relations import (
    BetaTriple,
    check_known_relations,
    cleared_relation_values,
    discriminant,
    independence_certificate,
    jacobi_residues,
    jacobi_residues_of_spectrum,
    known_relation_residuals,
    mattuck_complete,
    reduced_relation_polys,
    reduced_relations,
    symmetric_profile,
)
from quadspec.scalars import is_zero, rat

Z1, Z2, Z3G = MPoly.gens(("z1", "z2", "z3"))


def case_study_map():
    return QuadraticMapP2(
        [
            Z1 * (Z1 + 4 * Z2 + 2 * Z3G),
            2 * Z1 * Z2 + 3 * Z2 * Z2,
            4 * Z1 * Z3G + 5 * Z2 * Z3G - Z3G * Z3G,
        ]
    )


CASE_TD = [
    (rat(-4), rat(3)),
    (rat(-3, 5), rat(-4, 25)),
    (rat(4, 3), rat(1, 3)),
    (rat(9), rat(-60)),
]
CASE_BETA = BetaTriple(rat(59, 15), rat(-49, 15), rat(29, 15))
MARKED = [
    (rat(1), rat(0), rat(0)),
    (rat(1), rat(1), rat(0)),
    (rat(1), rat(0), rat(1)),
]


# -- known relations --------------------------------------------------------


def test_case_study_relations_vanish():
    rep = check_known_relations(spectrum(case_study_map(), LINE_Z1))
    assert rep.all_zero
    assert rep.residuals() == (rat(0),) * 5
    payload = rep.to_json()
    assert payload["all_zero"] is True
    assert payload["lefschetz"] == "0/1"


def test_integer_exponent_row_satisfies_relations():
    off = [(rat(2 + 5), rat(2 * 5)), (rat(1 + 3), rat(3)), (rat(1 + 3), rat(3)),
           (rat(-5 + 12), rat(-60))]
    on = [(rat(1), rat(2)), (rat(5), rat(-1)), (rat(-5), rat(4))]
    td = off + [(u + v, u * v) for u, v in on]
    rep = known_relation_residuals(td, on)
    assert rep.all_zero


def test_flipped_value_breaks_relations():
    off = [(rat(7), rat(10)), (rat(4), rat(3)), (rat(4), rat(3)), (rat(7), rat(-60))]
    on = [(rat(1), rat(2)), (rat(5), rat(-1)), (rat(-5), rat(-4))]
    td = off + [(u + v, u * v) for u, v in on]
    rep = known_relation_residuals(td, on)
    assert not rep.all_zero


def test_zero_multiplier_rejected():
    td = [(rat(1), rat(0))] * 7
    with pytest.raises(DegenerateFixedPoint):
        known_relation_residuals(td, [(rat(1), rat(1))] * 3)


def test_beta_triple_from_case_study():
    assert BetaTriple.from_tau(CASE_TD) == CASE_BETA
    flat = [x for pair in CASE_TD for x in pair]
    assert BetaTriple.from_tau(flat) == CASE_BETA


# -- Jacobi residues ---------------------------------------------------------


def test_jacobi_residues_vanish_on_case_study():
    nf, _ = affine_normal_form(case_study_map(), LINE_Z1, MARKED)
    assert jacobi_residues(nf, CASE_TD) == (rat(0),) * 5
    sp = spectrum(case_study_map(), LINE_Z1)
    assert jacobi_residues_of_spectrum(nf, sp) == (rat(0),) * 5


def test_jacobi_residues_detect_perturbation():
    nf, _ = affine_normal_form(case_study_map(), LINE_Z1, MARKED)
    wrong = [(rat(-4), rat(5))] + CASE_TD[1:]
    res = jacobi_residues(nf, wrong)
    assert not is_zero(res[0])


# -- symmetric profile -------------------------------------------------------


def test_case_study_profile_values():
    sp = spectrum(case_study_map(), LINE_Z1)
    prof = symmetric_profile([r.uv for r in sp.on_line])
    assert prof.e[(1, 0)] == 1
    assert prof.e[(3, 0)] == rat(-4, 9)
    assert prof.e[(0, 1)] == 1
    assert prof.e[(1, 1)] == rat(-10, 9)
    assert prof.pqrs == (rat(1), rat(-4, 9), rat(1), rat(-10, 9))


def test_profile_of_unit_triple():
    prof = symmetric_profile([(rat(1), rat(1))] * 3)
    # coefficients of (1 + x + y)^3
    assert prof.e[(1, 0)] == 3 and prof.e[(2, 0)] == 3 and prof.e[(3, 0)] == 1
    assert prof.e[(0, 1)] == 3 and prof.e[(1, 1)] == 6
    assert prof.e[(0, 3)] == 1 and prof.e[(2, 1)] == 3 and prof.e[(1, 2)] == 3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=3))
def test_profile_matches_polynomial_expansion(pairs):
    prof = symmetric_profile([(rat(u), rat(v)) for u, v in pairs])
    x, y = MPoly.gens(("x", "y"))
    product = MPoly.const(("x", "y"), 1)
    for u, v in pairs:
        product = product * (1 + u * x + v * y)
    for (i, j), value in prof.e.items():
        assert product.terms.get((i, j), rat(0)) == value


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=3),
    st.permutations([0, 1, 2]),
)
def test_profile_is_permutation_invariant(pairs, perm):
    rp = [(rat(u), rat(v)) for u, v in pairs]
    assert symmetric_profile(rp).e == symmetric_profile([rp[i] for i in perm]).e


# -- Mattuck completion ------------------------------------------------------


def test_mattuck_matches_direct_computation():
    prof = symmetric_profile([(rat(1), rat(2)), (rat(3), rat(4)), (rat(5), rat(6))])
    out = mattuck_complete(*prof.generators())
    assert out == (prof.e[(1, 2)], prof.e[(0, 2)], prof.e[(0, 3)])


def test_mattuck_repeated_root_rejected():
    prof = symmetric_profile([(rat(1), rat(1)), (rat(1), rat(2)), (rat(1), rat(3))])
    assert is_zero(prof.delta)
    with pytest.raises(DiscriminantZero):
        mattuck_complete(*prof.generators())


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=3, max_size=3))
def test_mattuck_oracle_property(pairs):
    prof = symmetric_profile([(rat(u), rat(v)) for u, v in pairs])
    if is_zero(prof.delta):
        return
    assert mattuck_complete(*prof.generators()) == (
        prof.e[(1, 2)],
        prof.e[(0, 2)],
        prof.e[(0, 3)],
    )


def test_discriminant_is_u_cubic_discriminant():
    # distinct u-values -> nonzero; e-values of roots 1, 2, 4
    assert not is_zero(discriminant(rat(7), rat(14), rat(8)))
    # repeated root 1, 1, 2 -> e = (4, 5, 2)
    assert is_zero(discriminant(rat(4), rat(5), rat(2)))


# -- reduced relations -------------------------------------------------------


def test_reduced_relations_vanish_at_case_study_point():
    point = (rat(1), rat(-4, 9), rat(1), rat(-10, 9))
    assert reduced_relations(point, CASE_BETA) == (rat(0), rat(0), rat(0))


def test_reduced_relations_at_origin():
    assert reduced_relations((0, 0, 0, 0), CASE_BETA) == (rat(0), rat(0), rat(0))


def test_reduced_relations_generically_nonzero():
    rng = random.Random(7)
    nonzero = 0
    for _ in range(10):
        point = tuple(rat(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4))
        values = reduced_relations(point, CASE_BETA)
        if not all(is_zero(v) for v in values):
            nonzero += 1
    assert nonzero >= 9


def test_reduced_relation_polys_share_theta():
    b_one = BetaTriple(rat(1), rat(1), rat(1))
    b_zero = BetaTriple(rat(0), rat(0), rat(0))
    diffs = [
        a - b
        for a, b in zip(reduced_relation_polys(b_zero), reduced_relation_polys(b_one))
    ]
    assert diffs[0] == diffs[1] == diffs[2]  # each difference is exactly Theta


# -- cleared relations and realizable data ------------------------------------


def test_relations_hold_on_random_realizable_maps():
    checked = 0
    for f, sp in random_spectra(seed=2024, count=12):
        rep = check_known_relations(sp)
        assert rep.all_zero
        assert relative_fixed_point_sum(f, LINE_Z1) == 1
        beta = BetaTriple.from_tau([(r.t, r.d) for r in sp.off_line])
        prof = symmetric_profile([r.uv for r in sp.on_line])
        gs = cleared_relation_values(prof, beta)
        assert all(is_zero(g) for g in gs)
        if not is_zero(prof.e[(3, 0)]) and not is_zero(prof.e[(0, 3)]):
            values = reduced_relations(prof.pqrs, beta)
            assert all(is_zero(v) for v in values)
        checked += 1
    assert checked == 12


def test_cleared_relations_detect_wrong_beta():
    sp = spectrum(case_study_map(), LINE_Z1)
    prof = symmetric_profile([r.uv for r in sp.on_line])
    bad = BetaTriple(rat(1), rat(1), rat(1))
    gs = cleared_relation_values(prof, bad)
    assert not all(is_zero(g) for g in gs)


# -- independence certificate --------------------------------------------------


def test_independence_certificate_holds():
    # the witness configuration attaches the correction term to the third
    # relation; the determinant then escapes the ideal
    assert independence_certificate(BetaTriple(rat(0), rat(0), rat(1)))
    assert independence_certificate(BetaTriple(rat(0), rat(1), rat(0)))


def test_independence_certificate_can_fail():
    assert not independence_certificate(BetaTriple(rat(1), rat(0), rat(0)))


def test_independence_certificate_at_case_study_beta():
    assert independence_certificate(CASE_BETA)
