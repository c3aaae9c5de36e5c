import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from quadspec.errors import PreconditionError, ResourceBudgetExceeded
from quadspec.groebner import (
    Budget,
    Ideal,
    QuotientAlgebra,
    SaturatedAlgebra,
    _GBPoly,
    _normal_form,
    _spoly,
    univariate_roots,
)
from quadspec.poly import GREVLEX, LEX, MPoly
from quadspec.scalars import QE, rat

V2 = ("x", "y")
X, Y = MPoly.gens(V2)


def test_hand_derived_lex_basis():
    # circle meets diagonal: basis {x - y, y^2 - 1/2}
    ideal = Ideal([X * X + Y * Y - 1, X - Y], order=LEX)
    gb = ideal.groebner_basis(LEX)
    assert gb == [Y * Y - rat(1, 2), X - Y]


def test_inconsistent_ideal():
    assert Ideal([X, X - 1]).is_inconsistent()
    assert not Ideal([X - 1]).is_inconsistent()


def test_membership():
    ideal = Ideal([X - Y])
    assert ideal.contains(X * X - Y * Y)
    assert not ideal.contains(X + Y)


def test_eliminate():
    V3 = ("x", "y", "z")
    x, y, z = MPoly.gens(V3)
    ideal = Ideal([x - y * y, x * x - z])
    eliminated = ideal.eliminate(["x"])
    target = MPoly.gens(("y", "z"))
    yy, zz = target
    assert eliminated.contains(yy**4 - zz)


def test_solution_count_with_multiplicity():
    assert Ideal([X * X - 1, Y**3 - Y]).solution_count() == 6
    assert Ideal([X * X, Y * Y]).solution_count() == 4


def test_solution_count_rejects_positive_dimension():
    with pytest.raises(PreconditionError):
        Ideal([X - Y]).solution_count()


def test_univariate_roots():
    f = (X * X - 2) * (X - 3) * (X - 3)
    roots, residual = univariate_roots(f)
    assert (rat(3), 2) in [(r, m) for r, m in roots]
    qe_roots = [r for r, _ in roots if isinstance(r, QE)]
    assert len(qe_roots) == 2 and {r.d for r in qe_roots} == {2}
    assert residual.is_constant()


def test_univariate_roots_residual():
    f = X**5 - X - 1  # irreducible quintic
    roots, residual = univariate_roots(f)
    assert roots == []
    assert residual.degree_in("x") == 5


def test_quotient_minpoly():
    ideal = Ideal([X * X - 2, Y - X])
    q = QuotientAlgebra(ideal)
    assert q.dim == 2
    assert q.minpoly(Y) == [mpq(-2), mpq(0), mpq(1)]


def test_saturation_drops_components():
    # points (0, 0) and (1, 0); saturating by x keeps only (1, 0)
    ideal = Ideal([X * (X - 1), Y])
    q = QuotientAlgebra(ideal)
    assert q.dim == 2
    sat = SaturatedAlgebra(q, X)
    assert sat.dim == 1
    assert sat.vector(X) == sat.unit()
    assert sat.ideal_is_proper([X - 1])
    assert not sat.ideal_is_proper([X])


def test_budget_enforced():
    gens = [X**3 * Y - X, X * Y**3 - Y, X * X + Y * Y - 4]
    tiny = Budget(max_reductions=2, max_degree=60)
    with pytest.raises(ResourceBudgetExceeded):
        Ideal(gens, budget=tiny).groebner_basis()


def test_degree_cap_enforced():
    tight = Budget(max_reductions=10**6, max_degree=2)
    with pytest.raises(ResourceBudgetExceeded):
        Ideal([X * X - Y, X * Y - 1], budget=tight).groebner_basis()


def test_groebner_over_extension_field():
    s2 = QE(0, 1, 2)
    ideal = Ideal([X - MPoly.const(V2, s2), Y - 1])
    assert ideal.contains(X * X - 2)


def _spoly_reduces_to_zero(ideal: Ideal, order):
    gb = ideal.groebner_basis(order)
    basis = [_GBPoly(dict(g.terms), order) for g in gb if not g.is_zero()]
    budget = Budget()
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = _spoly(basis[i], basis[j], order)
            if _normal_form(s, basis, order, budget):
                return False
    return True


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)
        ),
        min_size=2,
        max_size=3,
    )
)
def test_buchberger_confluence_property(coeff_rows):
    gens = []
    for a, b, c, d in coeff_rows:
        p = a * X * X + b * X * Y + c * Y + d
        if not p.is_zero():
            gens.append(p)
    if not gens:
        return
    ideal = Ideal(gens)
    assert _spoly_reduces_to_zero(ideal, GREVLEX)
    # original generators must reduce to zero against the basis
    for g in gens:
        assert ideal.contains(g)
