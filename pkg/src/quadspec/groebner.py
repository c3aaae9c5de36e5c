"""Buchberger Groebner bases with Gebauer-Moller pair pruning.

Works over Q or a fixed quadratic extension.  Polynomials are kept monic
during the computation; pair selection follows the normal strategy
(smallest lcm in the active order).  A budget caps total reduction steps
and intermediate degrees so runaway computations fail loudly instead of
hanging.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PreconditionError, QuadspecError, ResourceBudgetExceeded
from .linalg import (
    Matrix,
    mat_mul,
    mat_pow,
    mat_vec,
    minpoly_of_vector,
    nullspace,
    rref,
    solve,
)
from .poly import GREVLEX, BlockOrder, Monomial, MonomialOrder, MPoly
from .scalars import QE, Scalar, rat
from . import unipoly


# -- budgets ------------------------------------------------------------


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        return default


@dataclass
class Budget:
    """Mutable accounting for one Groebner run."""

    max_reductions: int = field(
        default_factory=lambda: _env_int("QUADSPEC_MAX_REDUCTIONS", 10_000_000)
    )
    max_degree: int = field(default_factory=lambda: _env_int("QUADSPEC_MAX_DEGREE", 60))
    reductions: int = 0

    def step(self, count: int = 1):
        self.reductions += count
        if self.reductions > self.max_reductions:
            raise ResourceBudgetExceeded(
                f"reduction budget of {self.max_reductions} exhausted",
                reductions=self.reductions,
            )

    def check_degree(self, degree: int):
        if degree > self.max_degree:
            raise ResourceBudgetExceeded(
                f"degree cap {self.max_degree} exceeded at degree {degree}",
                degree=degree,
            )


# -- low-level monomial helpers ------------------------------------------


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _inv(c: Scalar) -> Scalar:
    return c.inverse() if isinstance(c, QE) else 1 / c


class _GBPoly:
    """A monic polynomial with its leading data cached for one order."""

    __slots__ = ("terms", "lm")

    def __init__(self, terms: dict, order: MonomialOrder):
        lm = max(terms, key=order.key)
        lc = terms[lm]
        if not (not isinstance(lc, QE) and lc == 1):
            inv = _inv(lc)
            terms = {m: c * inv for m, c in terms.items()}
        self.terms = terms
        self.lm = lm


def _normal_form(
    p: dict, basis: Sequence[_GBPoly], order: MonomialOrder, budget: Budget
) -> dict:
    """Fully reduce p modulo the (monic) basis."""
    work = dict(p)
    remainder: dict = {}
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        reducer = None
        for g in basis:
            if _divides(g.lm, m):
                reducer = g
                break
        if reducer is None:
            remainder[m] = c
            continue
        budget.step()
        shift = _sub(m, reducer.lm)
        for mono, coeff in reducer.terms.items():
            if mono == reducer.lm:
                continue
            target = _mono_mul(mono, shift)
            acc = work.get(target)
            delta = c * coeff
            if acc is None:
                work[target] = -delta
            else:
                s = acc - delta
                if isinstance(s, QE) or s != 0:
                    work[target] = s
                else:
                    del work[target]
    return remainder


def _spoly(g1: _GBPoly, g2: _GBPoly, order: MonomialOrder) -> dict:
    lcm = _lcm(g1.lm, g2.lm)
    s1 = _sub(lcm, g1.lm)
    s2 = _sub(lcm, g2.lm)
    out: dict = {}
    for mono, coeff in g1.terms.items():
        out[_mono_mul(mono, s1)] = coeff
    for mono, coeff in g2.terms.items():
        target = _mono_mul(mono, s2)
        acc = out.get(target)
        if acc is None:
            out[target] = -coeff
        else:
            s = acc - coeff
            if isinstance(s, QE) or s != 0:
                out[target] = s
            else:
                del out[target]
    return out


def _buchberger(
    generators: Iterable[dict], order: MonomialOrder, budget: Budget
) -> list[_GBPoly]:
    basis: list[_GBPoly] = []
    pairs: set[tuple[int, int]] = set()

    def lcm_of(i: int, j: int) -> Monomial:
        return _lcm(basis[i].lm, basis[j].lm)

    def add_element(terms: dict):
        """Gebauer-Moller update of the pair set with a new basis element."""
        h = _GBPoly(terms, order)
        t = len(basis)
        basis.append(h)
        candidates = list(range(t))
        kept: list[int] = []
        # prune new pairs against each other
        for i in candidates:
            lcm_i = lcm_of(i, t)
            dominated = False
            for j in candidates:
                if j == i:
                    continue
                lcm_j = lcm_of(j, t)
                if lcm_j != lcm_i and _divides(lcm_j, lcm_i):
                    dominated = True
                    break
            if not dominated:
                kept.append(i)
        # among equal lcms keep one representative
        seen: dict[Monomial, int] = {}
        uniq: list[int] = []
        for i in kept:
            key = lcm_of(i, t)
            if key not in seen:
                seen[key] = i
                uniq.append(i)
        # drop pairs with coprime leading monomials (their s-polys reduce to 0)
        new_pairs = {
            (i, t) for i in uniq if not _coprime(basis[i].lm, h.lm)
        }
        # prune old pairs made redundant by the newcomer
        for (i, j) in list(pairs):
            lcm_ij = lcm_of(i, j)
            if (
                _divides(h.lm, lcm_ij)
                and lcm_of(i, t) != lcm_ij
                and lcm_of(j, t) != lcm_ij
            ):
                pairs.discard((i, j))
        pairs.update(new_pairs)

    for terms in generators:
        if terms:
            add_element(dict(terms))

    while pairs:
        i, j = min(pairs, key=lambda ij: order.key(lcm_of(*ij)))
        pairs.discard((i, j))
        budget.check_degree(sum(lcm_of(i, j)))
        s = _spoly(basis[i], basis[j], order)
        h = _normal_form(s, basis, order, budget)
        if h:
            budget.check_degree(sum(max(h, key=order.key)))
            add_element(h)
    return basis


def _reduce_basis(basis: list[_GBPoly], order: MonomialOrder, budget: Budget) -> list[_GBPoly]:
    # minimal: drop elements whose lead is divisible by another lead
    minimal: list[_GBPoly] = []
    leads = [g.lm for g in basis]
    for idx, g in enumerate(basis):
        if any(
            _divides(other, g.lm) and (other != g.lm or k < idx)
            for k, other in enumerate(leads)
            if k != idx
        ):
            continue
        minimal.append(g)
    # inter-reduce tails
    reduced: list[_GBPoly] = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        terms = _normal_form(dict(g.terms), others, order, budget)
        if terms:
            reduced.append(_GBPoly(terms, order))
    reduced.sort(key=lambda g: order.key(g.lm))
    return reduced


# -- public API ------------------------------------------------------------


class Ideal:
    """A polynomial ideal with cached reduced Groebner bases per order."""

    def __init__(
        self,
        gens: Sequence[MPoly],
        order: MonomialOrder = GREVLEX,
        budget: Budget | None = None,
    ):
        gens = [g for g in gens]
        if not gens:
            raise PreconditionError("ideal needs at least one generator")
        ring = gens[0].vars
        for g in gens:
            if g.vars != ring:
                raise QuadspecError("ideal generators live in different rings")
        self.gens = gens
        self.vars = ring
        self.order = order
        self.budget = budget
        self._bases: dict[str, list[MPoly]] = {}

    def _budget(self) -> Budget:
        return self.budget if self.budget is not None else Budget()

    def groebner_basis(self, order: MonomialOrder | None = None) -> list[MPoly]:
        order = order or self.order
        if order.name not in self._bases:
            budget = self._budget()
            raw = _buchberger((g.terms for g in self.gens), order, budget)
            reduced = _reduce_basis(raw, order, budget)
            polys = []
            for g in reduced:
                p = MPoly(self.vars)
                p.terms = dict(g.terms)
                polys.append(p)
            if not polys:
                polys = [MPoly.zero(self.vars)]
            self._bases[order.name] = polys
            if basis_recorder is not None:
                basis_recorder.append((order, self._bases[order.name]))
        return self._bases[order.name]

    def normal_form(self, f: MPoly, order: MonomialOrder | None = None) -> MPoly:
        order = order or self.order
        gb = self.groebner_basis(order)
        basis = [_GBPoly(dict(g.terms), order) for g in gb if not g.is_zero()]
        terms = _normal_form(dict(f.terms), basis, order, self._budget())
        out = MPoly(self.vars)
        out.terms = terms
        return out

    def contains(self, f: MPoly) -> bool:
        return self.normal_form(f).is_zero()

    def is_inconsistent(self) -> bool:
        """True when the ideal is the whole ring (no solutions at all)."""
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant() and not gb[0].is_zero()

    def eliminate(self, kill: Sequence[str]) -> "Ideal":
        """Eliminate the named variables via a block order."""
        kill = list(kill)
        keep = [v for v in self.vars if v not in kill]
        if len(kill) + len(keep) != len(self.vars) or not keep:
            raise PreconditionError("eliminate: bad variable selection")
        new_ring = tuple(kill + keep)
        reordered = [g.rename(new_ring) for g in self.gens]
        block = BlockOrder(len(kill))
        inner = Ideal(reordered, order=block, budget=self.budget)
        gb = inner.groebner_basis(block)
        nkill = len(kill)
        survivors = []
        for g in gb:
            if all(m[:nkill] == (0,) * nkill for m in g.terms):
                survivors.append(
                    MPoly(tuple(keep), {m[nkill:]: c for m, c in g.terms.items()})
                )
        if not survivors:
            survivors = [MPoly.zero(tuple(keep))]
        return Ideal(survivors, order=GREVLEX, budget=self.budget)

    def solution_count(self) -> int:
        """Number of solutions with multiplicity; requires a finite count."""
        return QuotientAlgebra(self).dim


# optional sink for every reduced basis computed; a list enables recording
basis_recorder: list | None = None


def verify_groebner_basis(
    polys: Sequence[MPoly], order: MonomialOrder = GREVLEX, budget: Budget | None = None
) -> bool:
    """Buchberger's criterion: every S-polynomial of the given basis
    reduces to zero modulo the basis."""
    budget = budget if budget is not None else Budget()
    basis = [_GBPoly(dict(g.terms), order) for g in polys if not g.is_zero()]
    if not basis:
        return True
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = _spoly(basis[i], basis[j], order)
            if s and _normal_form(s, basis, order, budget):
                return False
    return True


def univariate_roots(f: MPoly, name: str | None = None):
    """Roots of a univariate polynomial over its coefficient field.

    Returns (roots, residual) where roots is a list of (scalar, multiplicity)
    and residual is the monic product of factors left unsolved, as an MPoly.
    Roots may live in one quadratic extension when the input is rational.
    """
    if name is None:
        used = [v for v in f.vars if f.degree_in(v) > 0]
        if len(used) > 1:
            raise PreconditionError("polynomial is not univariate")
        name = used[0] if used else f.vars[0]
    coeffs = f.univariate_in(name)
    roots, residual = unipoly.roots_with_multiplicity(coeffs, f.coefficient_field())
    return roots, MPoly.from_univariate(f.vars, name, residual)


class QuotientAlgebra:
    """The finite-dimensional algebra R / I of a zero-dimensional ideal."""

    def __init__(self, ideal: Ideal, order: MonomialOrder = GREVLEX):
        self.ideal = ideal
        self.order = order
        gb = ideal.groebner_basis(order)
        if len(gb) == 1 and gb[0].is_zero():
            raise PreconditionError("quotient of the zero ideal is not finite")
        self._gb = [_GBPoly(dict(g.terms), order) for g in gb if not g.is_zero()]
        if not self._gb:
            raise PreconditionError("quotient of the zero ideal is not finite")
        self.leads = [g.lm for g in self._gb]
        n = len(ideal.vars)
        caps = []
        for i in range(n):
            cap = None
            for lm in self.leads:
                if all(e == 0 for k, e in enumerate(lm) if k != i):
                    cap = lm[i] if cap is None else min(cap, lm[i])
            if cap is None:
                raise PreconditionError(
                    f"ideal is not zero-dimensional (no pure power of {ideal.vars[i]})"
                )
            caps.append(cap)
        monomials: list[Monomial] = []

        def descend(prefix, i):
            if i == n:
                m = tuple(prefix)
                if not any(_divides(lm, m) for lm in self.leads):
                    monomials.append(m)
                return
            for e in range(caps[i]):
                descend(prefix + [e], i + 1)

        descend([], 0)
        monomials.sort(key=order.key)
        self.basis = monomials
        self.index = {m: k for k, m in enumerate(monomials)}
        self.dim = len(monomials)
        self._tables: list[Matrix] | None = None

    def nf_vector(self, f: MPoly) -> list[Scalar]:
        terms = _normal_form(
            dict(f.terms), self._gb, self.order, self.ideal._budget()
        )
        vec = [rat(0)] * self.dim
        for m, c in terms.items():
            vec[self.index[m]] = c
        return vec

    def unit(self) -> list[Scalar]:
        f = MPoly.const(self.ideal.vars, 1)
        return self.nf_vector(f)

    def mult_matrix(self, f: MPoly) -> Matrix:
        cols = []
        for m in self.basis:
            shifted = MPoly(self.ideal.vars, {m: rat(1)}) * f
            cols.append(self.nf_vector(shifted))
        return [list(row) for row in zip(*cols)]

    def tables(self) -> list[Matrix]:
        """Multiplication matrix of each basis monomial."""
        if self._tables is None:
            self._tables = [
                self.mult_matrix(MPoly(self.ideal.vars, {m: rat(1)}))
                for m in self.basis
            ]
        return self._tables

    def mult_matrix_of_vector(self, vec: Sequence[Scalar]) -> Matrix:
        tables = self.tables()
        out = [[rat(0)] * self.dim for _ in range(self.dim)]
        for j, c in enumerate(vec):
            if not isinstance(c, QE) and c == 0:
                continue
            t = tables[j]
            for r in range(self.dim):
                row = t[r]
                orow = out[r]
                for s in range(self.dim):
                    orow[s] = orow[s] + c * row[s]
        return out

    def minpoly(self, f: MPoly) -> list[Scalar]:
        """Ascending monic minimal polynomial of f in the quotient."""
        return minpoly_of_vector(self.mult_matrix(f), self.unit())


class SaturatedAlgebra:
    """Quotient of a QuotientAlgebra by the components where g is nilpotent.

    Equivalent to the coordinate ring of the saturation by g: only the
    points with g != 0 survive.
    """

    def __init__(self, quotient: QuotientAlgebra, sat: MPoly):
        self.parent = quotient
        m = quotient.mult_matrix(sat)
        n = mat_pow(m, quotient.dim)
        kernel = nullspace(n)
        red, pivots = rref(kernel) if kernel else ([], [])
        self._kernel_rows = red[: len(pivots)]
        self._pivots = pivots
        self._free = [c for c in range(quotient.dim) if c not in pivots]
        self.dim = len(self._free)

    def project(self, vec: Sequence[Scalar]) -> list[Scalar]:
        v = list(vec)
        for row, p in zip(self._kernel_rows, self._pivots):
            c = v[p]
            if not isinstance(c, QE) and c == 0:
                continue
            v = [x - c * y for x, y in zip(v, row)]
        return [v[c] for c in self._free]

    def lift(self, vec: Sequence[Scalar]) -> list[Scalar]:
        out = [rat(0)] * self.parent.dim
        for value, c in zip(vec, self._free):
            out[c] = value
        return out

    def vector(self, f: MPoly) -> list[Scalar]:
        return self.project(self.parent.nf_vector(f))

    def unit(self) -> list[Scalar]:
        return self.project(self.parent.unit())

    def mult_matrix(self, f: MPoly) -> Matrix:
        big = self.parent.mult_matrix(f)
        cols = []
        for c in self._free:
            col = [big[r][c] for r in range(self.parent.dim)]
            cols.append(self.project(col))
        return [list(row) for row in zip(*cols)] if cols else []

    def mult_matrix_of_vector(self, vec: Sequence[Scalar]) -> Matrix:
        big = self.parent.mult_matrix_of_vector(self.lift(vec))
        cols = []
        for c in self._free:
            col = [big[r][c] for r in range(self.parent.dim)]
            cols.append(self.project(col))
        return [list(row) for row in zip(*cols)] if cols else []

    def minpoly_of_vector(self, vec: Sequence[Scalar]) -> list[Scalar]:
        return minpoly_of_vector(self.mult_matrix_of_vector(vec), self.unit())

    def ideal_is_proper(self, elements: Sequence[MPoly]) -> bool:
        """Does the list generate a proper ideal of this algebra?"""
        if self.dim == 0:
            return False
        rows = []
        for g in elements:
            big = self.parent.mult_matrix(g)
            for c in range(self.parent.dim):
                col = [big[r][c] for r in range(self.parent.dim)]
                rows.append(self.project(col))
        red, pivots = rref(rows)
        return len(pivots) < self.dim

    def solve_division(self, den: MPoly, num: MPoly) -> list[Scalar] | None:
        """Vector u with den*u = num in this algebra, if one exists."""
        m = self.mult_matrix(den)
        return solve(m, self.vector(num))
