"""Sparse multivariate polynomials over Q or Q(sqrt(D)).

Terms are stored as a dict mapping exponent tuples to nonzero scalars.
Monomial orders are small key objects; lex, grlex, grevlex and block
(elimination) orders are provided.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

from .errors import QuadspecError
from .scalars import (
    QE,
    Scalar,
    as_scalar,
    common_field,
    conj_scalar,
    is_rational,
    rat,
    scalar_from_str,
    scalar_to_str,
)

Monomial = tuple[int, ...]


# -- monomial orders ---------------------------------------------------


class MonomialOrder:
    name: str

    def key(self, m: Monomial):
        raise NotImplementedError

    def __repr__(self):
        return f"<order {self.name}>"


class Lex(MonomialOrder):
    name = "lex"

    def key(self, m):
        return m


class GrLex(MonomialOrder):
    name = "grlex"

    def key(self, m):
        return (sum(m), m)


class GRevLex(MonomialOrder):
    name = "grevlex"

    def key(self, m):
        return (sum(m), tuple(-e for e in reversed(m)))


class BlockOrder(MonomialOrder):
    """Eliminate the first ``split`` variables; grevlex within each block."""

    def __init__(self, split: int):
        self.split = split
        self.name = f"block({split})"

    def key(self, m):
        head, tail = m[: self.split], m[self.split :]
        return (
            sum(head),
            tuple(-e for e in reversed(head)),
            sum(tail),
            tuple(-e for e in reversed(tail)),
        )


LEX = Lex()
GRLEX = GrLex()
GREVLEX = GRevLex()


def order_by_name(name: str) -> MonomialOrder:
    table = {"lex": LEX, "grlex": GRLEX, "grevlex": GREVLEX}
    if name in table:
        return table[name]
    if name.startswith("block(") and name.endswith(")"):
        return BlockOrder(int(name[6:-1]))
    raise ValueError(f"unknown monomial order {name!r}")


# -- the polynomial type ------------------------------------------------


class MPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        self.vars = tuple(variables)
        cleaned: dict[Monomial, Scalar] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = as_scalar(coeff)
                if isinstance(coeff, QE) or coeff != 0:
                    cleaned[tuple(mono)] = coeff
        self.terms = cleaned

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "MPoly":
        return cls(variables, {})

    @classmethod
    def const(cls, variables, value) -> "MPoly":
        value = as_scalar(value)
        n = len(variables)
        return cls(variables, {(0,) * n: value})

    @classmethod
    def var(cls, variables, name) -> "MPoly":
        idx = tuple(variables).index(name)
        mono = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls(variables, {mono: rat(1)})

    @classmethod
    def gens(cls, variables) -> list["MPoly"]:
        return [cls.var(variables, v) for v in variables]

    # -- basics ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Scalar:
        zero_mono = (0,) * len(self.vars)
        return self.terms.get(zero_mono, rat(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        idx = self.vars.index(name)
        return max(m[idx] for m in self.terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        if not self.terms:
            return True
        degrees = {sum(m) for m in self.terms}
        if len(degrees) > 1:
            return False
        return degree is None or degrees == {degree}

    def coefficient_field(self):
        return common_field(self.terms.values())

    def _check(self, other: "MPoly"):
        if self.vars != other.vars:
            raise QuadspecError(
                f"polynomial rings differ: {self.vars} vs {other.vars}"
            )

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        coerced = as_scalar(other)
        return self == MPoly.const(self.vars, coerced)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.const(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = terms.get(mono)
            if acc is None:
                terms[mono] = coeff
            else:
                s = acc + coeff
                if isinstance(s, QE) or s != 0:
                    terms[mono] = s
                else:
                    del terms[mono]
        result = MPoly(self.vars)
        result.terms = terms
        return result

    __radd__ = __add__

    def __neg__(self):
        result = MPoly(self.vars)
        result.terms = {m: -c for m, c in self.terms.items()}
        return result

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            scalar = as_scalar(other)
            if is_rational(scalar) and scalar == 0:
                return MPoly.zero(self.vars)
            result = MPoly(self.vars)
            result.terms = {m: c * scalar for m, c in self.terms.items()}
            return result
        self._check(other)
        terms: dict[Monomial, Scalar] = {}
        if len(self.terms) > len(other.terms):
            left, right = other.terms, self.terms
        else:
            left, right = self.terms, other.terms
        for m1, c1 in left.items():
            for m2, c2 in right.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                acc = terms.get(mono)
                if acc is None:
                    terms[mono] = prod
                else:
                    s = acc + prod
                    if isinstance(s, QE) or s != 0:
                        terms[mono] = s
                    else:
                        del terms[mono]
        result = MPoly(self.vars)
        result.terms = terms
        return result

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(self.vars, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and substitution ----------------------------------------

    def diff(self, name: str) -> "MPoly":
        idx = self.vars.index(name)
        terms: dict[Monomial, Scalar] = {}
        for mono, coeff in self.terms.items():
            e = mono[idx]
            if e == 0:
                continue
            new = list(mono)
            new[idx] = e - 1
            terms[tuple(new)] = coeff * e
        result = MPoly(self.vars)
        result.terms = terms
        return result

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        """Full evaluation at a point given in variable order."""
        if len(point) != len(self.vars):
            raise QuadspecError("point dimension mismatch")
        point = [as_scalar(p) for p in point]
        powers: list[dict[int, Scalar]] = [{0: rat(1)} for _ in point]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * point[i]
            return cache[e]

        total: Scalar = rat(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def subs(self, mapping: Mapping[str, Union["MPoly", Scalar, int]]) -> "MPoly":
        """Substitute polynomials or scalars for variables; ring unchanged."""
        values: dict[int, MPoly] = {}
        for name, val in mapping.items():
            idx = self.vars.index(name)
            if not isinstance(val, MPoly):
                val = MPoly.const(self.vars, val)
            else:
                self._check(val)
            values[idx] = val
        power_cache: dict[tuple[int, int], MPoly] = {}

        def power(i, e):
            key = (i, e)
            if key not in power_cache:
                if e == 1:
                    power_cache[key] = values[i]
                else:
                    half = power(i, e // 2)
                    sq = half * half
                    power_cache[key] = sq * values[i] if e % 2 else sq
            return power_cache[key]

        total = MPoly.zero(self.vars)
        for mono, coeff in self.terms.items():
            term = None
            rest = list(mono)
            for i in values:
                rest[i] = 0
            base = MPoly(self.vars, {tuple(rest): coeff})
            term = base
            for i, e in enumerate(mono):
                if i in values and e:
                    term = term * power(i, e)
            total = total + term
        return total

    def rename(self, variables: Sequence[str]) -> "MPoly":
        """Reinterpret in a ring with the given variables (superset, any order)."""
        variables = tuple(variables)
        pos = []
        for v in self.vars:
            pos.append(variables.index(v))
        n = len(variables)
        terms: dict[Monomial, Scalar] = {}
        for mono, coeff in self.terms.items():
            new = [0] * n
            for p, e in zip(pos, mono):
                new[p] = e
            terms[tuple(new)] = coeff
        result = MPoly(variables)
        result.terms = terms
        return result

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]) -> "MPoly":
        return MPoly(self.vars, {m: fn(c) for m, c in self.terms.items()})

    def conj(self) -> "MPoly":
        """Galois conjugation applied to every coefficient."""
        return self.map_coeffs(conj_scalar)

    # -- order-dependent views ---------------------------------------------

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        if not self.terms:
            raise QuadspecError("leading monomial of zero")
        return max(self.terms, key=order.key)

    def leading_coeff(self, order: MonomialOrder) -> Scalar:
        return self.terms[self.leading_monomial(order)]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda kv: order.key(kv[0]), reverse=True)

    # -- univariate views ----------------------------------------------------

    def univariate_in(self, name: str) -> list[Scalar]:
        """Dense coefficient list c[0..deg] provided only ``name`` occurs."""
        idx = self.vars.index(name)
        deg = 0
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e and i != idx:
                    raise QuadspecError(f"not univariate in {name}")
            deg = max(deg, mono[idx])
        coeffs: list[Scalar] = [rat(0)] * (deg + 1)
        for mono, coeff in self.terms.items():
            coeffs[mono[idx]] = coeff
        return coeffs

    @classmethod
    def from_univariate(cls, variables, name, coeffs) -> "MPoly":
        idx = tuple(variables).index(name)
        n = len(variables)
        terms = {}
        for e, c in enumerate(coeffs):
            mono = tuple(e if i == idx else 0 for i in range(n))
            terms[mono] = c
        return cls(variables, terms)

    # -- content and display ---------------------------------------------------

    def rational_content(self) -> mpq:
        """Positive rational c with self/c integer, primitive when over Q."""
        from math import gcd

        num_gcd = 0
        den_lcm = 1
        for coeff in self.terms.values():
            parts = (coeff.a, coeff.b) if isinstance(coeff, QE) else (coeff,)
            for part in parts:
                num_gcd = gcd(num_gcd, int(part.numerator))
                den_lcm = den_lcm * int(part.denominator) // gcd(
                    den_lcm, int(part.denominator)
                )
        if num_gcd == 0:
            return rat(1)
        return mpq(num_gcd, den_lcm)

    def primitive(self, order: MonomialOrder = GREVLEX) -> "MPoly":
        """Divide by the content; leading coefficient made positive when real."""
        if not self.terms:
            return self
        c = self.rational_content()
        result = self * (1 / c)
        lc = result.leading_coeff(order)
        lead = lc.a if isinstance(lc, QE) else lc
        if lead < 0:
            result = -result
        return result

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for mono, coeff in self.sorted_terms(GREVLEX):
            factors = []
            for name, e in zip(self.vars, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            cs = scalar_to_str(coeff)
            if "+" in cs[1:] or "-" in cs[1:] and "sqrt" in cs:
                cs = f"({cs})"
            chunks.append("*".join([cs] + factors) if factors else cs)
        return " + ".join(chunks)

    # -- serialization -----------------------------------------------------------

    def to_payload(self) -> list:
        items = self.sorted_terms(GREVLEX)
        return [[list(m), scalar_to_str(c)] for m, c in items]

    @classmethod
    def from_payload(cls, variables, payload) -> "MPoly":
        terms = {tuple(m): scalar_from_str(c) for m, c in payload}
        return cls(variables, terms)


# -- free functions ------------------------------------------------------------


def lie_derivative(f: MPoly, field_components: Sequence[MPoly]) -> MPoly:
    """Derivative of f along the polynomial vector field X = (X_1, ..., X_n)."""
    if len(field_components) != len(f.vars):
        raise QuadspecError("vector field dimension mismatch")
    total = MPoly.zero(f.vars)
    for name, comp in zip(f.vars, field_components):
        total = total + comp * f.diff(name)
    return total


def homogeneous_check(polys: Iterable[MPoly], degree: int) -> bool:
    return all(p.is_homogeneous(degree) or p.is_zero() for p in polys)


def sylvester_resultant(f_coeffs: Sequence, g_coeffs: Sequence):
    """Resultant of two dense univariate polynomials via the Sylvester matrix.

    Coefficient lists are ascending (c0 + c1 x + ...).  Entries may be
    scalars or MPoly; the determinant is computed by cofactor expansion,
    so this is intended for small degrees.
    """
    f = list(f_coeffs)
    g = list(g_coeffs)
    m = len(f) - 1
    n = len(g) - 1
    if m < 0 or n < 0:
        raise QuadspecError("resultant of zero polynomial")
    size = m + n
    rows = []
    for i in range(n):
        row = [rat(0)] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [rat(0)] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return det_expansion(rows)


def det_expansion(rows):
    """Determinant by cofactor expansion; generic over any ring elements."""
    n = len(rows)
    if n == 0:
        return rat(1)
    if n == 1:
        return rows[0][0]

    def is_zero_entry(x):
        if isinstance(x, MPoly):
            return x.is_zero()
        return (not isinstance(x, QE)) and as_scalar(x) == 0

    def minor_det(row_ids, col_ids):
        if len(row_ids) == 1:
            return rows[row_ids[0]][col_ids[0]]
        r = row_ids[0]
        total = None
        for k, c in enumerate(col_ids):
            entry = rows[r][c]
            if is_zero_entry(entry):
                continue
            sub = minor_det(row_ids[1:], col_ids[:k] + col_ids[k + 1 :])
            term = entry * sub
            if k % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            return rat(0) if not isinstance(rows[0][0], MPoly) else MPoly.zero(rows[0][0].vars)
        return total

    return minor_det(tuple(range(n)), tuple(range(n)))
