"""Dense univariate polynomial helpers over Q or Q(sqrt(D)).

Polynomials are ascending coefficient lists of scalars.  These routines
back root finding and minimal-polynomial work; heavy factorization over Q
is delegated to sympy, everything else stays in-package.
"""

from __future__ import annotations

import sympy
from gmpy2 import mpq

from .errors import QuadspecError, TowerTooDeep
from .scalars import (
    QE,
    Scalar,
    as_scalar,
    conj_scalar,
    is_rational,
    rat,
    sqrt_scalar,
)


def trim(coeffs: list[Scalar]) -> list[Scalar]:
    coeffs = [as_scalar(c) for c in coeffs]
    while coeffs and not isinstance(coeffs[-1], QE) and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def degree(coeffs) -> int:
    return len(trim(list(coeffs))) - 1


def add(f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else rat(0)
        b = g[i] if i < len(g) else rat(0)
        out.append(a + b)
    return trim(out)


def neg(f):
    return [-c for c in f]


def sub(f, g):
    return add(f, neg(g))


def mul(f, g):
    f, g = trim(list(f)), trim(list(g))
    if not f or not g:
        return []
    out = [rat(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(f, c):
    return trim([x * c for x in f])


def divmod_poly(f, g):
    """Quotient and remainder; g must be nonzero, coefficients in a field."""
    f = trim(list(f))
    g = trim(list(g))
    if not g:
        raise ZeroDivisionError("univariate division by zero")
    inv_lead = 1 / g[-1] if not isinstance(g[-1], QE) else g[-1].inverse()
    quot = [rat(0)] * max(0, len(f) - len(g) + 1)
    rem = list(f)
    while len(rem) >= len(g) and trim(rem):
        rem = trim(rem)
        if len(rem) < len(g):
            break
        shift = len(rem) - len(g)
        factor = rem[-1] * inv_lead
        quot[shift] = factor
        for i, c in enumerate(g):
            rem[shift + i] = rem[shift + i] - factor * c
        rem.pop()
    return trim(quot), trim(rem)


def monic(f):
    f = trim(list(f))
    if not f:
        return f
    inv = 1 / f[-1] if not isinstance(f[-1], QE) else f[-1].inverse()
    return [c * inv for c in f]


def gcd(f, g):
    a, b = trim(list(f)), trim(list(g))
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def derivative(f):
    return trim([c * i for i, c in enumerate(f)][1:])


def squarefree_part(f):
    f = trim(list(f))
    if len(f) <= 1:
        return monic(f)
    g = gcd(f, derivative(f))
    q, r = divmod_poly(f, g)
    if r:
        raise QuadspecError("inexact squarefree division")
    return monic(q)


def evaluate(f, x: Scalar) -> Scalar:
    total: Scalar = rat(0)
    for c in reversed(trim(list(f))):
        total = total * x + c
    return total


def conj(f):
    return [conj_scalar(c) for c in f]


def is_rational_poly(f) -> bool:
    return all(is_rational(c) for c in f)


# -- factorization over Q (sympy) and root extraction --------------------

_X = sympy.Symbol("x")


def _to_sympy(f):
    expr = sympy.Integer(0)
    for i, c in enumerate(f):
        c = rat(c)
        expr += sympy.Rational(int(c.numerator), int(c.denominator)) * _X**i
    return sympy.Poly(expr, _X, domain="QQ")


def _from_sympy(p) -> list:
    coeffs = p.all_coeffs()  # descending
    out = []
    for c in reversed(coeffs):
        c = sympy.Rational(c)
        out.append(mpq(int(c.p), int(c.q)))
    return trim(out)


def factor_rational(f) -> list[tuple[list, int]]:
    """Irreducible monic factors of a Q[x] polynomial with multiplicities."""
    f = trim(list(f))
    if degree(f) <= 0:
        return []
    _, factors = _to_sympy(f).factor_list()
    out = []
    for p, e in factors:
        out.append((monic(_from_sympy(p)), int(e)))
    return out


def quadratic_roots(f) -> list[Scalar]:
    """Both roots of a degree-2 polynomial, within Q or one extension."""
    c, b, a = f[0], f[1], f[2]
    disc = b * b - 4 * a * c
    s = sqrt_scalar(disc)
    inv2a = 1 / (2 * a) if not isinstance(a, QE) else (2 * a).inverse()
    r1 = (-b + s) * inv2a
    r2 = (-b - s) * inv2a
    return [r1, r2]


def root_multiplicity(f, r: Scalar) -> int:
    count = 0
    cur = trim(list(f))
    while len(cur) > 1:
        linear = [-r, rat(1)]
        q, rem = divmod_poly(cur, linear)
        if trim(rem):
            break
        count += 1
        cur = q
    return count


def roots_with_multiplicity(f, field_d: int | None):
    """All roots of f inside Q(sqrt(field_d)) or one new quadratic extension.

    Returns (roots, residual) where roots is a list of (root, multiplicity)
    and residual is the monic cofactor whose roots were left unsolved.
    New extensions are only introduced when the base field is Q; otherwise
    candidate roots must already lie in the base field.
    """
    f = trim(list(f))
    if degree(f) <= 0:
        return [], monic(f) if f else []
    roots: list[tuple[Scalar, int]] = []

    def try_root(r: Scalar):
        m = root_multiplicity(f, r)
        if m:
            roots.append((r, m))

    sf = squarefree_part(f)
    if is_rational_poly(sf):
        for factor, _ in factor_rational(sf):
            if degree(factor) == 1:
                try_root(-factor[0])
            elif degree(factor) == 2:
                try:
                    pair = quadratic_roots(factor)
                except TowerTooDeep:
                    continue
                for r in pair:
                    if field_d is not None and isinstance(r, QE) and r.d != field_d:
                        continue
                    try_root(r)
    else:
        norm = mul(sf, conj(sf))
        for factor, _ in factor_rational(norm):
            g = gcd(sf, factor)
            if degree(g) == 1:
                try_root(-g[0])
            elif degree(g) == 2:
                try:
                    for r in quadratic_roots(g):
                        if isinstance(r, QE) and r.d != field_d:
                            continue
                        try_root(r)
                except TowerTooDeep:
                    continue

    residual = monic(f)
    for r, m in roots:
        for _ in range(m):
            residual, rem = divmod_poly(residual, [-r, rat(1)])
            if trim(rem):
                raise QuadspecError("root division failed")
    return roots, monic(residual)
