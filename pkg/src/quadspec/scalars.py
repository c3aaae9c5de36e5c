"""Exact scalar arithmetic: rationals and real quadratic extensions.

A scalar is either a :class:`gmpy2.mpq` rational or a :class:`QE` element
``a + b*sqrt(D)`` with ``a, b`` rational and ``D`` a square-free integer
different from 0 and 1.  ``sqrt(D)`` denotes the principal root, so for
``D > 0`` the positive real one.  Elements with ``b == 0`` are normalised
back to plain rationals, which keeps equality across the two kinds honest.

Only one extension level is supported.  Any operation that would need a
second independent radical raises :class:`TowerTooDeep`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from gmpy2 import mpq, mpz

import sympy

from .errors import MixedFields, TowerTooDeep

Rational = mpq
Scalar = Union[mpq, "QE"]

_ZERO = mpq(0)
_ONE = mpq(1)


def rat(value, den=None) -> mpq:
    """Coerce ints, strings like ``-3/5`` and Fractions to an exact rational."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, type(_ZERO)):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def _coerce_rational(value):
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, type(_ZERO)):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return None


class QE:
    """An element ``a + b*sqrt(d)`` of a quadratic extension of Q.

    Instances always have ``b != 0``; use :func:`make_qe` to build values
    that may collapse to a rational.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = rat(a)
        self.b = rat(b)
        self.d = int(d)
        if self.b == 0:
            raise ValueError("QE with b == 0; use make_qe")
        if self.d in (0, 1):
            raise ValueError("invalid extension discriminant")

    # -- helpers -------------------------------------------------------

    def _match(self, other):
        """Return (a, b) of other as an element of this field, or None."""
        q = _coerce_rational(other)
        if q is not None:
            return q, _ZERO
        if isinstance(other, QE):
            if other.d != self.d:
                raise MixedFields(
                    f"cannot combine sqrt({self.d}) with sqrt({other.d})"
                )
            return other.a, other.b
        return None

    def conj(self) -> "QE":
        """Galois conjugate a - b*sqrt(d)."""
        return QE(self.a, -self.b, self.d)

    def norm(self) -> mpq:
        """Field norm a^2 - d*b^2, a rational."""
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> mpq:
        return 2 * self.a

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        m = self._match(other)
        if m is None:
            return NotImplemented
        return make_qe(self.a + m[0], self.b + m[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QE(-self.a, -self.b, self.d)

    def __sub__(self, other):
        m = self._match(other)
        if m is None:
            return NotImplemented
        return make_qe(self.a - m[0], self.b - m[1], self.d)

    def __rsub__(self, other):
        m = self._match(other)
        if m is None:
            return NotImplemented
        return make_qe(m[0] - self.a, m[1] - self.b, self.d)

    def __mul__(self, other):
        m = self._match(other)
        if m is None:
            return NotImplemented
        oa, ob = m
        return make_qe(
            self.a * oa + self.d * self.b * ob,
            self.a * ob + self.b * oa,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QE":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero divisor in quadratic extension")
        return QE(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        m = self._match(other)
        if m is None:
            return NotImplemented
        oa, ob = m
        if ob == 0:
            if oa == 0:
                raise ZeroDivisionError("scalar division by zero")
            return QE(self.a / oa, self.b / oa, self.d)
        return self * QE(oa, -ob, self.d) / (oa * oa - self.d * ob * ob)

    def __rtruediv__(self, other):
        m = self._match(other)
        if m is None:
            return NotImplemented
        return make_qe(m[0], m[1], self.d) * self.inverse() if m[1] else m[0] * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result: Scalar = _ONE
        base: Scalar = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QE):
            return self.d == other.d and self.a == other.a and self.b == other.b
        q = _coerce_rational(other)
        if q is not None:
            return False  # b != 0 always
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return True

    def __repr__(self):
        return scalar_to_str(self)


def make_qe(a, b, d) -> Scalar:
    """Build ``a + b*sqrt(d)``, collapsing to a rational when ``b == 0``."""
    b = rat(b)
    if b == 0:
        return rat(a)
    return QE(a, b, d)


# -- generic scalar helpers -------------------------------------------


def as_scalar(value) -> Scalar:
    if isinstance(value, QE):
        return value
    return rat(value)


def is_zero(x: Scalar) -> bool:
    if isinstance(x, QE):
        return False
    return x == 0


def is_rational(x: Scalar) -> bool:
    return not isinstance(x, QE)


def conj_scalar(x: Scalar) -> Scalar:
    """Galois conjugation; identity on rationals."""
    if isinstance(x, QE):
        return x.conj()
    return x


def field_of(x: Scalar):
    """Discriminant of the field x lives in, or None for Q."""
    return x.d if isinstance(x, QE) else None


def common_field(values) -> int | None:
    """Discriminant shared by all QE values, or None if all rational."""
    d = None
    for v in values:
        if isinstance(v, QE):
            if d is None:
                d = v.d
            elif d != v.d:
                raise MixedFields(f"sqrt({d}) vs sqrt({v.d})")
    return d


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write ``n = d * k**2`` with d square-free; returns (d, k)."""
    if n == 0:
        return 0, 1
    sign = -1 if n < 0 else 1
    n = abs(n)
    d, k = 1, 1
    for p, e in sympy.factorint(n).items():
        if e % 2:
            d *= p
        k *= p ** (e // 2)
    return sign * int(d), int(k)


def sqrt_rational(q: mpq) -> Scalar:
    """Exact square root of a rational, as a rational or a QE element."""
    q = rat(q)
    if q == 0:
        return _ZERO
    num = int(q.numerator)
    den = int(q.denominator)
    d, k = squarefree_decompose(num * den)
    if d == 1:
        return mpq(k, den)
    return QE(0, mpq(k, den), d)


def sqrt_scalar(x: Scalar) -> Scalar:
    """Square root inside Q or the ambient Q(sqrt(D)); no towers.

    Rational input may create a fresh quadratic extension.  QE input must
    be a perfect square within its own field, otherwise TowerTooDeep.
    """
    if not isinstance(x, QE):
        return sqrt_rational(x)
    # (p + q*sqrt(d))^2 = x needs p^2 + d q^2 = x.a and 2 p q = x.b
    n = x.norm()
    s = sqrt_rational(n)
    if not is_rational(s) or isinstance(s, QE):
        raise TowerTooDeep(f"sqrt of {x} leaves Q(sqrt({x.d}))")
    for sgn in (1, -1):
        half = (x.a + sgn * s) / 2
        if half == 0:
            continue
        p = sqrt_rational(half)
        if is_rational(p):
            q = x.b / (2 * p)
            cand = make_qe(p, q, x.d)
            if cand * cand == x:
                return cand
            cand = make_qe(-p, -q, x.d)
            if cand * cand == x:
                return cand
    raise TowerTooDeep(f"sqrt of {x} leaves Q(sqrt({x.d}))")


# -- serialization -----------------------------------------------------

_QE_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)\s*"
    r"(?P<sign>[+-])\s*(?P<b>\d+(?:/\d+)?)\s*\*\s*sqrt\((?P<d>-?\d+)\)\s*$"
)
_BARE_SQRT_RE = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?P<b>\d+(?:/\d+)?)\s*\*\s*sqrt\((?P<d>-?\d+)\)\s*$"
)


def scalar_to_str(x: Scalar) -> str:
    """Render ``p/q`` or ``p/q+r/s*sqrt(D)``; denominators of 1 are kept."""
    if isinstance(x, QE):
        a, b = x.a, x.b
        head = f"{a.numerator}/{a.denominator}"
        sign = "+" if b >= 0 else "-"
        b = abs(b)
        return f"{head}{sign}{b.numerator}/{b.denominator}*sqrt({x.d})"
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


def scalar_from_str(text: str) -> Scalar:
    text = text.strip()
    m = _QE_RE.match(text)
    if m:
        b = rat(m.group("b"))
        if m.group("sign") == "-":
            b = -b
        return make_qe(rat(m.group("a")), b, int(m.group("d")))
    m = _BARE_SQRT_RE.match(text)
    if m:
        b = rat(m.group("b"))
        if m.group("sign") == "-":
            b = -b
        return make_qe(0, b, int(m.group("d")))
    return rat(text)
