# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Exact arithmetic in Q(w), w^2 = s*w + t, with gmpy2 rational coordinates.

The textual form of an element is ``a/b + c/d*w`` with optional terms, e.g.
``13/2 + 21/2*w``, ``-w``, ``7``. :func:`parse_quadrat` reads back exactly what
:meth:`QuadRat.__str__` writes.
"""

from __future__ import annotations

import re
from typing import Tuple, Union

import attr
import gmpy2
from gmpy2 import mpq, mpz

from swh.eisenstein.exc import PreconditionViolation

Rational = Union[int, "mpz", "mpq"]

_TERM_RE = re.compile(r"[+-]?[^+-]+")


def _field_validator(instance: "QuadFieldDesc", attribute, value) -> None:
    s, t = instance.s, instance.t
    if s == 0 and t == 0:
        return
    disc = s * s + 4 * t
    if disc <= 0:
        raise PreconditionViolation(
            f"w^2 = {s}*w + {t} does not define a real quadratic field"
        )
    if gmpy2.is_square(disc):
        raise PreconditionViolation(
            f"w^2 = {s}*w + {t} has rational roots (discriminant {disc})"
        )


@attr.s(frozen=True, slots=True)
class QuadFieldDesc:
    """The coefficient field Q(w) with w^2 = s*w + t.

    ``s = t = 0`` is the degenerate mode where every element is rational.
    """

    s = attr.ib(type=int, converter=int)
    t = attr.ib(type=int, converter=int, validator=_field_validator)

    @property
    def disc(self) -> int:
        return self.s * self.s + 4 * self.t

    @property
    def is_rational(self) -> bool:
        return self.s == 0 and self.t == 0

    def element(self, a: Rational = 0, b: Rational = 0) -> "QuadRat":
        if self.is_rational and b:
            raise PreconditionViolation("rational coefficient mode has no w")
        return QuadRat(self, mpq(a), mpq(b))

    @property
    def zero(self) -> "QuadRat":
        return self.element(0)

    @property
    def one(self) -> "QuadRat":
        return self.element(1)

    @property
    def w(self) -> "QuadRat":
        return self.element(0, 1)

    def coerce(self, value) -> "QuadRat":
        if isinstance(value, QuadRat):
            value._check_field(self)
            return value
        return self.element(value)

    def parse(self, text: str) -> "QuadRat":
        return parse_quadrat(text, self)

    def __str__(self) -> str:
        if self.is_rational:
            return "Q"
        return f"Q(w), w^2 = {self.s}*w + {self.t}"


@attr.s(frozen=True, slots=True, repr=False)
class QuadRat:
    """An element a + b*w of a :class:`QuadFieldDesc`.

    Coordinates are gmpy2 ``mpq`` values, always kept in lowest terms."""

    field = attr.ib(type=QuadFieldDesc, eq=True)
    a = attr.ib(type=mpq)
    b = attr.ib(type=mpq)

    def _check_field(self, field: QuadFieldDesc) -> None:
        if field is not self.field and field != self.field:
            raise PreconditionViolation(
                f"cannot mix elements of {self.field} and {field}"
            )

    def _other(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            other._check_field(self.field)
            return other
        return QuadRat(self.field, mpq(other), mpq(0))

    def __add__(self, other) -> "QuadRat":
        if not isinstance(other, QuadRat):
            return QuadRat(self.field, self.a + other, self.b)
        other._check_field(self.field)
        return QuadRat(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> "QuadRat":
        return QuadRat(self.field, -self.a, -self.b)

    def __sub__(self, other) -> "QuadRat":
        if not isinstance(other, QuadRat):
            return QuadRat(self.field, self.a - other, self.b)
        other._check_field(self.field)
        return QuadRat(self.field, self.a - other.a, self.b - other.b)

    def __rsub__(self, other) -> "QuadRat":
        return (-self) + other

    def __mul__(self, other) -> "QuadRat":
        if not isinstance(other, QuadRat):
            other = mpq(other)
            return QuadRat(self.field, self.a * other, self.b * other)
        other._check_field(self.field)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        if not b1:
            return QuadRat(self.field, a1 * a2, a1 * b2)
        if not b2:
            return QuadRat(self.field, a1 * a2, b1 * a2)
        bb = b1 * b2
        f = self.field
        return QuadRat(f, a1 * a2 + f.t * bb, a1 * b2 + a2 * b1 + f.s * bb)

    __rmul__ = __mul__

    def conj(self) -> "QuadRat":
        return QuadRat(self.field, self.a + self.field.s * self.b, -self.b)

    def norm(self) -> mpq:
        a, b = self.a, self.b
        return a * a + self.field.s * a * b - self.field.t * b * b

    def trace(self) -> mpq:
        return 2 * self.a + self.field.s * self.b

    def inverse(self) -> "QuadRat":
        if not self:
            raise ZeroDivisionError("inverse of zero in the coefficient field")
        if not self.b:
            return QuadRat(self.field, 1 / self.a, mpq(0))
        n = self.norm()
        c = self.conj()
        return QuadRat(self.field, c.a / n, c.b / n)

    def __truediv__(self, other) -> "QuadRat":
        if not isinstance(other, QuadRat):
            other = mpq(other)
            if not other:
                raise ZeroDivisionError("division by zero")
            return QuadRat(self.field, self.a / other, self.b / other)
        return self * self._other(other).inverse()

    def __rtruediv__(self, other) -> "QuadRat":
        return self._other(other) * self.inverse()

    def __pow__(self, n: int) -> "QuadRat":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return not self.b

    def is_integral(self) -> bool:
        """True when both coordinates are integers."""
        return self.a.denominator == 1 and self.b.denominator == 1

    def denominator(self) -> mpz:
        return gmpy2.lcm(self.a.denominator, self.b.denominator)

    def coordinates(self) -> Tuple[mpq, mpq]:
        return self.a, self.b

    def __str__(self) -> str:
        return format_quadrat(self)

    def __repr__(self) -> str:
        return f"QuadRat({format_quadrat(self)!r})"


def _format_rational(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_quadrat(x: QuadRat) -> str:
    """Render ``x`` in wire syntax.

    >>> field = QuadFieldDesc(1, 1)
    >>> format_quadrat(field.element(mpq(13, 2), mpq(21, 2)))
    '13/2 + 21/2*w'
    >>> format_quadrat(field.element(-711, mpq(-2301, 2)))
    '-711 - 2301/2*w'
    >>> format_quadrat(field.element(0, -1))
    '-w'
    """
    a, b = x.a, x.b
    if not b:
        return _format_rational(a)
    magnitude = abs(b)
    wterm = "w" if magnitude == 1 else f"{_format_rational(magnitude)}*w"
    if not a:
        return wterm if b > 0 else f"-{wterm}"
    sign = "+" if b > 0 else "-"
    return f"{_format_rational(a)} {sign} {wterm}"


def parse_quadrat(text: str, field: QuadFieldDesc) -> QuadRat:
    """Parse the wire syntax written by :func:`format_quadrat`.

    >>> field = QuadFieldDesc(1, 1)
    >>> parse_quadrat("13/2 + 21/2*w", field) == field.element(mpq(13, 2), mpq(21, 2))
    True
    """
    compact = "".join(str(text).split())
    if not compact:
        raise PreconditionViolation("empty coefficient-field element")
    a = mpq(0)
    b = mpq(0)
    terms = _TERM_RE.findall(compact)
    if "".join(terms) != compact:
        raise PreconditionViolation(f"cannot parse {text!r}")
    for term in terms:
        if term.endswith("w"):
            coeff = term[:-1]
            if coeff.endswith("*"):
                coeff = coeff[:-1]
            if coeff in ("", "+"):
                b += 1
            elif coeff == "-":
                b -= 1
            else:
                b += _parse_rational(coeff, text)
        else:
            a += _parse_rational(term, text)
    return field.element(a, b)


def _parse_rational(token: str, text: str) -> mpq:
    try:
        return mpq(token.lstrip("+"))
    except (ValueError, ZeroDivisionError):
        raise PreconditionViolation(f"cannot parse {text!r}") from None
