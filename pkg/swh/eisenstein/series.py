# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Truncated Laurent series over a :class:`CoefficientDomain`.

A :class:`TruncatedSeries` is ``sum(c_n u^n for val <= n < prec) + O(u^prec)``
stored densely from its first nonzero coefficient. Operations never
extrapolate: the precision of a result is the largest one fully determined by
the inputs.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, Iterable, Iterator, List, Sequence, Tuple

import attr
from gmpy2 import mpq

from swh.eisenstein.exactnum.padic import PlaceContext, coordinate_valuation, frobenius
from swh.eisenstein.exc import NotInvertibleError, PreconditionViolation
from swh.eisenstein.interface import CoefficientDomain

logger = logging.getLogger(__name__)


def _convolve(domain: CoefficientDomain, a: Sequence, b: Sequence, length: int) -> List:
    """First ``length`` coefficients of the product of two coefficient lists."""
    is_zero = domain.is_zero
    nza = [(i, x) for i, x in enumerate(a[:length]) if not is_zero(x)]
    nzb = [(j, y) for j, y in enumerate(b[:length]) if not is_zero(y)]
    out: List[Any] = [None] * length
    for i, x in nza:
        for j, y in nzb:
            m = i + j
            if m >= length:
                break
            term = x * y
            out[m] = term if out[m] is None else out[m] + term
    zero = domain.zero()
    return [zero if c is None else c for c in out]


@attr.s(frozen=True, slots=True, repr=False)
class TruncatedSeries:
    domain = attr.ib()
    val = attr.ib(type=int)
    coeffs = attr.ib(type=tuple, converter=tuple)
    prec = attr.ib(type=int)

    def __attrs_post_init__(self):
        if len(self.coeffs) != self.prec - self.val:
            raise PreconditionViolation(
                f"{len(self.coeffs)} coefficients do not span u^{self.val} to "
                f"u^{self.prec}"
            )

    @classmethod
    def from_coefficients(
        cls, domain: CoefficientDomain, val: int, coeffs: Iterable, prec: int
    ) -> "TruncatedSeries":
        """Build ``sum(coeffs[i] u^(val+i)) + O(u^prec)``, coercing the
        coefficients and trimming leading zeros."""
        if prec <= val:
            return cls(domain, prec, (), prec)
        values = [domain.coerce(c) for c in list(coeffs)[: prec - val]]
        values.extend(domain.zero() for _ in range(prec - val - len(values)))
        start = 0
        while start < len(values) and domain.is_zero(values[start]):
            start += 1
        return cls(domain, val + start, tuple(values[start:]), prec)

    @classmethod
    def from_dict(
        cls, domain: CoefficientDomain, terms: Dict[int, Any], prec: int
    ) -> "TruncatedSeries":
        """
        >>> from swh.eisenstein.domains import ExactDomain
        >>> from swh.eisenstein.exactnum.quadratic import QuadFieldDesc
        >>> dom = ExactDomain(QuadFieldDesc(1, 1))
        >>> print(TruncatedSeries.from_dict(dom, {-1: 1, 1: 1}, 4))
        u^-1 + u + O(u^4)
        """
        terms = {n: c for n, c in terms.items() if n < prec}
        if not terms:
            return cls(domain, prec, (), prec)
        val = min(terms)
        coeffs = [terms.get(n, 0) for n in range(val, prec)]
        return cls.from_coefficients(domain, val, coeffs, prec)

    @classmethod
    def variable(cls, domain: CoefficientDomain, prec: int) -> "TruncatedSeries":
        return cls.from_dict(domain, {1: 1}, prec)

    @classmethod
    def constant(cls, domain: CoefficientDomain, c, prec: int) -> "TruncatedSeries":
        return cls.from_dict(domain, {0: c}, prec)

    def _make(self, val: int, coeffs: Iterable, prec: int) -> "TruncatedSeries":
        return TruncatedSeries.from_coefficients(self.domain, val, coeffs, prec)

    def _check_domain(self, other: "TruncatedSeries") -> None:
        if other.domain != self.domain:
            raise PreconditionViolation(
                f"cannot mix series over {self.domain} and {other.domain}"
            )

    def _as_series(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check_domain(other)
            return other
        return TruncatedSeries.constant(self.domain, other, max(self.prec, 1))

    def _at(self, n: int):
        if n < self.val:
            return self.domain.zero()
        return self.coeffs[n - self.val]

    def coefficient(self, n: int):
        """Coefficient of u^n; asking beyond the precision is an error."""
        if n >= self.prec:
            raise PreconditionViolation(
                f"coefficient of u^{n} requested from a series known mod u^{self.prec}"
            )
        return self._at(n)

    __getitem__ = coefficient

    def _dense(self, start: int, stop: int) -> List:
        return [self._at(n) for n in range(start, stop)]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> Iterator[Tuple[int, Any]]:
        """The nonzero (exponent, coefficient) pairs, in increasing order."""
        for n, c in enumerate(self.coeffs, start=self.val):
            if not self.domain.is_zero(c):
                yield n, c

    def __add__(self, other) -> "TruncatedSeries":
        other = self._as_series(other)
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        coeffs = [self._at(n) + other._at(n) for n in range(val, prec)]
        return self._make(val, coeffs, prec)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        negated = [-c for c in self.coeffs]
        return TruncatedSeries(self.domain, self.val, negated, self.prec)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._as_series(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._as_series(other) - self

    def scale(self, c) -> "TruncatedSeries":
        c = self.domain.coerce(c)
        return self._make(self.val, [x * c for x in self.coeffs], self.prec)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_domain(other)
        val = self.val + other.val
        prec = min(self.val + other.prec, other.val + self.prec)
        product = _convolve(self.domain, self.coeffs, other.coeffs, prec - val)
        return self._make(val, product, prec)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        """1/f; the leading coefficient must be invertible in the domain."""
        if not self.coeffs:
            raise NotInvertibleError(
                f"inverse of a series known only as O(u^{self.prec})"
            )
        domain = self.domain
        try:
            lead = self.coeffs[0].inverse()
        except ZeroDivisionError as e:
            raise NotInvertibleError(f"leading coefficient is not invertible: {e}")
        tail = [
            (i, c) for i, c in enumerate(self.coeffs) if i and not domain.is_zero(c)
        ]
        inv: List[Any] = [lead]
        for n in range(1, len(self.coeffs)):
            acc = None
            for i, c in tail:
                if i > n:
                    break
                d = inv[n - i]
                if domain.is_zero(d):
                    continue
                term = c * d
                acc = term if acc is None else acc + term
            inv.append(domain.zero() if acc is None else -(acc * lead))
        return self._make(-self.val, inv, self.prec - 2 * self.val)

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check_domain(other)
            return self * other.inverse()
        return self.scale(self.domain.coerce(other).inverse())

    def __rtruediv__(self, other) -> "TruncatedSeries":
        return self._as_series(other) * self.inverse()

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return TruncatedSeries.constant(self.domain, 1, self.prec - self.val)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        assert result is not None
        return result

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec >= self.prec:
            return self
        return self._make(self.val, self.coeffs[: max(prec - self.val, 0)], prec)

    def _extended(self, prec: int) -> "TruncatedSeries":
        # zero padding, for Newton steps that refine the padded coefficients
        if prec <= self.prec:
            return self.truncate(prec)
        return self._make(self.val, self.coeffs, prec)

    def derive(self) -> "TruncatedSeries":
        coerce = self.domain.coerce
        coeffs = [c * coerce(n) for n, c in enumerate(self.coeffs, start=self.val)]
        return self._make(self.val - 1, coeffs, self.prec - 1)

    def integrate(self) -> "TruncatedSeries":
        """The antiderivative with zero constant term."""
        if self.prec <= -1 or (
            self.val <= -1 and not self.domain.is_zero(self._at(-1))
        ):
            raise PreconditionViolation("cannot integrate a series with a u^-1 term")
        coerce = self.domain.coerce
        coeffs = [
            self.domain.zero() if n == -1 else c * coerce(mpq(1, n + 1))
            for n, c in enumerate(self.coeffs, start=self.val)
        ]
        return self._make(self.val + 1, coeffs, self.prec + 1)

    def compose(self, g: "TruncatedSeries") -> "TruncatedSeries":
        """f(g(u)) for g of positive valuation.

        The nonnegative part of f is evaluated by Horner's rule in g, the
        principal part by Horner's rule in 1/g.
        """
        self._check_domain(g)
        if not g.coeffs or g.val <= 0:
            raise PreconditionViolation(
                f"cannot substitute a series of valuation {g.val} (need >= 1)"
            )
        domain = self.domain
        vg = g.val
        exponents = [n for n, _ in self.terms()]
        principal = [n for n in exponents if n < 0]
        prec = min(vg * self.prec, g.prec)
        if principal:
            prec = min(prec, g.prec + vg * (min(principal) - 1))
        logger.debug(
            "Composing series: %d terms into precision %d", len(exponents), prec
        )

        if prec > 0:
            length = prec
            gl = g._dense(0, length)
            top = min(self.prec - 1, (length - 1) // vg)
            acc: List[Any] = []
            for n in range(top, -1, -1):
                if acc:
                    acc = _convolve(domain, acc, gl, length)
                    acc[0] = acc[0] + self._at(n)
                elif not domain.is_zero(self._at(n)):
                    acc = [self._at(n)] + [domain.zero()] * (length - 1)
            result = self._make(0, acc, prec)
        else:
            result = self._make(prec, [], prec)

        if principal:
            h = g.inverse()
            tail = None
            for j in range(-min(principal), 0, -1):
                term = TruncatedSeries.constant(domain, self._at(-j), g.prec)
                tail = term if tail is None else tail + term
                tail = tail * h
            result = result + tail
        return result.truncate(prec)

    def revert(self) -> "TruncatedSeries":
        """The compositional inverse g, with f(g(u)) = u, by Newton iteration."""
        if self.val != 1:
            raise PreconditionViolation(
                f"only series of valuation 1 can be reverted, got {self.val}"
            )
        try:
            lead = self.coeffs[0].inverse()
        except ZeroDivisionError as e:
            raise NotInvertibleError(f"leading coefficient is not invertible: {e}")
        target = self.prec
        g = self._make(1, [lead], min(2, target))
        fprime = self.derive()
        m = g.prec
        while m < target:
            m = min(2 * m, target)
            gm = g._extended(m)
            error = self.truncate(m).compose(gm) - TruncatedSeries.variable(
                self.domain, m
            )
            slope = fprime.truncate(m - 1).compose(gm)
            g = (gm - error / slope).truncate(m)
            logger.debug("Reversion reached precision %d", m)
        return g

    def substitute_power(self, p: int) -> "TruncatedSeries":
        """f(u^p)."""
        if p < 1:
            raise PreconditionViolation(f"cannot substitute u^{p}")
        coeffs: List[Any] = [self.domain.zero()] * (p * (self.prec - self.val))
        for i, c in enumerate(self.coeffs):
            coeffs[p * i] = c
        return TruncatedSeries(self.domain, p * self.val, coeffs, p * self.prec)

    def frobenius_series(self, ctx: PlaceContext) -> "TruncatedSeries":
        """Coefficient-wise Frobenius at the place of ``ctx``."""
        coeffs = [frobenius(c, ctx) for c in self.coeffs]
        return TruncatedSeries(self.domain, self.val, coeffs, self.prec)

    def has_parity(self, parity: int) -> bool:
        """True when every nonzero coefficient sits at an exponent of the
        given parity (1 for odd, 0 for even)."""
        return all(n % 2 == parity % 2 for n, _ in self.terms())

    def map_coefficients(self, func, domain: CoefficientDomain) -> "TruncatedSeries":
        """The series with ``func`` applied to each coefficient, over ``domain``."""
        return TruncatedSeries.from_coefficients(
            domain, self.val, [func(c) for c in self.coeffs], self.prec
        )

    def to_text(self, var: str = "u") -> str:
        parts = [_format_term(self.domain.format(c), n, var) for n, c in self.terms()]
        parts.append(f"O({var}^{self.prec})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"<TruncatedSeries {self.to_text()}>"


def _format_term(text: str, n: int, var: str) -> str:
    if n == 0:
        return text
    monomial = var if n == 1 else f"{var}^{n}"
    if text == "1":
        return monomial
    if text == "-1":
        return f"-{monomial}"
    if " " in text or "+" in text[1:] or "-" in text[1:]:
        return f"({text})*{monomial}"
    return f"{text}*{monomial}"


@attr.s(frozen=True, slots=True)
class BivariateSeries:
    """A power series in X and Y known modulo terms of total degree ``prec``.

    Only the nonzero terms are stored, keyed by (degree in X, degree in Y).
    """

    domain = attr.ib()
    terms = attr.ib(type=dict)
    prec = attr.ib(type=int)

    @classmethod
    def from_terms(
        cls, domain: CoefficientDomain, terms: Dict[Tuple[int, int], Any], prec: int
    ) -> "BivariateSeries":
        kept = {}
        for (i, j), c in terms.items():
            if i < 0 or j < 0:
                raise PreconditionViolation("bivariate series have no principal part")
            c = domain.coerce(c)
            if i + j < prec and not domain.is_zero(c):
                kept[i, j] = c
        return cls(domain, kept, prec)

    @classmethod
    def embed(cls, f: TruncatedSeries, variable: str) -> "BivariateSeries":
        """f(X) or f(Y) for a power series f."""
        if f.val < 0:
            raise PreconditionViolation("cannot embed a Laurent series")
        if variable == "X":
            terms = {(n, 0): c for n, c in f.terms()}
        elif variable == "Y":
            terms = {(0, n): c for n, c in f.terms()}
        else:
            raise PreconditionViolation(f"unknown variable {variable!r}")
        return cls(f.domain, terms, f.prec)

    def coefficient(self, i: int, j: int):
        if i + j >= self.prec:
            raise PreconditionViolation(
                f"X^{i}*Y^{j} is beyond total degree {self.prec}"
            )
        return self.terms.get((i, j), self.domain.zero())

    def coefficient_series(self, j: int) -> TruncatedSeries:
        """The coefficient of Y^j, as a series in X."""
        terms = {i: c for (i, jj), c in self.terms.items() if jj == j}
        return TruncatedSeries.from_dict(self.domain, terms, self.prec - j)

    def swap(self) -> "BivariateSeries":
        return BivariateSeries(
            self.domain, {(j, i): c for (i, j), c in self.terms.items()}, self.prec
        )

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        prec = min(self.prec, other.prec)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms[key] + c if key in terms else c
        return BivariateSeries.from_terms(self.domain, terms, prec)

    def __neg__(self) -> "BivariateSeries":
        return BivariateSeries(
            self.domain, {k: -c for k, c in self.terms.items()}, self.prec
        )

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self + (-other)

    def _lowest_degree(self) -> int:
        return min((i + j for i, j in self.terms), default=self.prec)

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        prec = min(
            self._lowest_degree() + other.prec, other._lowest_degree() + self.prec
        )
        terms: Dict[Tuple[int, int], Any] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                if i1 + i2 + j1 + j2 >= prec:
                    continue
                key = (i1 + i2, j1 + j2)
                term = c1 * c2
                terms[key] = terms[key] + term if key in terms else term
        return BivariateSeries.from_terms(self.domain, terms, prec)

    def substitute_into(self, f: TruncatedSeries) -> "BivariateSeries":
        """f(B) for this series B, which must have no constant term."""
        if (0, 0) in self.terms:
            raise PreconditionViolation("cannot substitute a series with constant term")
        if f.val < 0:
            raise PreconditionViolation("cannot substitute into a Laurent series")
        low = self._lowest_degree()
        prec = min(self.prec, low * f.prec) if low else self.prec
        acc = BivariateSeries(self.domain, {}, prec)
        for n in range(f.prec - 1, -1, -1):
            acc = acc * self
            c = f._at(n)
            if not self.domain.is_zero(c):
                acc = acc + BivariateSeries(self.domain, {(0, 0): c}, prec)
        prec = min(acc.prec, prec)
        return BivariateSeries.from_terms(self.domain, acc.terms, prec)


def honda_quotient_check(
    A: TruncatedSeries, B: TruncatedSeries, p: int, N: int
) -> bool:
    """Whether (A^n - B^n)/n is p times an integral series for 1 <= n <= N.

    A and B must be exact series with p-integral coefficients, congruent
    modulo p; anything else raises :class:`PreconditionViolation` rather than
    returning False.
    """
    for name, series in (("A", A), ("B", B)):
        if any(coordinate_valuation(c, p) < 0 for _, c in series.terms()):
            raise PreconditionViolation(f"{name} is not {p}-integral")
    if any(coordinate_valuation(c, p) < 1 for _, c in (A - B).terms()):
        raise PreconditionViolation(f"A and B are not congruent modulo {p}")
    a_power, b_power = A, B
    for n in range(1, N + 1):
        if n > 1:
            a_power, b_power = a_power * A, b_power * B
        quotient = (a_power - b_power) / n
        for exponent, c in quotient.terms():
            if coordinate_valuation(c, p) < 1:
                logger.debug(
                    "(A^%d - B^%d)/%d has coefficient %s at u^%d", n, n, n, c, exponent
                )
                return False
    return True
