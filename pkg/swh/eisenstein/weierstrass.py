# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Expansions attached to a curve y^2 = 4x^3 - g2*x - g3.

Series in z are Laurent expansions of the Weierstrass functions at the origin.
Series in u use the formal-group parameter u = -2x/y. The formal logarithm
and zeta(l(u)) are computed from the coordinate series x(u), y(u) by default,
which only involves ring operations over Z[g2/4, g3/4] until the final
integration; the composition and reversion route is kept as a cross-check.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Mapping, Optional, Tuple

import attr
from gmpy2 import mpq
from sympy.ntheory.factor_ import core

from swh.eisenstein.domains import ExactDomain
from swh.eisenstein.exactnum.padic import coordinate_valuation
from swh.eisenstein.exactnum.quadratic import QuadFieldDesc, QuadRat
from swh.eisenstein.exc import DegenerateCurve, PreconditionViolation
from swh.eisenstein.interface import CoefficientDomain
from swh.eisenstein.series import BivariateSeries, TruncatedSeries

logger = logging.getLogger(__name__)

MAX_FORMAL_GROUP_PRECISION = 12


def is_fundamental_discriminant(d: int) -> bool:
    """
    >>> [d for d in range(-20, 0) if is_fundamental_discriminant(d)]
    [-20, -19, -15, -11, -8, -7, -4, -3]
    """
    if d % 4 == 1:
        return core(abs(d)) == abs(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and core(abs(m)) == abs(m)
    return False


def _check_coefficient(instance, attribute, value: QuadRat) -> None:
    if value.field != instance.field:
        raise PreconditionViolation(
            f"{attribute.name} does not lie in {instance.field}"
        )
    if not _is_power_of_two(int(value.denominator())):
        raise PreconditionViolation(
            f"{attribute.name} = {value} is not integral away from 2"
        )


def _is_power_of_two(n: int) -> bool:
    return n > 0 and not n & (n - 1)


@attr.s(frozen=True, slots=True)
class CurveModel:
    """A CM curve y^2 = 4x^3 - g2*x - g3 over the coefficient field, with CM
    by the order of conductor ``f`` in Q(sqrt(dK))."""

    field = attr.ib(type=QuadFieldDesc)
    g2 = attr.ib(type=QuadRat, validator=_check_coefficient)
    g3 = attr.ib(type=QuadRat, validator=_check_coefficient)
    dK = attr.ib(type=int)
    f = attr.ib(type=int, default=1)
    name = attr.ib(type=Optional[str], default=None, eq=False)

    def __attrs_post_init__(self):
        if not self.disc_curve:
            raise DegenerateCurve(f"g2^3 - 27*g3^2 vanishes for {self}")
        if self.dK >= 0 or not is_fundamental_discriminant(self.dK):
            raise PreconditionViolation(
                f"{self.dK} is not a negative fundamental discriminant"
            )
        if self.f < 1:
            raise PreconditionViolation(f"conductor must be positive, got {self.f}")

    @classmethod
    def from_config(
        cls, config: Mapping[str, Any], name: Optional[str] = None
    ) -> "CurveModel":
        """Build a curve from a mapping with keys s, t, g2, g3, dK and
        optionally f; g2 and g3 are in wire syntax."""
        missing = [key for key in ("g2", "g3", "dK") if key not in config]
        if missing:
            raise PreconditionViolation(f"curve is missing {', '.join(missing)}")
        field = QuadFieldDesc(config.get("s", 0), config.get("t", 0))
        return cls(
            field,
            field.parse(str(config["g2"])),
            field.parse(str(config["g3"])),
            int(config["dK"]),
            int(config.get("f", 1)),
            name=name,
        )

    @property
    def disc_curve(self) -> QuadRat:
        return self.g2**3 - 27 * self.g3 * self.g3

    @property
    def j(self) -> QuadRat:
        return 1728 * self.g2**3 / self.disc_curve

    @property
    def norm_disc(self) -> mpq:
        return self.disc_curve.norm()

    @property
    def cm_discriminant(self) -> int:
        return self.dK * self.f * self.f

    def scaled(self, omega) -> "CurveModel":
        """The model of the lattice omega*Lambda: g2/omega^4, g3/omega^6."""
        omega = mpq(omega)
        if not omega:
            raise PreconditionViolation("cannot scale a lattice by 0")
        name = f"{self.name}*{omega}" if self.name else None
        return attr.evolve(
            self, g2=self.g2 / omega**4, g3=self.g3 / omega**6, name=name
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "s": self.field.s,
            "t": self.field.t,
            "g2": str(self.g2),
            "g3": str(self.g3),
            "dK": self.dK,
            "f": self.f,
            "j": str(self.j),
        }

    def __str__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"{label}y^2 = 4x^3 - ({self.g2})*x - ({self.g3})"


def _domain(curve: CurveModel, domain: Optional[CoefficientDomain]):
    return domain if domain is not None else ExactDomain(curve.field)


def _sum(terms: List, domain: CoefficientDomain):
    total = None
    for term in terms:
        total = term if total is None else total + term
    return domain.zero() if total is None else total


def wp_coeffs(
    curve: CurveModel, n_max: int, domain: Optional[CoefficientDomain] = None
) -> List:
    """c_2, ..., c_{n_max} with wp(z) = z^-2 + sum(c_n z^(2n-2)); entry i is
    c_{i+2}.

    >>> from swh.eisenstein.fixtures import get_curve
    >>> [str(c) for c in wp_coeffs(get_curve("cm15"), 3)]
    ['711/2 + 2301/4*w', '31495/4 + 12740*w']
    """
    if n_max < 2:
        raise PreconditionViolation(f"need n_max >= 2, got {n_max}")
    domain = _domain(curve, domain)
    coerce = domain.coerce
    c: Dict[int, Any] = {
        2: coerce(curve.g2) * coerce(mpq(1, 20)),
        3: coerce(curve.g3) * coerce(mpq(1, 28)),
    }
    for n in range(4, n_max + 1):
        half = [c[m] * c[n - m] for m in range(2, (n + 1) // 2)]
        total = _sum(half, domain)
        total = total + total
        if n % 2 == 0:
            total = total + c[n // 2] * c[n // 2]
        c[n] = total * coerce(mpq(3, (n - 3) * (2 * n + 1)))
    return [c[n] for n in range(2, n_max + 1)]


def wp_series(
    curve: CurveModel, prec: int, domain: Optional[CoefficientDomain] = None
) -> TruncatedSeries:
    domain = _domain(curve, domain)
    n_max = (prec + 1) // 2
    terms: Dict[int, Any] = {-2: 1}
    if n_max >= 2:
        for n, c in enumerate(wp_coeffs(curve, n_max, domain), start=2):
            terms[2 * n - 2] = c
    return TruncatedSeries.from_dict(domain, terms, prec)


def wp_prime_series(
    curve: CurveModel, prec: int, domain: Optional[CoefficientDomain] = None
) -> TruncatedSeries:
    return wp_series(curve, prec + 1, domain).derive()


def zeta_series(
    curve: CurveModel, prec: int, domain: Optional[CoefficientDomain] = None
) -> TruncatedSeries:
    """zeta(z) = 1/z - sum(c_n/(2n-1) z^(2n-1))."""
    domain = _domain(curve, domain)
    n_max = prec // 2
    terms: Dict[int, Any] = {-1: 1}
    if n_max >= 2:
        for n, c in enumerate(wp_coeffs(curve, n_max, domain), start=2):
            terms[2 * n - 1] = -(c * domain.coerce(mpq(1, 2 * n - 1)))
    return TruncatedSeries.from_dict(domain, terms, prec)


def u_of_l(
    curve: CurveModel, prec: int, domain: Optional[CoefficientDomain] = None
) -> TruncatedSeries:
    """The parameter u = -2*wp(l)/wp'(l) as a series in l."""
    wp = wp_series(curve, prec - 3, domain)
    wp_prime = wp_prime_series(curve, prec - 4, domain)
    return (wp / wp_prime).scale(-2)


def _w_coefficients(curve: CurveModel, length: int, domain: CoefficientDomain) -> List:
    """Coefficients of w = -2/y as a series in u, from
    w = u^3 + a*u*w^2 + b*w^3 with a = -g2/4, b = -g3/4."""
    coerce = domain.coerce
    is_zero = domain.is_zero
    a = coerce(-curve.g2 / 4)
    b = coerce(-curve.g3 / 4)
    zero = domain.zero()
    w: List[Any] = [zero] * length
    square: List[Any] = [zero] * length
    support: List[int] = []
    for n in range(3, length):
        m = n - 1
        square[m] = _sum(
            [w[i] * w[m - i] for i in support if i <= m - 3 and not is_zero(w[m - i])],
            domain,
        )
        cube = _sum(
            [
                w[i] * square[n - i]
                for i in support
                if i <= n - 6 and not is_zero(square[n - i])
            ],
            domain,
        )
        value = a * square[m] + b * cube
        if n == 3:
            value = value + domain.one()
        if not is_zero(value):
            w[n] = value
            support.append(n)
    return w


def coordinate_series(
    curve: CurveModel, prec: int, domain: Optional[CoefficientDomain] = None
) -> Tuple[TruncatedSeries, TruncatedSeries]:
    """x(u) = wp(l(u)) and y(u) = wp'(l(u)), both known mod u^prec.

    >>> from swh.eisenstein.fixtures import get_curve
    >>> x, y = coordinate_series(get_curve("cm15"), 1)
    >>> print(x)
    u^-2 + O(u^1)
    >>> print(y)
    -2*u^-3 + O(u^1)
    """
    domain = _domain(curve, domain)
    w = _w_coefficients(curve, prec + 6, domain)
    inverse = TruncatedSeries.from_coefficients(domain, 0, w[3:], prec + 3).inverse()
    x = _shift(inverse, -2).truncate(prec)
    y = _shift(inverse, -3).scale(-2)
    logger.debug("Coordinate series computed to precision %d", prec)
    return x, y


def _shift(f: TruncatedSeries, k: int) -> TruncatedSeries:
    return TruncatedSeries(f.domain, f.val + k, f.coeffs, f.prec + k)


def formal_log(
    curve: CurveModel,
    prec: int,
    domain: Optional[CoefficientDomain] = None,
    method: str = "coordinates",
) -> TruncatedSeries:
    """The formal logarithm l(u) = sum(b(n)/n u^n), b(1) = 1.

    ``method`` is ``coordinates`` (l' = x'/y) or ``reversion`` (revert u(l)).
    """
    if method == "reversion":
        return u_of_l(curve, prec, domain).revert()
    if method != "coordinates":
        raise PreconditionViolation(f"unknown method {method!r}")
    x, y = coordinate_series(curve, max(prec - 3, 0), domain)
    return (x.derive() / y).integrate().truncate(prec)


def zeta_of_log(
    curve: CurveModel,
    prec: int,
    domain: Optional[CoefficientDomain] = None,
    method: str = "coordinates",
    log: Optional[TruncatedSeries] = None,
) -> Tuple[TruncatedSeries, Any]:
    """zeta(l(u)) mod u^prec and its constant term d0.

    With ``coordinates``, d/du zeta(l(u)) = -x*x'/y = u*x'/2 is integrated;
    ``composition`` substitutes l into the zeta expansion.
    """
    domain = _domain(curve, domain)
    needed = max(prec + 2, 3) if method == "composition" else max(prec, 3)
    if log is None or log.prec < needed:
        log = formal_log(curve, needed, domain)
    d0 = log.inverse().coefficient(0)
    if method == "composition":
        composed = zeta_series(curve, prec, domain).compose(log.truncate(prec + 2))
        return composed, d0
    if method != "coordinates":
        raise PreconditionViolation(f"unknown method {method!r}")
    x, _ = coordinate_series(curve, prec - 1, domain)
    pole = TruncatedSeries.from_dict(domain, {-2: 1}, prec)
    regular = (_shift(x.derive(), 1).scale(mpq(1, 2)) + pole).integrate()
    principal = TruncatedSeries.from_dict(domain, {-1: 1, 0: d0}, prec)
    return (regular + principal).truncate(prec), d0


def xy_integrality_check(curve: CurveModel, N: int, p: int) -> bool:
    """Whether u^2*x(u) is in 1 + u*Z_p[[u]] and u^3*y(u) in -2 + u*Z_p[[u]]
    through u^N, at every place above p."""
    x, y = coordinate_series(curve, N + 1)
    for series, shift, lead in ((x, 2, 1), (y, 3, -2)):
        normalized = _shift(series, shift)
        expected = curve.field.element(lead)
        if normalized.val != 0 or normalized.coefficient(0) != expected:
            return False
        for n, c in normalized.terms():
            if coordinate_valuation(c, p) < 0:
                logger.info("Coordinate coefficient at u^%d is not %d-integral", n, p)
                return False
    return True


def formal_group_law(curve: CurveModel, prec: int) -> BivariateSeries:
    """F(X, Y) = u(l(X) + l(Y)) modulo total degree ``prec``."""
    if prec > MAX_FORMAL_GROUP_PRECISION:
        raise PreconditionViolation(
            "formal group law is limited to total degree "
            f"{MAX_FORMAL_GROUP_PRECISION}"
        )
    log = formal_log(curve, prec)
    total = BivariateSeries.embed(log, "X") + BivariateSeries.embed(log, "Y")
    return total.substitute_into(u_of_l(curve, prec))


@attr.s(frozen=True, slots=True)
class WeierstrassExpansion:
    curve = attr.ib(type=CurveModel)
    prec = attr.ib(type=int)
    domain = attr.ib()
    cs = attr.ib(type=tuple, converter=tuple)
    wp = attr.ib(type=TruncatedSeries)
    wp_prime = attr.ib(type=TruncatedSeries)
    zeta = attr.ib(type=TruncatedSeries)
    u_of_l = attr.ib(type=TruncatedSeries)
    log = attr.ib(type=TruncatedSeries)
    zeta_of_log = attr.ib(type=TruncatedSeries)
    d0 = attr.ib()

    def c(self, n: int):
        return self.cs[n - 2]

    def b(self, n: int):
        """b(n) = n * [u^n] l(u)."""
        return self.log.coefficient(n) * self.domain.coerce(n)

    def truncate(self, prec: int) -> "WeierstrassExpansion":
        if prec >= self.prec:
            return self
        return attr.evolve(
            self,
            prec=prec,
            cs=self.cs[: max((prec + 1) // 2 - 1, 0)],
            wp=self.wp.truncate(prec),
            wp_prime=self.wp_prime.truncate(prec),
            zeta=self.zeta.truncate(prec),
            u_of_l=self.u_of_l.truncate(prec),
            log=self.log.truncate(prec),
            zeta_of_log=self.zeta_of_log.truncate(prec),
        )


def expand(
    curve: CurveModel, prec: int, domain: Optional[CoefficientDomain] = None
) -> WeierstrassExpansion:
    """Every expansion of ``curve`` known mod z^prec or u^prec."""
    domain = _domain(curve, domain)
    logger.info(
        "Expanding %s to precision %d over the %s domain", curve, prec, domain.name
    )
    n_max = (prec + 1) // 2
    cs = wp_coeffs(curve, n_max, domain) if n_max >= 2 else []
    log = formal_log(curve, max(prec, 3), domain)
    zeta_log, d0 = zeta_of_log(curve, prec, domain, log=log)
    return WeierstrassExpansion(
        curve=curve,
        prec=prec,
        domain=domain,
        cs=cs,
        wp=wp_series(curve, prec, domain),
        wp_prime=wp_prime_series(curve, prec, domain),
        zeta=zeta_series(curve, prec, domain),
        u_of_l=u_of_l(curve, prec, domain),
        log=log.truncate(prec),
        zeta_of_log=zeta_log,
        d0=d0,
    )


def denominators_are_powers_of_two(values) -> bool:
    return all(_is_power_of_two(int(v.denominator())) for v in values)
