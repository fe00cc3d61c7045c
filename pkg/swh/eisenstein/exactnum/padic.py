# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Places above p, Frobenius, valuations and truncated p-adic values.

A place is described by :class:`PlaceContext`. When p splits in the
coefficient field the completion is Z_p, reached through a Hensel-lifted root
of w^2 - s*w - t; when p is inert it is the unramified quadratic extension,
represented on the basis {1, w}.
"""

from __future__ import annotations

import functools
import math
from typing import Optional, Tuple, Union

import attr
import gmpy2
from gmpy2 import mpq
import sympy

from swh.eisenstein.exactnum.modular import (
    ModularQuad,
    PlaceResidue,
    kronecker,
    lifted_roots,
    p_valuation,
    reduce_rational,
)
from swh.eisenstein.exactnum.quadratic import QuadFieldDesc, QuadRat
from swh.eisenstein.exc import (
    InternalInconsistency,
    NotInvertibleError,
    PrecisionExhausted,
    PreconditionViolation,
    RamifiedPrimeError,
)

EXACT = math.inf

Valuation = Union[int, float]


@attr.s(frozen=True, slots=True)
class PlaceContext:
    field = attr.ib(type=QuadFieldDesc)
    p = attr.ib(type=int)
    k = attr.ib(type=int)
    chi_coeff = attr.ib(type=int)
    chi_K = attr.ib(type=Optional[int], default=None)
    roots = attr.ib(type=Optional[Tuple[int, int]], default=None)
    place = attr.ib(type=int, default=0)

    @classmethod
    def create(
        cls,
        field: QuadFieldDesc,
        p: int,
        k: int = 2,
        cm_discriminant: Optional[int] = None,
        place: int = 0,
    ) -> "PlaceContext":
        """Build the context for the place of index ``place`` above ``p``.

        ``cm_discriminant`` is d_K*f^2 for the CM order; it only feeds
        ``chi_K``.
        """
        if p <= 3 or not sympy.isprime(p):
            raise PreconditionViolation(f"expected a prime > 3, got {p}")
        if k < 1:
            raise PreconditionViolation(f"p-adic precision must be >= 1, got {k}")
        if field.is_rational:
            chi_coeff = 1
            roots: Optional[Tuple[int, int]] = None
        else:
            chi_coeff = kronecker(field.disc, p)
            if chi_coeff == 0:
                raise RamifiedPrimeError(f"{p} ramifies in {field}")
            roots = lifted_roots(field.s, field.t, p, k) if chi_coeff == 1 else None
        if place not in (0, 1) or (place == 1 and roots is None):
            raise PreconditionViolation(f"no place of index {place} above {p}")
        chi_K = kronecker(cm_discriminant, p) if cm_discriminant is not None else None
        return cls(field, p, k, chi_coeff, chi_K, roots, place)

    @property
    def frobenius_nontrivial(self) -> bool:
        return self.chi_coeff == -1

    @property
    def is_split(self) -> bool:
        return self.roots is not None

    @property
    def places(self) -> Tuple[int, ...]:
        return (0, 1) if self.is_split else (0,)

    @property
    def root(self) -> int:
        """The chosen root of w^2 - s*w - t mod p^k (0 in rational mode)."""
        if self.roots is None:
            if self.field.is_rational:
                return 0
            raise PreconditionViolation(f"{self.p} is inert in {self.field}")
        return self.roots[self.place]

    def root_mod(self, prec: int) -> int:
        if self.roots is None:
            return self.root
        return lifted_roots(self.field.s, self.field.t, self.p, prec)[self.place]

    def with_place(self, place: int) -> "PlaceContext":
        if place not in self.places:
            raise PreconditionViolation(f"no place of index {place} above {self.p}")
        return attr.evolve(self, place=place)

    def with_precision(self, k: int) -> "PlaceContext":
        roots = self.roots
        if roots is not None:
            roots = lifted_roots(self.field.s, self.field.t, self.p, k)
        return attr.evolve(self, k=k, roots=roots)

    def residue_ring(self) -> "ResidueRing":
        if self.roots is None and not self.field.is_rational:
            return QuadResidueRing(self.p, self.field)
        return IntegerResidueRing(self.p)


@attr.s(frozen=True, slots=True)
class IntegerResidueRing:
    """Residues of Z_p; elements are python ints."""

    p = attr.ib(type=int)

    def reduce(self, x: int, prec: int) -> int:
        return x % self.p**prec

    def add(self, x: int, y: int) -> int:
        return x + y

    def neg(self, x: int) -> int:
        return -x

    def mul(self, x: int, y: int) -> int:
        return x * y

    def shift(self, x: int, e: int) -> int:
        return x * self.p**e if e else x

    def is_zero_mod(self, x: int, prec: int) -> bool:
        return x % self.p**prec == 0

    def split(self, x: int) -> Tuple[int, int]:
        unit, e = gmpy2.remove(x, self.p)
        return int(e), int(unit)

    def inverse(self, x: int, prec: int) -> int:
        return int(gmpy2.invert(x, self.p**prec))

    def frobenius(self, x: int) -> int:
        return x

    def zero_element(self) -> int:
        return 0

    def format(self, x: int) -> str:
        return str(x)


@attr.s(frozen=True, slots=True)
class QuadResidueRing:
    """Residues of the unramified quadratic extension of Z_p, as pairs (a, b)
    standing for a + b*w."""

    p = attr.ib(type=int)
    field = attr.ib(type=QuadFieldDesc)

    def reduce(self, x, prec: int):
        m = self.p**prec
        return (x[0] % m, x[1] % m)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def mul(self, x, y):
        bb = x[1] * y[1]
        return (
            x[0] * y[0] + self.field.t * bb,
            x[0] * y[1] + x[1] * y[0] + self.field.s * bb,
        )

    def shift(self, x, e: int):
        if not e:
            return x
        f = self.p**e
        return (x[0] * f, x[1] * f)

    def is_zero_mod(self, x, prec: int) -> bool:
        m = self.p**prec
        return x[0] % m == 0 and x[1] % m == 0

    def split(self, x) -> Tuple[int, Tuple[int, int]]:
        a, b = x
        if not a:
            _, e = gmpy2.remove(b, self.p)
        elif not b:
            _, e = gmpy2.remove(a, self.p)
        else:
            e = min(gmpy2.remove(a, self.p)[1], gmpy2.remove(b, self.p)[1])
        f = self.p ** int(e)
        return int(e), (a // f, b // f)

    def inverse(self, x, prec: int):
        m = self.p**prec
        a, b = x
        s, t = self.field.s, self.field.t
        norm = (a * a + s * a * b - t * b * b) % m
        if norm % self.p == 0:
            raise NotInvertibleError(f"{self.format(x)} is not a unit")
        inv = int(gmpy2.invert(norm, m))
        return ((a + s * b) * inv % m, -b * inv % m)

    def frobenius(self, x):
        return (x[0] + self.field.s * x[1], -x[1])

    def zero_element(self):
        return (0, 0)

    def format(self, x) -> str:
        return str(self.field.element(x[0], x[1]))


ResidueRing = Union[IntegerResidueRing, QuadResidueRing]


def _normalized(ring: ResidueRing, v: int, x, rel: int) -> "PadicScaled":
    if ring.is_zero_mod(x, rel):
        return PadicScaled(ring, v + rel)
    e, unit = ring.split(ring.reduce(x, rel))
    return PadicScaled(ring, v + e, ring.reduce(unit, rel - e), rel - e)


@attr.s(frozen=True, slots=True, repr=False)
class PadicScaled:
    """p^v times a unit known modulo p^prec.

    A zero is stored with ``u = None`` and ``v`` holding the absolute
    precision it is known to (``EXACT`` for a genuine zero). Multiplication is
    exact in (v, u); addition loses relative precision on cancellation.
    """

    ring = attr.ib()
    v = attr.ib(type=Valuation)
    u = attr.ib(default=None)
    prec = attr.ib(type=int, default=0)

    @classmethod
    def zero(cls, ring: ResidueRing, absolute: Valuation = EXACT) -> "PadicScaled":
        return cls(ring, absolute)

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def is_zero(self) -> bool:
        return self.u is None

    @property
    def is_exact_zero(self) -> bool:
        return self.u is None and self.v == EXACT

    @property
    def absolute_precision(self) -> Valuation:
        return self.v if self.u is None else self.v + self.prec

    def _truncated(self, absolute: Valuation) -> "PadicScaled":
        if absolute >= self.absolute_precision:
            return self
        if self.u is None or absolute <= self.v:
            return PadicScaled(self.ring, absolute)
        prec = int(absolute - self.v)
        return PadicScaled(self.ring, self.v, self.ring.reduce(self.u, prec), prec)

    def __add__(self, other: "PadicScaled") -> "PadicScaled":
        if self.u is None:
            return other._truncated(self.v)
        if other.u is None:
            return self._truncated(other.v)
        vmin = min(self.v, other.v)
        absolute = min(self.v + self.prec, other.v + other.prec)
        ring = self.ring
        total = ring.add(
            ring.shift(self.u, self.v - vmin), ring.shift(other.u, other.v - vmin)
        )
        return _normalized(ring, vmin, total, absolute - vmin)

    def __neg__(self) -> "PadicScaled":
        if self.u is None:
            return self
        u = self.ring.reduce(self.ring.neg(self.u), self.prec)
        return PadicScaled(self.ring, self.v, u, self.prec)

    def __sub__(self, other: "PadicScaled") -> "PadicScaled":
        return self + (-other)

    def __mul__(self, other: "PadicScaled") -> "PadicScaled":
        if self.u is None or other.u is None:
            return PadicScaled(self.ring, self.v + other.v)
        prec = min(self.prec, other.prec)
        u = self.ring.reduce(self.ring.mul(self.u, other.u), prec)
        return PadicScaled(self.ring, self.v + other.v, u, prec)

    def inverse(self) -> "PadicScaled":
        if self.u is None:
            if self.v == EXACT:
                raise NotInvertibleError("inverse of zero")
            raise PrecisionExhausted(
                f"inverse of a value indistinguishable from zero mod {self.p}^{self.v}"
            )
        return PadicScaled(
            self.ring, -self.v, self.ring.inverse(self.u, self.prec), self.prec
        )

    def __truediv__(self, other: "PadicScaled") -> "PadicScaled":
        return self * other.inverse()

    def __bool__(self) -> bool:
        return self.u is not None

    def scale_by_p(self, e: int) -> "PadicScaled":
        return attr.evolve(self, v=self.v + e)

    def frobenius(self) -> "PadicScaled":
        if self.u is None:
            return self
        u = self.ring.reduce(self.ring.frobenius(self.u), self.prec)
        return attr.evolve(self, u=u)

    def valuation(self) -> Valuation:
        """The valuation; for a zero known only to p^A with A >= 0 this is the
        lower bound A, and A < 0 raises :class:`PrecisionExhausted`."""
        if self.u is None and self.v < 0:
            raise PrecisionExhausted(
                f"value only known modulo {self.p}^{self.v}: valuation undetermined"
            )
        return self.v

    def residue(self, prec: int):
        """Image in the residue ring modulo p^prec; the value must be integral."""
        if self.u is None:
            if self.v < prec:
                raise PrecisionExhausted(
                    f"value known modulo {self.p}^{self.v}, residue mod "
                    f"{self.p}^{prec} requested"
                )
            return self.ring.zero_element()
        if self.v < 0:
            raise PreconditionViolation(f"{self} is not integral")
        if self.v + self.prec < prec:
            raise PrecisionExhausted(
                f"{self} does not determine a residue mod {self.p}^{prec}"
            )
        return self.ring.reduce(self.ring.shift(self.u, self.v), prec)

    def agrees_with(self, other: "PadicScaled", prec: int) -> bool:
        difference = self - other
        if difference.u is None:
            return True
        return difference.v >= prec

    def __str__(self) -> str:
        if self.u is None:
            return "0" if self.v == EXACT else f"O({self.p}^{self.v})"
        unit = self.ring.format(self.u)
        head = unit if self.v == 0 else f"{self.p}^{self.v}*({unit})"
        return f"{head} + O({self.p}^{self.v + self.prec})"

    __repr__ = __str__


def _p_power(p: int, e: int) -> mpq:
    return mpq(p**e) if e >= 0 else mpq(1, p ** (-e))


@functools.singledispatch
def frobenius(x, ctx: PlaceContext):
    """Coefficient-wise Artin action at p: identity when p splits in the
    coefficient field, w -> s - w when it is inert."""
    raise TypeError(f"no Frobenius action on {type(x).__name__}")


@frobenius.register(QuadRat)
def _frobenius_quadrat(x: QuadRat, ctx: PlaceContext) -> QuadRat:
    if ctx.frobenius_nontrivial:
        return x.conj()
    return x


@frobenius.register(PadicScaled)
def _frobenius_padic(x: PadicScaled, ctx: PlaceContext) -> PadicScaled:
    return x.frobenius()


def vp(x: QuadRat, ctx: PlaceContext) -> Valuation:
    """Valuation of ``x`` at the place of ``ctx``, ``math.inf`` for zero.

    At a split place the valuation of the p-primitive part x' = x/p^m is
    v_p(norm(x')) when x' lies in the chosen prime and 0 otherwise, as x'
    cannot lie in both primes above p.
    """
    p = ctx.p
    if not x:
        return EXACT
    if not x.b:
        return p_valuation(x.a, p)
    m = min(p_valuation(x.a, p), p_valuation(x.b, p))
    if ctx.roots is None:
        return m
    primitive = x * _p_power(p, -m)
    residue = (
        reduce_rational(primitive.a, p) + reduce_rational(primitive.b, p) * ctx.root
    ) % p
    if residue:
        return m
    return m + p_valuation(primitive.norm(), p)


def to_padic(x: QuadRat, ctx: PlaceContext, prec: Optional[int] = None) -> PadicScaled:
    """``x`` as a truncated p-adic value with ``prec`` digits of relative
    precision (default ``ctx.k``).

    The valuation is computed exactly first, so no digits are lost here. At a
    split place x may lie in the chosen prime only, so its coordinates are
    p-integral after dividing by p^m (m the coordinate valuation) but not by
    p^v; the extra v - m digits are split off after reduction.
    """
    prec = ctx.k if prec is None else prec
    ring = ctx.residue_ring()
    if not x:
        return PadicScaled.zero(ring)
    v = int(vp(x, ctx))
    m = int(coordinate_valuation(x, ctx.p))
    primitive = x * _p_power(ctx.p, -m)
    digits = prec + v - m
    modulus = ctx.p**digits
    a = reduce_rational(primitive.a, modulus)
    b = reduce_rational(primitive.b, modulus)
    if isinstance(ring, QuadResidueRing):
        return PadicScaled(ring, v, (a, b), prec)
    e, unit = ring.split((a + b * ctx.root_mod(digits)) % modulus)
    if m + e != v:
        raise InternalInconsistency(f"valuation of {x} at {ctx.p} is not {v}")
    return PadicScaled(ring, v, ring.reduce(unit, prec), prec)


def embed_place(
    x: QuadRat, ctx: PlaceContext, prec: Optional[int] = None
) -> PadicScaled:
    """Image of ``x`` in Z_p at the chosen split place, as a + b*r."""
    if not ctx.is_split and not ctx.field.is_rational:
        raise PreconditionViolation(f"{ctx.p} does not split in {ctx.field}")
    return to_padic(x, ctx, prec)


@functools.singledispatch
def valuation(x, ctx: PlaceContext) -> Valuation:
    """Valuation of a series coefficient at the place of ``ctx``."""
    raise TypeError(f"no valuation on {type(x).__name__}")


@valuation.register(QuadRat)
def _valuation_quadrat(x: QuadRat, ctx: PlaceContext) -> Valuation:
    return vp(x, ctx)


@valuation.register(PadicScaled)
def _valuation_padic(x: PadicScaled, ctx: PlaceContext) -> Valuation:
    return x.valuation()


@functools.singledispatch
def residue(x, ctx: PlaceContext, k: int) -> Union[ModularQuad, PlaceResidue]:
    """Reduction of an integral coefficient modulo p^k at the place of
    ``ctx``: a :class:`ModularQuad` when p is inert, a
    :class:`PlaceResidue` otherwise."""
    raise TypeError(f"no residue map on {type(x).__name__}")


@residue.register(QuadRat)
def _residue_quadrat(x: QuadRat, ctx: PlaceContext, k: int):
    if vp(x, ctx) < 0:
        raise PreconditionViolation(f"{x} is not integral at {ctx.p}")
    if ctx.is_split or ctx.field.is_rational:
        return _residue_padic(to_padic(x, ctx, k), ctx, k)
    return ModularQuad.from_quadrat(x, ctx.p, k)


@residue.register(PadicScaled)
def _residue_padic(x: PadicScaled, ctx: PlaceContext, k: int):
    value = x.residue(k)
    if isinstance(value, tuple):
        return ModularQuad(ctx.field, ctx.p, k, value[0], value[1])
    return PlaceResidue(ctx.p, k, value, ctx.place)


def coordinate_valuation(x: QuadRat, p: int) -> Valuation:
    """min(v_p(a), v_p(b)) for x = a + b*w: the valuation common to every
    place above p, for p prime to the discriminant."""
    if not x:
        return EXACT
    return min(p_valuation(x.a, p), p_valuation(x.b, p))
