# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

from __future__ import annotations

from functools import lru_cache
import logging
import math
from typing import Iterable, Optional, Sequence, Tuple

import attr
import gmpy2
from gmpy2 import mpq
from sympy.ntheory import sqrt_mod
from sympy.ntheory.modular import crt

from swh.eisenstein.exactnum.quadratic import QuadFieldDesc, QuadRat
from swh.eisenstein.exc import (
    NotInvertibleError,
    PreconditionViolation,
    RamifiedPrimeError,
)

logger = logging.getLogger(__name__)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n) for n >= 0.

    >>> kronecker(5, 7), kronecker(-15, 1), kronecker(-15, 17)
    (-1, 1, 1)
    """
    if n < 0:
        raise PreconditionViolation(f"kronecker symbol modulus must be >= 0, got {n}")
    return int(gmpy2.kronecker(a, n))


def p_valuation(x, p: int) -> float:
    """p-adic valuation of a rational number, ``math.inf`` for zero."""
    q = mpq(x)
    if not q:
        return math.inf
    _, up = gmpy2.remove(q.numerator, p)
    _, down = gmpy2.remove(q.denominator, p)
    return int(up) - int(down)


def reduce_rational(x, modulus: int) -> int:
    """Image of a rational with denominator prime to ``modulus``."""
    q = mpq(x)
    den = q.denominator
    if gmpy2.gcd(den, modulus) != 1:
        raise NotInvertibleError(f"{q} has a denominator not prime to {modulus}")
    return int(q.numerator * gmpy2.invert(den, modulus) % modulus)


def hensel_lift_root(s: int, t: int, p: int, k: int) -> Tuple[int, int]:
    """Both roots of x^2 - s*x - t modulo p^k, ordered by their least
    nonnegative residue mod p.

    Each root mod p is refined by Newton steps that double the precision.

    >>> hensel_lift_root(1, 1, 11, 2)
    (37, 85)
    """
    disc = s * s + 4 * t
    chi = kronecker(disc, p)
    if chi == 0:
        raise RamifiedPrimeError(f"{p} ramifies in Q(sqrt({disc}))")
    if chi == -1:
        raise PreconditionViolation(f"x^2 - {s}*x - {t} has no root mod {p}")
    inv2 = int(gmpy2.invert(2, p))
    roots = sorted((s + r) * inv2 % p for r in sqrt_mod(disc % p, p, all_roots=True))
    if len(roots) != 2 or roots[0] == roots[1]:
        raise PreconditionViolation(f"x^2 - {s}*x - {t} has no simple roots mod {p}")
    lifted = tuple(_newton_lift(s, t, p, k, r) for r in roots)
    return lifted[0], lifted[1]


def _newton_lift(s: int, t: int, p: int, k: int, root: int) -> int:
    precision = 1
    while precision < k:
        precision = min(2 * precision, k)
        modulus = p**precision
        value = root * root - s * root - t
        slope = 2 * root - s
        root = (root - value * int(gmpy2.invert(slope, modulus))) % modulus
    return root % p**k


@lru_cache(maxsize=256)
def lifted_roots(s: int, t: int, p: int, k: int) -> Tuple[int, int]:
    return hensel_lift_root(s, t, p, k)


def rational_reconstruction(residue: int, modulus: int, bound: int) -> Optional[mpq]:
    """Find n/d with |n| <= bound, 0 < d <= bound and n = d*residue mod modulus.

    Uses the truncated extended Euclidean algorithm; the answer is unique when
    ``modulus > 2*bound**2``.

    >>> rational_reconstruction(2463, 17**3, 13)
    mpq(13,2)
    >>> rational_reconstruction(151, 289, 12) is None
    True
    """
    if modulus <= 2 * bound * bound:
        raise PreconditionViolation(
            f"modulus {modulus} too small for height bound {bound}"
        )
    r0, r1 = modulus, residue % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(t1, modulus) != 1:
        return None
    value = mpq(r1 if t1 > 0 else -r1, abs(t1))
    if (value.numerator - value.denominator * residue) % modulus:
        return None
    return value


def crt_combine(residues: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """Combine ``(value, modulus)`` pairs with pairwise coprime moduli.

    >>> crt_combine([(2, 3), (3, 5)])
    (8, 15)
    """
    if not residues:
        raise PreconditionViolation("nothing to combine")
    moduli = [int(m) for _, m in residues]
    for i, m in enumerate(moduli):
        for n in moduli[i + 1 :]:
            if math.gcd(m, n) != 1:
                raise PreconditionViolation(f"moduli {m} and {n} are not coprime")
    value, modulus = crt(moduli, [int(v) % m for (v, _), m in zip(residues, moduli)])
    return int(value), int(modulus)


@attr.s(frozen=True, slots=True)
class ModularQuad:
    """An element a + b*w of (Z/p^k)[w]."""

    field = attr.ib(type=QuadFieldDesc)
    p = attr.ib(type=int)
    k = attr.ib(type=int)
    a = attr.ib(type=int)
    b = attr.ib(type=int, default=0)

    def __attrs_post_init__(self):
        modulus = self.p**self.k
        object.__setattr__(self, "a", int(self.a) % modulus)
        object.__setattr__(self, "b", int(self.b) % modulus)

    @classmethod
    def from_quadrat(cls, x: QuadRat, p: int, k: int) -> "ModularQuad":
        modulus = p**k
        a = reduce_rational(x.a, modulus)
        b = reduce_rational(x.b, modulus)
        return cls(x.field, p, k, a, b)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def _same(self, other: "ModularQuad") -> None:
        if (self.p, self.k) != (other.p, other.k) or self.field != other.field:
            raise PreconditionViolation(f"cannot mix residues {self} and {other}")

    def __add__(self, other: "ModularQuad") -> "ModularQuad":
        self._same(other)
        return attr.evolve(self, a=self.a + other.a, b=self.b + other.b)

    def __sub__(self, other: "ModularQuad") -> "ModularQuad":
        self._same(other)
        return attr.evolve(self, a=self.a - other.a, b=self.b - other.b)

    def __neg__(self) -> "ModularQuad":
        return attr.evolve(self, a=-self.a, b=-self.b)

    def __mul__(self, other: "ModularQuad") -> "ModularQuad":
        self._same(other)
        s, t = self.field.s, self.field.t
        bb = self.b * other.b
        return attr.evolve(
            self,
            a=self.a * other.a + t * bb,
            b=self.a * other.b + self.b * other.a + s * bb,
        )

    def norm(self) -> int:
        a, b = self.a, self.b
        return (a * a + self.field.s * a * b - self.field.t * b * b) % self.modulus

    def is_unit(self) -> bool:
        return self.norm() % self.p != 0

    def reduce(self, k: int) -> "ModularQuad":
        if k > self.k:
            raise PreconditionViolation(f"cannot raise precision of {self} to {k}")
        return ModularQuad(self.field, self.p, k, self.a, self.b)

    def lift(self) -> QuadRat:
        """The representative with coordinates in [0, p^k)."""
        return self.field.element(self.a, self.b)

    def __str__(self) -> str:
        return f"{self.lift()} mod {self.p}^{self.k}"


def modring_inv(x: ModularQuad) -> ModularQuad:
    """Inverse of a unit of (Z/p^k)[w], as conj(x)/norm(x).

    >>> from swh.eisenstein.exactnum.quadratic import QuadFieldDesc
    >>> w = ModularQuad(QuadFieldDesc(1, 1), 7, 2, 0, 1)
    >>> str(modring_inv(w) * w)
    '1 mod 7^2'
    """
    n = x.norm()
    if n % x.p == 0:
        raise NotInvertibleError(f"{x} is not a unit")
    inv = int(gmpy2.invert(n, x.modulus))
    return attr.evolve(x, a=(x.a + x.field.s * x.b) * inv, b=-x.b * inv)


@attr.s(frozen=True, slots=True)
class PlaceResidue:
    """A residue of Z_p modulo p^k, seen at one place above p of a field
    in which p splits."""

    p = attr.ib(type=int)
    k = attr.ib(type=int)
    value = attr.ib(type=int)
    place = attr.ib(type=int, default=0)

    def __attrs_post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p**self.k)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def reduce(self, k: int) -> "PlaceResidue":
        if k > self.k:
            raise PreconditionViolation(f"cannot raise precision of {self} to {k}")
        return attr.evolve(self, k=k)

    def lift(self, field: QuadFieldDesc) -> QuadRat:
        return field.element(self.value)

    def __str__(self) -> str:
        return f"{self.value} mod {self.p}^{self.k}"


def combine_places(
    residues: Iterable[PlaceResidue], roots: Tuple[int, int], field: QuadFieldDesc
) -> ModularQuad:
    """Recover a + b*w mod p^k from its images a + b*r_i at both places."""
    by_place = {r.place: r for r in residues}
    if set(by_place) != {0, 1}:
        raise PreconditionViolation("both places are needed to recover coordinates")
    first, second = by_place[0], by_place[1]
    if (first.p, first.k) != (second.p, second.k):
        raise PreconditionViolation("residues at different precisions")
    modulus = first.modulus
    r0, r1 = roots[0] % modulus, roots[1] % modulus
    b = (first.value - second.value) * int(gmpy2.invert(r0 - r1, modulus))
    a = first.value - b * r0
    return ModularQuad(field, first.p, first.k, a, b)
