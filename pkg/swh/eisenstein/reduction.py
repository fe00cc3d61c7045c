# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Reduction type of a CM curve at a prime.

For good reduction at p > 3 the type is read off the CM field: ordinary when
p splits in Q(sqrt(d_K)), supersingular when it is inert. Two independent
witnesses are available for cross-checking: the trace of Frobenius from a
point count, and the p-adic valuation of b(p).
"""

from collections import Counter
import enum
import logging
from typing import Callable, List, Optional, Tuple

import sympy

from swh.eisenstein.exactnum import (
    ModularQuad,
    PlaceContext,
    QuadFieldDesc,
    QuadRat,
    coordinate_valuation,
    kronecker,
    p_valuation,
    residue,
)
from swh.eisenstein.exc import InternalInconsistency, PreconditionViolation
from swh.eisenstein.weierstrass import CurveModel

logger = logging.getLogger(__name__)


class Reduction(str, enum.Enum):
    BAD = "bad"
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"

    def __str__(self) -> str:
        return self.value


def _check_prime(p: int) -> None:
    if p < 2 or not sympy.isprime(p):
        raise PreconditionViolation(f"{p} is not a prime")


def is_bad_prime(curve: CurveModel, p: int) -> bool:
    """p <= 3, p dividing norm(Delta), the coefficient field discriminant, or
    the CM discriminant d_K*f^2."""
    _check_prime(p)
    if p <= 3:
        return True
    if p_valuation(curve.norm_disc, p) != 0:
        return True
    if not curve.field.is_rational and curve.field.disc % p == 0:
        return True
    return curve.cm_discriminant % p == 0


def classify_prime(curve: CurveModel, p: int) -> Reduction:
    """Reduction type of ``curve`` at ``p``.

    >>> from swh.eisenstein.fixtures import get_curve
    >>> curve = get_curve("cm15")
    >>> [str(classify_prime(curve, p)) for p in (5, 7, 17)]
    ['bad', 'supersingular', 'ordinary']
    """
    if is_bad_prime(curve, p):
        return Reduction.BAD
    if kronecker(curve.dK, p) == 1:
        return Reduction.ORDINARY
    return Reduction.SUPERSINGULAR


def classify_from_trace(a_p: int, p: int) -> Reduction:
    return Reduction.SUPERSINGULAR if a_p % p == 0 else Reduction.ORDINARY


def classify_from_log(b_p: QuadRat, p: int) -> Reduction:
    """p divides b(p) exactly for supersingular reduction."""
    if coordinate_valuation(b_p, p) >= 1:
        return Reduction.SUPERSINGULAR
    return Reduction.ORDINARY


def _residue_field(
    curve: CurveModel, p: int, place: int
) -> Tuple[List[ModularQuad], Callable[[QuadRat], ModularQuad]]:
    """Elements of the residue field at ``place`` above p, and the reduction
    map from integral coefficients."""
    ctx = PlaceContext.create(curve.field, p, 1, place=place)
    if ctx.frobenius_nontrivial:
        field = curve.field
        elements = [ModularQuad(field, p, 1, a, b) for a in range(p) for b in range(p)]
        return elements, lambda x: residue(x, ctx, 1)
    prime_field = QuadFieldDesc(0, 0)
    elements = [ModularQuad(prime_field, p, 1, a) for a in range(p)]
    return elements, lambda x: ModularQuad(prime_field, p, 1, residue(x, ctx, 1).value)


def count_points_ap(curve: CurveModel, p: int, place: int = 0) -> int:
    """Trace of Frobenius of the reduction at ``place`` above p.

    The reduced curve is y^2 = 4x^3 - g2*x - g3 over the residue field F_q
    (q = p or p^2); the returned value is q + 1 - #E(F_q). When the residue
    field is F_{p^2} this is the trace of the square of Frobenius, which is
    still divisible by p exactly in the supersingular case.
    """
    if is_bad_prime(curve, p):
        raise PreconditionViolation(f"{curve} has bad reduction at {p}")
    elements, reduce = _residue_field(curve, p, place)
    q = len(elements)
    g2, g3 = reduce(curve.g2), reduce(curve.g3)
    four = reduce(curve.field.element(4))
    squares = Counter(y * y for y in elements)
    affine = sum(squares[four * x * x * x - g2 * x - g3] for x in elements)
    a_q = q + 1 - (affine + 1)
    if a_q * a_q > 4 * q:
        raise InternalInconsistency(
            f"trace {a_q} at {p} violates the Hasse bound for q = {q}"
        )
    logger.debug("a_%d = %d at place %d of %s", q, a_q, place, curve)
    return a_q


def check_classification(
    curve: CurveModel,
    p: int,
    b_p: Optional[QuadRat] = None,
    count_points: bool = True,
) -> Reduction:
    """Classify ``p`` and cross-check against the available witnesses.

    Any disagreement is a bug somewhere in this package, and raises
    :class:`InternalInconsistency`.
    """
    expected = classify_prime(curve, p)
    if expected is Reduction.BAD:
        return expected
    witnesses = {}
    if count_points:
        witnesses["point count"] = classify_from_trace(count_points_ap(curve, p), p)
    if b_p is not None:
        witnesses["b(p)"] = classify_from_log(b_p, p)
    for name, found in witnesses.items():
        if found is not expected:
            raise InternalInconsistency(
                f"{curve} at {p}: CM field says {expected}, {name} says {found}"
            )
    return expected
