# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""The two coefficient domains series are computed over.

``exact`` keeps every coefficient in Q(w). ``fast`` works in the completion at
one place above p, on truncated :class:`PadicScaled` values; it is advisory,
and is cross-checked against ``exact`` when both are requested.
"""

from typing import Any, Dict, Type

import attr

from swh.eisenstein.exactnum.padic import PadicScaled, PlaceContext, to_padic
from swh.eisenstein.exactnum.quadratic import QuadFieldDesc, QuadRat


@attr.s(frozen=True, slots=True)
class ExactDomain:
    field = attr.ib(type=QuadFieldDesc)
    name = "exact"

    def zero(self) -> QuadRat:
        return self.field.zero

    def one(self) -> QuadRat:
        return self.field.one

    def coerce(self, value: Any) -> QuadRat:
        return self.field.coerce(value)

    def is_zero(self, x: QuadRat) -> bool:
        return not x

    def format(self, x: QuadRat) -> str:
        return str(x)


@attr.s(frozen=True, slots=True)
class PadicDomain:
    """Truncated values at the place of ``ctx``, with ``precision`` digits of
    relative precision for coerced values."""

    ctx = attr.ib(type=PlaceContext)
    precision = attr.ib(type=int)
    name = "fast"

    @property
    def field(self) -> QuadFieldDesc:
        return self.ctx.field

    def zero(self) -> PadicScaled:
        return PadicScaled.zero(self.ctx.residue_ring())

    def one(self) -> PadicScaled:
        return self.coerce(1)

    def coerce(self, value: Any) -> PadicScaled:
        if isinstance(value, PadicScaled):
            return value
        return to_padic(self.ctx.field.coerce(value), self.ctx, self.precision)

    def is_zero(self, x: PadicScaled) -> bool:
        return x.is_exact_zero

    def format(self, x: PadicScaled) -> str:
        return str(x)


DOMAIN_TYPES: Dict[str, Type] = {
    "exact": ExactDomain,
    "fast": PadicDomain,
}
