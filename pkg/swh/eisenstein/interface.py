# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

from typing import Any

from typing_extensions import Protocol, runtime_checkable


@runtime_checkable
class CoefficientDomain(Protocol):
    """
    Coefficient ring of a truncated series.

    Elements of a domain support ``+``, ``-``, unary ``-``, ``*`` and an
    ``inverse()`` method; the domain itself builds and inspects them.
    """

    name: str

    def zero(self) -> Any:
        """The additive identity"""
        ...

    def one(self) -> Any:
        """The multiplicative identity"""
        ...

    def coerce(self, value: Any) -> Any:
        """Map an int, a rational or a coefficient-field element into the
        domain"""
        ...

    def is_zero(self, x: Any) -> bool:
        """True only for an exact zero; a value merely indistinguishable from
        zero at the working precision is not zero"""
        ...

    def format(self, x: Any) -> str:
        """Render an element for textual series dumps"""
        ...
