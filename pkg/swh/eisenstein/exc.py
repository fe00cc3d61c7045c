# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information


class EisensteinError(Exception):
    pass


class ConfigurationError(EisensteinError, ValueError):
    """Raised when a job configuration is missing or malformed."""

    pass


class RamifiedPrimeError(EisensteinError, ValueError):
    """Raised when a prime ramifies in the coefficient field."""

    pass


class NotInvertibleError(EisensteinError, ZeroDivisionError):
    """Raised when inverting a non-unit residue or a series with a non-unit
    leading coefficient."""

    pass


class PrecisionExhausted(EisensteinError, ArithmeticError):
    """Raised when a truncated p-adic value no longer carries enough digits
    to answer the question asked of it."""

    pass


class PreconditionViolation(EisensteinError, ValueError):
    pass


class InconsistentCongruences(EisensteinError):
    """Raised when the congruences pinning lambda or mu disagree with each
    other."""

    pass


class InternalInconsistency(EisensteinError):
    """Raised when two independent computations of the same quantity
    disagree."""

    pass


class DegenerateCurve(EisensteinError, ValueError):
    pass
