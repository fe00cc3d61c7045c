# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Complex-analytic value of A(Lambda) at each real embedding of the
coefficient field.

For the lattice Lambda = Z*omega1 + Z*omega2 of y^2 = 4x^3 - g2*x - g3, with
tau = omega2/omega1 in the upper half plane,

    A(Lambda) = pi^2 / (3*omega1^2) * E2*(tau),
    E2*(tau) = P(tau) - 3/(pi*Im(tau)),  P = 1 - 24*sum(sigma_1(n) q^n).

The periods come from the arithmetic-geometric mean of the root differences
of the cubic; the resulting basis is checked by recomputing g2 and g3 from
the E4 and E6 q-series.
"""

from fractions import Fraction
import itertools
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import attr
import mpmath

from swh.eisenstein.exactnum import QuadFieldDesc, QuadRat
from swh.eisenstein.exc import DegenerateCurve, PreconditionViolation
from swh.eisenstein.weierstrass import CurveModel

logger = logging.getLogger(__name__)

# working precision of period and q-series evaluations, in decimal digits
WORKING_DPS = 30
LATTICE_TOLERANCE = 1e-6
RECOGNITION_TOLERANCE = 1e-8


def embedding_roots(field: QuadFieldDesc) -> List[mpmath.mpf]:
    """The real roots of x^2 - s*x - t, smallest first; ``[0]`` in rational
    mode."""
    if field.is_rational:
        return [mpmath.mpf(0)]
    root = mpmath.sqrt(field.disc)
    return [(field.s - root) / 2, (field.s + root) / 2]


def _to_mpf(q) -> mpmath.mpf:
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def embed(x: QuadRat, w_real) -> mpmath.mpf:
    return _to_mpf(x.a) + _to_mpf(x.b) * w_real


def _q_terms(q, tolerance: float = 1e-16) -> int:
    """Number of q-series terms making |q|^n negligible."""
    size = abs(q)
    if size >= 1:
        raise PreconditionViolation(f"|q| = {size} is not < 1")
    if size == 0:
        return 1
    return int(mpmath.ceil(mpmath.log(tolerance) / mpmath.log(size))) + 1


def _lambert(q, power: int, terms: int):
    """sum(n^power q^n/(1 - q^n)) = sum(sigma_power(n) q^n)."""
    total = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(1, terms + 1):
        qn *= q
        total += mpmath.mpf(n) ** power * qn / (1 - qn)
    return total


def _nome(tau):
    if mpmath.im(tau) <= 0:
        raise PreconditionViolation(f"tau = {tau} is not in the upper half plane")
    return mpmath.exp(2j * mpmath.pi * tau)


def ramanujan_p(tau, terms: Optional[int] = None):
    """P(tau) = 1 - 24*sum(sigma_1(n) q^n), the holomorphic weight-2 series."""
    q = _nome(tau)
    return 1 - 24 * _lambert(q, 1, terms or _q_terms(q))


def e2star(tau, terms: Optional[int] = None):
    """The almost-holomorphic weight-2 Eisenstein series P(tau) - 3/(pi Im tau).

    >>> abs(e2star(1j)) < 1e-12
    True
    """
    return ramanujan_p(tau, terms) - 3 / (mpmath.pi * mpmath.im(tau))


def eisenstein_e4(tau, terms: Optional[int] = None):
    q = _nome(tau)
    return 1 + 240 * _lambert(q, 3, terms or _q_terms(q))


def eisenstein_e6(tau, terms: Optional[int] = None):
    q = _nome(tau)
    return 1 - 504 * _lambert(q, 5, terms or _q_terms(q))


def j_invariant(tau, terms: Optional[int] = None):
    e4 = eisenstein_e4(tau, terms)
    e6 = eisenstein_e6(tau, terms)
    return 1728 * e4**3 / (e4**3 - e6**2)


def lattice_invariants(omega1, omega2) -> Tuple[Any, Any]:
    """(g2, g3) of Z*omega1 + Z*omega2, from the E4 and E6 q-series."""
    tau = omega2 / omega1
    g2 = 4 * mpmath.pi**4 / 3 * eisenstein_e4(tau) / omega1**4
    g3 = 8 * mpmath.pi**6 / 27 * eisenstein_e6(tau) / omega1**6
    return g2, g3


def reduce_basis(omega1, omega2) -> Tuple[Any, Any]:
    """Change the basis so that tau = omega2/omega1 lies in the standard
    fundamental domain, Im(tau) > 0 included."""
    if mpmath.im(omega2 / omega1) < 0:
        omega2 = -omega2
    for _ in range(1000):
        tau = omega2 / omega1
        shift = mpmath.nint(mpmath.re(tau))
        omega2 -= shift * omega1
        if abs(omega2 / omega1) < 1 - 1e-12:
            omega1, omega2 = omega2, -omega1
        else:
            return omega1, omega2
    raise DegenerateCurve("period basis reduction does not terminate")


def _relative_error(value, expected) -> float:
    return float(abs(value - expected) / max(1, abs(expected)))


def _lattice_matches(omega1, omega2, g2, g3) -> bool:
    found2, found3 = lattice_invariants(omega1, omega2)
    return (
        _relative_error(found2, g2) < LATTICE_TOLERANCE
        and _relative_error(found3, g3) < LATTICE_TOLERANCE
    )


def _candidate_periods(roots: Sequence) -> List:
    """pi/M(sqrt(e_i - e_j), sqrt(e_i - e_k)) for each root e_i."""
    found = []
    for i in range(3):
        j, k = [index for index in range(3) if index != i]
        a = mpmath.sqrt(roots[i] - roots[j])
        b = mpmath.sqrt(roots[i] - roots[k])
        found.append(mpmath.pi / mpmath.agm(a, b))
    return found


def _period_basis(g2, g3) -> Tuple[Any, Any]:
    roots = mpmath.polyroots([4, 0, -g2, -g3], maxsteps=200, extraprec=60)
    candidates = _candidate_periods(roots)
    for u, v in itertools.combinations(candidates, 2):
        if abs(mpmath.im(v / u)) < 1e-8:
            continue
        # the two periods may span a sublattice of index 2
        for pair in ((u, v), (u / 2, v), (u, v / 2), (u, (u + v) / 2)):
            omega1, omega2 = reduce_basis(*pair)
            if _lattice_matches(omega1, omega2, g2, g3):
                return omega1, omega2
    raise DegenerateCurve(f"no period lattice found for g2 = {g2}, g3 = {g3}")


@attr.s(frozen=True, slots=True)
class EmbeddingContext:
    """One real embedding of the coefficient field, with the reduced period
    basis of the embedded curve."""

    index = attr.ib(type=int)
    w_real = attr.ib()
    g2_c = attr.ib()
    g3_c = attr.ib()
    omega1 = attr.ib()
    omega2 = attr.ib()

    @property
    def tau(self):
        return self.omega2 / self.omega1


def embedding_context(curve: CurveModel, embedding: int = 0) -> EmbeddingContext:
    if embedding not in range(len(embedding_roots(curve.field))):
        raise PreconditionViolation(f"no embedding of index {embedding} of {curve}")
    with mpmath.workdps(WORKING_DPS):
        w_real = embedding_roots(curve.field)[embedding]
        g2 = embed(curve.g2, w_real)
        g3 = embed(curve.g3, w_real)
        if abs(g2**3 - 27 * g3**2) < mpmath.mpf(10) ** (-WORKING_DPS // 2):
            raise DegenerateCurve(f"{curve} is singular at embedding {embedding}")
        omega1, omega2 = _period_basis(g2, g3)
    logger.debug("Embedding %d of %s: tau = %s", embedding, curve, omega2 / omega1)
    return EmbeddingContext(embedding, w_real, g2, g3, omega1, omega2)


def periods(curve: CurveModel, embedding: int = 0) -> Tuple[Any, Any]:
    """A basis (omega1, omega2) of the period lattice at ``embedding``, with
    tau = omega2/omega1 reduced into the standard fundamental domain."""
    context = embedding_context(curve, embedding)
    return context.omega1, context.omega2


def analytic_A(curve: CurveModel, embedding: int = 0, context=None) -> mpmath.mpf:
    """pi^2/(3*omega1^2) * E2*(tau) at the given real embedding."""
    if context is None:
        context = embedding_context(curve, embedding)
    with mpmath.workdps(WORKING_DPS):
        value = mpmath.pi**2 / (3 * context.omega1**2) * e2star(context.tau)
    if abs(mpmath.im(value)) > RECOGNITION_TOLERANCE * max(1, abs(value)):
        logger.warning("A(Lambda) = %s at embedding %d is not real", value, embedding)
    return mpmath.re(value)


def _best_rational(value, bound: int) -> Optional[Fraction]:
    """Continued-fraction approximation with denominator <= bound."""
    candidate = Fraction(float(value)).limit_denominator(bound)
    if abs(candidate.numerator) > bound:
        return None
    return candidate


def recognize_quad(
    values: Sequence, field: QuadFieldDesc, bound: int = 1000
) -> Optional[QuadRat]:
    """The element a + b*w of height <= ``bound`` whose real embeddings are
    ``values``, or None.

    >>> field = QuadFieldDesc(1, 1)
    >>> str(recognize_quad([1.0, 1.0], field))
    '1'
    """
    roots = embedding_roots(field)
    if len(values) != len(roots):
        raise PreconditionViolation(
            f"expected {len(roots)} embedded values, got {len(values)}"
        )
    if field.is_rational:
        a, b = mpmath.mpf(values[0]), mpmath.mpf(0)
    else:
        (v0, v1), (w0, w1) = values, roots
        b = (mpmath.mpf(v0) - v1) / (w0 - w1)
        a = v0 - b * w0
    a_q = _best_rational(a, bound)
    b_q = _best_rational(b, bound)
    if a_q is None or b_q is None:
        return None
    found = field.element(a_q, b_q)
    for value, w_real in zip(values, roots):
        if abs(embed(found, w_real) - value) > RECOGNITION_TOLERANCE:
            return None
    return found


def analytic_report(curve: CurveModel, bound: int = 1000) -> Dict[str, Any]:
    """Periods, tau, E2*, A and the j-invariant check at every embedding, and
    the recognized value of A."""
    embeddings = []
    values = []
    for index in range(len(embedding_roots(curve.field))):
        context = embedding_context(curve, index)
        value = analytic_A(curve, index, context)
        with mpmath.workdps(WORKING_DPS):
            j_embedded = embed(curve.j, context.w_real)
            j_error = _relative_error(j_invariant(context.tau), j_embedded)
        if j_error > LATTICE_TOLERANCE:
            raise DegenerateCurve(
                f"j(tau) does not match j = {curve.j} at embedding {index}"
            )
        values.append(value)
        embeddings.append(
            {
                "embedding": index,
                "w": mpmath.nstr(context.w_real, 17),
                "omega1": mpmath.nstr(context.omega1, 17),
                "omega2": mpmath.nstr(context.omega2, 17),
                "tau": mpmath.nstr(context.tau, 17),
                "e2star": mpmath.nstr(e2star(context.tau), 17),
                "A": mpmath.nstr(value, 17),
                "j_relative_error": j_error,
            }
        )
    recognized = recognize_quad(values, curve.field, bound)
    return {
        "curve": curve.to_dict(),
        "embeddings": embeddings,
        "recognized": None if recognized is None else str(recognized),
    }
