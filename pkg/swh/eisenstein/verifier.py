# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Verification of the p-adic value of the weight-2 Eisenstein series.

For a prime p of good reduction, write R(u) = zeta(l(u)) - 1/u - d0 - A*l(u)
where l is the formal logarithm of the curve. Then:

- at an ordinary prime, R(u) is p-integral, and A mod p^k can be read off the
  coefficients at u^(p^j) (the "lambda" of the decomposition);
- at a supersingular prime, there is a mu with R(u) - mu*T(u) p-integral,
  where T(u) = (1/p) l^phi(u^p) and phi is the Frobenius acting on the
  coefficients.

Each check is done at one place above p. The functions here are pure;
:class:`TheoremVerifier` runs them per (prime, place) on a thread pool.
"""

import concurrent.futures
import logging
import traceback
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import attr
from gmpy2 import mpq
import sentry_sdk

from swh.eisenstein import get_domain
from swh.eisenstein.cache import ExpansionCache
from swh.eisenstein.exactnum import (
    ModularQuad,
    PlaceContext,
    PlaceResidue,
    QuadFieldDesc,
    QuadRat,
    combine_places,
    crt_combine,
    rational_reconstruction,
    residue,
    valuation,
)
from swh.eisenstein.exc import (
    InconsistentCongruences,
    InternalInconsistency,
    NotInvertibleError,
    PrecisionExhausted,
    PreconditionViolation,
)
from swh.eisenstein.interface import CoefficientDomain
from swh.eisenstein.reduction import Reduction, check_classification, classify_prime
from swh.eisenstein.series import TruncatedSeries
from swh.eisenstein.weierstrass import (
    CurveModel,
    WeierstrassExpansion,
    expand,
    formal_log,
    zeta_of_log,
)

logger = logging.getLogger(__name__)

Violation = Tuple[int, int]
Residue = Union[ModularQuad, PlaceResidue]

DOMAIN_NAMES = ("exact", "fast", "both")


def _format_residue(value: Optional[Residue]) -> Optional[str]:
    return None if value is None else str(value)


def _format_violation(value: Optional[Violation]) -> Optional[List[int]]:
    return None if value is None else list(value)


@attr.s(frozen=True, slots=True)
class VerificationReport:
    """Outcome of one verification at one place above ``p``.

    ``first_violation`` and ``worst_violation`` are ``(index, valuation)``
    pairs for the checked series: R(u) at ordinary primes, the corrected
    series at supersingular ones. ``uncorrected_violation`` is the worst
    violation of R(u) itself, before mu is subtracted.
    """

    p = attr.ib(type=int)
    classification = attr.ib(type=Optional[Reduction])
    place = attr.ib(type=Optional[int], default=None)
    N = attr.ib(type=int, default=0)
    k = attr.ib(type=int, default=0)
    domain = attr.ib(type=str, default="exact")
    lambda_input = attr.ib(type=Optional[QuadRat], default=None)
    lambda_recovered = attr.ib(type=Optional[ModularQuad], default=None)
    mu = attr.ib(default=None)
    ok = attr.ib(type=bool, default=True)
    first_violation = attr.ib(type=Optional[Violation], default=None)
    worst_violation = attr.ib(type=Optional[Violation], default=None)
    uncorrected_violation = attr.ib(type=Optional[Violation], default=None)
    error = attr.ib(type=Optional[str], default=None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "class": None if self.classification is None else str(self.classification),
            "place": self.place,
            "N": self.N,
            "k": self.k,
            "domain": self.domain,
            "lambda": None if self.lambda_input is None else str(self.lambda_input),
            "lambda_recovered": _format_residue(self.lambda_recovered),
            "mu": _format_residue(self.mu),
            "ok": self.ok,
            "first_violation": _format_violation(self.first_violation),
            "worst_violation": _format_violation(self.worst_violation),
            "uncorrected_violation": _format_violation(self.uncorrected_violation),
            "error": self.error,
        }


def place_context(curve: CurveModel, p: int, k: int, place: int = 0) -> PlaceContext:
    return PlaceContext.create(
        curve.field, p, k, cm_discriminant=curve.cm_discriminant, place=place
    )


def _digits(p: int, N: int) -> int:
    """floor(log_p N)"""
    e = 0
    while p ** (e + 1) <= N:
        e += 1
    return e


def fast_precision(p: int, N: int, k: int) -> int:
    """Working precision of the fast path: the divisions by n <= N lose at
    most log_p(N) digits."""
    return k + _digits(p, N) + 2


def effective_k(p: int, N: int, k: int, classification: Reduction) -> int:
    """Largest j <= k such that every constraint needed mod p^j lies within
    the first N coefficients.

    >>> effective_k(7, 500, 2, Reduction.SUPERSINGULAR)
    2
    >>> effective_k(7, 300, 2, Reduction.SUPERSINGULAR)
    1
    >>> effective_k(17, 300, 2, Reduction.ORDINARY)
    2
    """
    j = k
    while j > 0:
        exponent = 2 * j - 1 if classification is Reduction.SUPERSINGULAR else j
        if p**exponent <= N:
            break
        j -= 1
    return j


def _coefficient_domain(
    curve: CurveModel, ctx: PlaceContext, N: int, name: str
) -> CoefficientDomain:
    if name == "exact":
        return get_domain("exact", field=curve.field)
    if name == "fast":
        return get_domain("fast", ctx=ctx, precision=fast_precision(ctx.p, N, ctx.k))
    raise PreconditionViolation(f"unknown coefficient domain {name!r}")


def _formal(
    curve: CurveModel,
    N: int,
    domain: CoefficientDomain,
    expansion: Optional[WeierstrassExpansion] = None,
) -> Tuple[TruncatedSeries, TruncatedSeries, Any]:
    """l(u), zeta(l(u)) and d0, known through u^N."""
    prec = N + 1
    if expansion is not None and expansion.domain == domain and expansion.prec >= prec:
        expansion = expansion.truncate(prec)
        return expansion.log, expansion.zeta_of_log, expansion.d0
    log = formal_log(curve, max(prec, 3), domain)
    zeta_log, d0 = zeta_of_log(curve, prec, domain, log=log)
    return log.truncate(prec), zeta_log, d0


def _residual(
    log: TruncatedSeries, zeta_log: TruncatedSeries, d0, A: QuadRat
) -> TruncatedSeries:
    domain = log.domain
    principal = TruncatedSeries.from_dict(domain, {-1: 1, 0: d0}, zeta_log.prec)
    return (zeta_log - principal - log.scale(domain.coerce(A))).truncate(log.prec)


def residual_series(
    curve: CurveModel,
    A: QuadRat,
    p: int,
    N: int,
    k: int = 2,
    place: int = 0,
    domain: str = "exact",
    expansion: Optional[WeierstrassExpansion] = None,
) -> TruncatedSeries:
    """R(u) = zeta(l(u)) - 1/u - d0 - A*l(u) through u^N.

    Over the exact domain the series does not depend on ``p``; over the fast
    one it is computed at the given place above ``p``.
    """
    if classify_prime(curve, p) is Reduction.BAD:
        raise PreconditionViolation(f"{curve} has bad reduction at {p}")
    ctx = place_context(curve, p, k, place)
    coefficients = _coefficient_domain(curve, ctx, N, domain)
    log, zeta_log, d0 = _formal(curve, N, coefficients, expansion)
    return _residual(log, zeta_log, d0, A)


def scan_violations(
    series: TruncatedSeries, ctx: PlaceContext, N: int
) -> Tuple[Optional[Violation], Optional[Violation]]:
    """The earliest and the worst coefficient of negative valuation through
    u^N, as (index, valuation) pairs; ties on the worst go to the earliest."""
    first: Optional[Violation] = None
    worst: Optional[Violation] = None
    for n, c in series.terms():
        if n > N:
            break
        v = valuation(c, ctx)
        if v >= 0:
            continue
        found = (n, int(v))
        if first is None:
            first = found
        if worst is None or found[1] < worst[1]:
            worst = found
    return first, worst


def _earliest(a: Optional[Violation], b: Optional[Violation]) -> Optional[Violation]:
    candidates = [v for v in (a, b) if v is not None]
    return min(candidates) if candidates else None


def _worst(a: Optional[Violation], b: Optional[Violation]) -> Optional[Violation]:
    candidates = [v for v in (a, b) if v is not None]
    return min(candidates, key=lambda v: (v[1], v[0])) if candidates else None


def _require(curve: CurveModel, p: int, expected: Reduction) -> Reduction:
    found = classify_prime(curve, p)
    if found is not expected:
        raise PreconditionViolation(f"{curve} is {found} at {p}, not {expected}")
    return found


def _places(curve: CurveModel, p: int, place: Optional[int]) -> Tuple[int, ...]:
    if place is not None:
        return (place,)
    return place_context(curve, p, 1).places


def verify_lambda_ordinary(
    curve: CurveModel,
    A: QuadRat,
    p: int,
    N: int,
    k: int = 2,
    place: Optional[int] = None,
    domain: str = "exact",
    expansion: Optional[WeierstrassExpansion] = None,
) -> VerificationReport:
    """Check that R(u) is p-integral through u^N at ``place``, or at every
    place above p when ``place`` is None."""
    classification = _require(curve, p, Reduction.ORDINARY)
    first: Optional[Violation] = None
    worst: Optional[Violation] = None
    exact_residual = None
    for index in _places(curve, p, place):
        ctx = place_context(curve, p, k, index)
        if domain == "exact":
            if exact_residual is None:
                exact_residual = residual_series(
                    curve, A, p, N, k, index, domain, expansion
                )
            R = exact_residual
        else:
            R = residual_series(curve, A, p, N, k, index, domain, expansion)
        found_first, found_worst = scan_violations(R, ctx, N)
        first = _earliest(first, found_first)
        worst = _worst(worst, found_worst)
    return VerificationReport(
        p=p,
        classification=classification,
        place=place,
        N=N,
        k=k,
        domain=domain,
        lambda_input=A,
        ok=first is None,
        first_violation=first,
        worst_violation=worst,
    )


def _recover_at_place(
    curve: CurveModel,
    p: int,
    N: int,
    k: int,
    place: int,
    domain: str,
    expansion: Optional[WeierstrassExpansion],
) -> Residue:
    ctx = place_context(curve, p, k, place)
    coefficients = _coefficient_domain(curve, ctx, N, domain)
    log, zeta_log, _ = _formal(curve, N, coefficients, expansion)
    lam: Optional[Residue] = None
    for j in range(1, k + 1):
        n = p**j
        l_n = log.coefficient(n)
        if valuation(l_n * coefficients.coerce(n), ctx) != 0:
            raise InternalInconsistency(
                f"b({n}) is not a {p}-adic unit although {p} is ordinary"
            )
        ratio = zeta_log.coefficient(n) / l_n
        if valuation(ratio, ctx) < 0:
            raise InconsistentCongruences(
                f"no {p}-integral lambda makes the coefficient of u^{n} integral"
            )
        current = residue(ratio, ctx, j)
        if lam is not None and current.reduce(j - 1) != lam:
            raise InconsistentCongruences(
                f"lambda = {current} from u^{n} does not lift {lam}"
            )
        lam = current
    assert lam is not None
    logger.debug("lambda at place %d above %d: %s", place, p, lam)
    return lam


def recover_lambda(
    curve: CurveModel,
    p: int,
    N: int,
    k: int,
    domain: str = "exact",
    expansion: Optional[WeierstrassExpansion] = None,
) -> ModularQuad:
    """A mod p^k, read off the coefficients of zeta(l(u)) at u^(p^j).

    At an ordinary prime b(p^j) is a unit, so the constraint at u^(p^j) fixes
    lambda mod p^j; the residues for j = 1..k must lift each other. When p
    splits in the coefficient field both places are solved and combined.
    """
    _require(curve, p, Reduction.ORDINARY)
    if k < 1 or p**k > N:
        raise PreconditionViolation(
            f"recovering lambda mod {p}^{k} needs N >= {p ** max(k, 1)}, got {N}"
        )
    ctx = place_context(curve, p, k)
    residues = [
        _recover_at_place(curve, p, N, k, place, domain, expansion)
        for place in ctx.places
    ]
    if ctx.is_split:
        assert ctx.roots is not None
        return combine_places(residues, ctx.roots, curve.field)  # type: ignore
    lam = residues[0]
    if isinstance(lam, PlaceResidue):
        return ModularQuad(curve.field, p, k, lam.value)
    return lam


def frobenius_twist(log: TruncatedSeries, ctx: PlaceContext, N: int) -> TruncatedSeries:
    """T(u) = (1/p) l^phi(u^p) through u^N; its coefficient at u^(p*m) is
    b(m)^phi/(p*m)."""
    twisted = log.frobenius_series(ctx).substitute_power(ctx.p)
    return twisted.scale(mpq(1, ctx.p)).truncate(N + 1)


def _congruence(r, t, ctx: PlaceContext, e: int, n: int) -> Residue:
    """mu mod p^e from the constraint at u^n: R_n - mu*T_n integral."""
    ratio = r / t
    if valuation(ratio, ctx) < 0:
        raise InconsistentCongruences(
            f"no {ctx.p}-integral mu makes the coefficient of u^{n} integral"
        )
    return residue(ratio, ctx, e)


def mu_from_sparse_indices(
    R: TruncatedSeries,
    T: TruncatedSeries,
    log: TruncatedSeries,
    ctx: PlaceContext,
    k: int,
) -> Optional[Residue]:
    """Solve mu mod p^j from u^(p^(2j-1)), j = 1..k.

    Returns None when b(p^(2j-2)) does not have valuation j - 1, in which case
    these indices do not pin mu.
    """
    p = ctx.p
    mu: Optional[Residue] = None
    for j in range(1, k + 1):
        m = p ** (2 * j - 2)
        n = p * m
        b_m = log.coefficient(m) * log.domain.coerce(m)
        if valuation(b_m, ctx) != j - 1:
            logger.warning(
                "v_%d(b(%d)) is not %d, scanning every index for mu", p, m, j - 1
            )
            return None
        current = _congruence(R.coefficient(n), T.coefficient(n), ctx, j, n)
        if mu is not None and current.reduce(j - 1) != mu:
            raise InconsistentCongruences(
                f"mu = {current} from u^{n} does not lift {mu}"
            )
        mu = current
    return mu


def mu_from_all_indices(
    R: TruncatedSeries, T: TruncatedSeries, ctx: PlaceContext, N: int, k: int
) -> Residue:
    """Solve mu from the most constraining index p*m <= N, then check it
    against every other constraint."""
    constraints = []
    for n, t in T.terms():
        if n > N:
            break
        e = min(-int(valuation(t, ctx)), k)
        if e > 0:
            constraints.append((e, n))
    if not constraints:
        raise InconsistentCongruences(f"no coefficient through u^{N} constrains mu")
    e, n = max(constraints, key=lambda c: (c[0], -c[1]))
    mu = _congruence(R.coefficient(n), T.coefficient(n), ctx, e, n)
    for e_other, m in constraints:
        found = _congruence(R.coefficient(m), T.coefficient(m), ctx, e_other, m)
        if found != mu.reduce(e_other):
            raise InconsistentCongruences(
                f"mu = {found} from u^{m} contradicts {mu} from u^{n}"
            )
    return mu


def lift_residue(value: Residue, field: QuadFieldDesc) -> QuadRat:
    if isinstance(value, PlaceResidue):
        return value.lift(field)
    return value.lift()


def solve_mu_supersingular(
    curve: CurveModel,
    A: QuadRat,
    p: int,
    N: int,
    k: int = 2,
    place: int = 0,
    domain: str = "exact",
    expansion: Optional[WeierstrassExpansion] = None,
) -> VerificationReport:
    """Find mu mod p^k with R(u) - mu*T(u) p-integral through u^N, and check
    every coefficient of the corrected series."""
    classification = _require(curve, p, Reduction.SUPERSINGULAR)
    if k < 1 or p ** (2 * k - 1) > N:
        raise PreconditionViolation(
            f"solving mu mod {p}^{k} needs N >= {p ** (2 * max(k, 1) - 1)}, got {N}"
        )
    ctx = place_context(curve, p, k, place)
    coefficients = _coefficient_domain(curve, ctx, N, domain)
    log, zeta_log, d0 = _formal(curve, N, coefficients, expansion)
    R = _residual(log, zeta_log, d0, A)
    _, uncorrected = scan_violations(R, ctx, N)
    T = frobenius_twist(log, ctx, N)
    mu = mu_from_sparse_indices(R, T, log, ctx, k)
    if mu is None:
        mu = mu_from_all_indices(R, T, ctx, N, k)
    corrected = R - T.scale(lift_residue(mu, curve.field))
    first, worst = scan_violations(corrected, ctx, N)
    return VerificationReport(
        p=p,
        classification=classification,
        place=place,
        N=N,
        k=k,
        domain=domain,
        lambda_input=A,
        mu=mu,
        ok=first is None,
        first_violation=first,
        worst_violation=worst,
        uncorrected_violation=uncorrected,
    )


def _reduce_input(A: QuadRat, p: int, k: int) -> Optional[ModularQuad]:
    try:
        return ModularQuad.from_quadrat(A, p, k)
    except NotInvertibleError:
        return None


def compare_reports(exact: VerificationReport, fast: VerificationReport) -> None:
    """Raise :class:`InternalInconsistency` unless both computations reached
    the same conclusion."""
    for field in ("ok", "first_violation", "mu", "lambda_recovered"):
        if getattr(exact, field) != getattr(fast, field):
            raise InternalInconsistency(
                f"exact and fast verification at {exact.p} disagree on {field}: "
                f"{getattr(exact, field)} != {getattr(fast, field)}"
            )


def fast_path_agrees(
    curve: CurveModel,
    p: int,
    N: int,
    k: int = 3,
    place: int = 0,
    expansion: Optional[WeierstrassExpansion] = None,
) -> bool:
    """Whether zeta(l(u)) over the fast domain agrees with the exact one
    modulo p^k on every coefficient through u^N, or modulo the precision the
    fast value actually carries when that is less."""
    ctx = place_context(curve, p, k, place)
    exact = _coefficient_domain(curve, ctx, N, "exact")
    fast = _coefficient_domain(curve, ctx, N, "fast")
    _, exact_zeta, _ = _formal(curve, N, exact, expansion)
    _, fast_zeta, _ = _formal(curve, N, fast)
    reduced = exact_zeta.map_coefficients(fast.coerce, fast)
    for n in range(-1, N + 1):
        value = fast_zeta.coefficient(n)
        expected = reduced.coefficient(n)
        if not expected.agrees_with(value, min(k, value.absolute_precision)):
            logger.error("Fast path disagrees at u^%d: %s != %s", n, value, expected)
            return False
    return True


def verify_theorem(
    curve: CurveModel,
    A: QuadRat,
    p: int,
    N: int,
    k: int = 2,
    place: int = 0,
    domain: str = "exact",
    expansion: Optional[WeierstrassExpansion] = None,
    count_points: bool = False,
) -> VerificationReport:
    """Classify ``p`` and run the matching verification.

    Bad primes give a successful report with nothing checked. ``k`` is
    lowered when N is too small to pin lambda or mu mod p^k. With ``domain``
    set to ``both``, the exact and fast computations must agree.
    """
    if domain not in DOMAIN_NAMES:
        raise PreconditionViolation(f"unknown coefficient domain {domain!r}")
    classification = classify_prime(curve, p)
    if classification is Reduction.BAD:
        logger.info("Skipping %d: bad reduction", p)
        return VerificationReport(
            p=p,
            classification=classification,
            N=N,
            k=k,
            domain=domain,
            lambda_input=A,
        )
    if domain == "both":
        exact = verify_theorem(
            curve, A, p, N, k, place, "exact", expansion, count_points
        )
        fast = verify_theorem(curve, A, p, N, k, place, "fast")
        compare_reports(exact, fast)
        return attr.evolve(exact, domain="both")

    k_eff = effective_k(p, N, k, classification)
    if k_eff == 0:
        raise PrecisionExhausted(
            f"N = {N} does not reach the first constraint at {p} ({classification})"
        )
    if k_eff < k:
        logger.warning("Lowering k from %d to %d at %d for N = %d", k, k_eff, p, N)
    if domain == "exact":
        if expansion is None or expansion.prec < N + 1:
            expansion = expand(curve, N + 1)
        check_classification(curve, p, expansion.b(p), count_points=count_points)
    elif count_points:
        check_classification(curve, p, count_points=True)

    if classification is Reduction.SUPERSINGULAR:
        report = solve_mu_supersingular(
            curve, A, p, N, k_eff, place, domain, expansion
        )
    else:
        report = verify_lambda_ordinary(
            curve, A, p, N, k_eff, place, domain, expansion
        )
        lam = recover_lambda(curve, p, N, k_eff, domain, expansion)
        expected = _reduce_input(A, p, k_eff)
        agrees = lam == expected
        report = attr.evolve(
            report,
            lambda_recovered=lam,
            ok=report.ok and agrees,
            error=None if agrees else f"recovered lambda {lam}, expected {expected}",
        )
    logger.info(
        "p = %d (%s) at place %d: %s",
        p,
        classification,
        place,
        "ok" if report.ok else "FAILED",
    )
    return report


def reconstruct_from_residues(
    residues: Sequence[ModularQuad], bound: int
) -> Optional[QuadRat]:
    """The element of height <= ``bound`` in each coordinate that reduces to
    every residue, or None.

    >>> from swh.eisenstein.exactnum import QuadFieldDesc
    >>> field = QuadFieldDesc(1, 1)
    >>> residues = [
    ...     ModularQuad.from_quadrat(field.parse("13/2 + 21/2*w"), 17, 2),
    ...     ModularQuad.from_quadrat(field.parse("13/2 + 21/2*w"), 19, 1),
    ... ]
    >>> str(reconstruct_from_residues(residues, 25))
    '13/2 + 21/2*w'
    """
    if not residues:
        raise PreconditionViolation("no residues to reconstruct from")
    field = residues[0].field
    a, modulus = crt_combine([(r.a, r.modulus) for r in residues])
    b, _ = crt_combine([(r.b, r.modulus) for r in residues])
    a_q = rational_reconstruction(a, modulus, bound)
    b_q = rational_reconstruction(b, modulus, bound)
    if a_q is None or b_q is None:
        return None
    return field.element(a_q, b_q)


class TheoremVerifier:
    """Runs verifications of one curve and one value of A over many primes.

    Jobs are (prime, place) pairs, run on a thread pool over a shared exact
    expansion; reports come back ordered by (prime, place).
    """

    def __init__(
        self,
        curve: CurveModel,
        A: QuadRat,
        N: int,
        k: int = 2,
        places: str = "both",
        domain: str = "exact",
        thread_pool_size: int = 10,
        cache: Optional[ExpansionCache] = None,
        count_points: bool = False,
    ):
        if domain not in DOMAIN_NAMES:
            raise PreconditionViolation(f"unknown coefficient domain {domain!r}")
        if places not in ("0", "1", "both"):
            raise PreconditionViolation(f"unknown place selection {places!r}")
        self.curve = curve
        self.A = A
        self.N = N
        self.k = k
        self.places = places
        self.domain = domain
        self.thread_pool_size = thread_pool_size
        self.cache = cache if cache is not None else ExpansionCache()
        self.count_points = count_points
        self.expansion: Optional[WeierstrassExpansion] = None

    def jobs(self, primes: Iterable[int]) -> List[Tuple[int, Optional[int]]]:
        jobs: List[Tuple[int, Optional[int]]] = []
        for p in sorted(set(primes)):
            if classify_prime(self.curve, p) is Reduction.BAD:
                jobs.append((p, None))
                continue
            available = place_context(self.curve, p, 1).places
            if self.places == "both":
                wanted = list(available)
            else:
                wanted = [i for i in available if i == int(self.places)] or [0]
            jobs.extend((p, place) for place in wanted)
        return jobs

    def _failed(self, p: int, place: Optional[int], error: str) -> VerificationReport:
        try:
            classification: Optional[Reduction] = classify_prime(self.curve, p)
        except Exception:
            classification = None
        return VerificationReport(
            p=p,
            classification=classification,
            place=place,
            N=self.N,
            k=self.k,
            domain=self.domain,
            lambda_input=self.A,
            ok=False,
            error=error,
        )

    def run_job(self, p: int, place: Optional[int]) -> VerificationReport:
        """Verify at one (prime, place); failures become failed reports,
        except internal inconsistencies which propagate."""
        try:
            report = verify_theorem(
                self.curve,
                self.A,
                p,
                self.N,
                self.k,
                place or 0,
                self.domain,
                self.expansion,
                self.count_points,
            )
        except InternalInconsistency:
            raise
        except (InconsistentCongruences, PrecisionExhausted) as e:
            logger.warning("Verification at %d failed: %s", p, e)
            return self._failed(p, place, str(e))
        except Exception:
            tb = traceback.format_exc()
            logger.exception("Verification at %d failed.", p)
            sentry_sdk.capture_exception()
            return self._failed(
                p,
                place,
                f"Internal error. This incident will be reported.\n"
                f"The full error was:\n\n{tb}",
            )
        if report.place is None and report.classification is not Reduction.BAD:
            report = attr.evolve(report, place=place)
        if not report.ok:
            logger.error(
                "Verification at %d failed: first violation %s",
                p,
                report.first_violation,
            )
        return report

    def verify_many(self, primes: Iterable[int]) -> List[VerificationReport]:
        jobs = self.jobs(primes)
        if self.domain != "fast" and any(place is not None for _, place in jobs):
            self.expansion = self.cache.get(self.curve, self.N + 1)
        with concurrent.futures.ThreadPoolExecutor(
            max_workers=self.thread_pool_size
        ) as executor:
            reports = list(executor.map(lambda job: self.run_job(*job), jobs))
        return sorted(reports, key=lambda r: (r.p, -1 if r.place is None else r.place))
