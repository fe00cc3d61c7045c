# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Job configuration and the operations behind each CLI subcommand.

A job file is YAML::

    curve: cm15            # bundled name, path to a YAML curve, or a mapping
    A: 13/2 + 21/2*w       # or "recover"; bundled curves default to their value
    primes: 5..50          # or a list
    filter: all-good       # all, all-good, ordinary or supersingular
    N: 500
    k: 2
    places: both           # 0, 1 or both
    domain: exact          # exact, fast or both
"""

import logging
import os
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import attr
import sympy
import yaml

from swh.core.config import read as read_config
from swh.eisenstein.cache import ExpansionCache
from swh.eisenstein.exactnum import ModularQuad, QuadRat
from swh.eisenstein.exc import ConfigurationError, EisensteinError
from swh.eisenstein.fixtures import CURVES, get_curve, known_value
from swh.eisenstein.reduction import (
    Reduction,
    check_classification,
    classify_prime,
    count_points_ap,
)
from swh.eisenstein.weierstrass import CurveModel

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Tuple[str, Any]] = {
    "filter": ("str", "all"),
    "N": ("int", 500),
    "k": ("int", 2),
    "domain": ("str", "exact"),
    "bound": ("int", 1000),
    "max_terms": ("int", 1000),
    "thread_pool_size": ("int", 10),
}

FILTERS = ("all", "all-good", "ordinary", "supersingular")
PLACES = ("0", "1", "both")
DOMAINS = ("exact", "fast", "both")
RECOVER = "recover"


@attr.s(frozen=True, slots=True)
class JobConfig:
    curve = attr.ib(type=CurveModel)
    A = attr.ib(type=Optional[QuadRat], default=None)
    recover = attr.ib(type=bool, default=False)
    primes = attr.ib(type=List[int], factory=list)
    N = attr.ib(type=int, default=500)
    k = attr.ib(type=int, default=2)
    places = attr.ib(type=str, default="both")
    domain = attr.ib(type=str, default="exact")
    bound = attr.ib(type=int, default=1000)
    max_terms = attr.ib(type=int, default=1000)
    thread_pool_size = attr.ib(type=int, default=10)
    out = attr.ib(type=Optional[str], default=None)


def _invalid(message: str) -> ConfigurationError:
    return ConfigurationError(f"invalid configuration: {message}")


def load_curve(value: Union[str, Mapping[str, Any]]) -> CurveModel:
    """A curve from a bundled name, a YAML file or a mapping."""
    try:
        if isinstance(value, Mapping):
            return CurveModel.from_config(value)
        if value in CURVES:
            return get_curve(value)
        if os.path.isfile(value):
            with open(value) as f:
                mapping = yaml.safe_load(f)
            if not isinstance(mapping, Mapping):
                raise _invalid(f"{value} does not describe a curve")
            name = os.path.splitext(os.path.basename(value))[0]
            return CurveModel.from_config(mapping, name=name)
    except ConfigurationError:
        raise
    except (EisensteinError, ValueError) as e:
        raise _invalid(f"curve: {e}") from e
    raise _invalid(f"curve {value!r} is neither a bundled curve nor a file")


def parse_primes(value: Any) -> List[int]:
    """Primes from ``7``, ``[7, 11]``, ``"7,11"`` or the range ``"5..50"``.

    >>> parse_primes("5..20")
    [5, 7, 11, 13, 17, 19]
    >>> parse_primes("17, 19")
    [17, 19]
    """
    if value is None:
        return []
    if isinstance(value, int):
        items: List[Any] = [value]
    elif isinstance(value, str) and ".." in value:
        low, _, high = value.partition("..")
        try:
            return list(sympy.primerange(int(low), int(high) + 1))
        except ValueError:
            raise _invalid(f"primes: cannot parse range {value!r}") from None
    elif isinstance(value, str):
        items = [item for item in value.replace(",", " ").split()]
    else:
        items = list(value)
    try:
        primes = sorted({int(item) for item in items})
    except (TypeError, ValueError):
        raise _invalid(f"primes: cannot parse {value!r}") from None
    not_prime = [p for p in primes if not sympy.isprime(p)]
    if not_prime:
        raise _invalid(f"primes: {', '.join(map(str, not_prime))} not prime")
    return primes


def filter_primes(curve: CurveModel, primes: List[int], name: str) -> List[int]:
    if name == "all":
        return primes
    wanted = {
        "all-good": (Reduction.ORDINARY, Reduction.SUPERSINGULAR),
        "ordinary": (Reduction.ORDINARY,),
        "supersingular": (Reduction.SUPERSINGULAR,),
    }[name]
    return [p for p in primes if classify_prime(curve, p) in wanted]


def check_config(cfg: Dict[str, Any]) -> JobConfig:
    """Validate a raw job configuration and resolve it.

    Raises:
        ConfigurationError (a ValueError) if the curve is missing, or any
          value is invalid.
    """
    cfg = cfg.copy()
    for key, (_, default) in DEFAULT_CONFIG.items():
        if cfg.get(key) is None:
            cfg[key] = default
    if cfg.get("curve") is None:
        raise ConfigurationError("missing 'curve' configuration")
    curve = load_curve(cfg["curve"])

    A: Optional[QuadRat] = None
    raw_A = cfg.get("A")
    if raw_A is None and isinstance(cfg["curve"], str):
        raw_A = known_value(cfg["curve"])
    recover = raw_A is not None and str(raw_A).strip() == RECOVER
    if raw_A is not None and not recover:
        try:
            A = curve.field.parse(str(raw_A))
        except EisensteinError as e:
            raise _invalid(f"A: {e}") from e

    for key in ("N", "k", "bound", "max_terms", "thread_pool_size"):
        if int(cfg[key]) < 1:
            raise _invalid(f"{key} must be positive, got {cfg[key]}")
    places = "both" if cfg.get("places") is None else str(cfg["places"])
    if places not in PLACES:
        raise _invalid(f"places must be one of {', '.join(PLACES)}, got {places}")
    if cfg["domain"] not in DOMAINS:
        raise _invalid(f"domain must be one of {', '.join(DOMAINS)}")
    if cfg["filter"] not in FILTERS:
        raise _invalid(f"filter must be one of {', '.join(FILTERS)}")

    primes = filter_primes(curve, parse_primes(cfg.get("primes")), cfg["filter"])
    if recover and not any(
        classify_prime(curve, p) is Reduction.ORDINARY for p in primes
    ):
        raise _invalid("recovering A needs at least one ordinary prime")

    return JobConfig(
        curve=curve,
        A=A,
        recover=recover,
        primes=primes,
        N=int(cfg["N"]),
        k=int(cfg["k"]),
        places=places,
        domain=cfg["domain"],
        bound=int(cfg["bound"]),
        max_terms=int(cfg["max_terms"]),
        thread_pool_size=int(cfg["thread_pool_size"]),
        out=cfg.get("out"),
    )


def load_job(
    config_file: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None
) -> JobConfig:
    """Read the job file (``SWH_CONFIG_FILENAME`` when none is given), apply
    the non-None ``overrides`` and check the result."""
    if config_file is None and "SWH_CONFIG_FILENAME" in os.environ:
        config_file = os.environ["SWH_CONFIG_FILENAME"]
    cfg = read_config(config_file, DEFAULT_CONFIG)
    for key, value in (overrides or {}).items():
        if value is not None:
            cfg[key] = value
    return check_config(cfg)


def required_terms(job: JobConfig, primes: List[int]) -> int:
    """N, raised (up to ``max_terms``) so that every prime can be checked
    modulo p^k; k is lowered per prime later on if the cap bites."""
    needed = job.N
    for p in primes:
        classification = classify_prime(job.curve, p)
        if classification is Reduction.SUPERSINGULAR:
            needed = max(needed, p ** (2 * job.k - 1))
        elif classification is Reduction.ORDINARY:
            needed = max(needed, p**job.k)
    if needed > job.N:
        N = min(needed, job.max_terms)
        logger.warning(
            "Raising N from %d to %d (max_terms %d)", job.N, N, job.max_terms
        )
        return N
    return job.N


def _primes_required(job: JobConfig) -> List[int]:
    if not job.primes:
        raise ConfigurationError("missing 'primes' configuration")
    return job.primes


def cmd_expand(job: JobConfig) -> Dict[str, Any]:
    """Every expansion of the curve, known mod z^N or u^N."""
    from swh.eisenstein.weierstrass import expand

    if job.N < 2:
        raise _invalid(f"expansions need N >= 2, got {job.N}")
    expansion = expand(job.curve, job.N)
    return {
        "c_n": [f"c_{n} = {c}" for n, c in enumerate(expansion.cs, start=2)],
        "wp(z)": expansion.wp.to_text("z"),
        "wp'(z)": expansion.wp_prime.to_text("z"),
        "zeta(z)": expansion.zeta.to_text("z"),
        "u(l)": expansion.u_of_l.to_text("l"),
        "l(u)": expansion.log.to_text("u"),
        "zeta(l(u))": expansion.zeta_of_log.to_text("u"),
        "d0": str(expansion.d0),
    }


def cmd_classify(job: JobConfig) -> Dict[str, Any]:
    """Reduction type of every prime, cross-checked against the point count
    and the valuation of b(p)."""
    primes = _primes_required(job)
    expansion = ExpansionCache().get(job.curve, max(primes) + 1)
    results = []
    for p in primes:
        classification = classify_prime(job.curve, p)
        entry: Dict[str, Any] = {"p": p, "class": str(classification)}
        if classification is not Reduction.BAD:
            check_classification(job.curve, p, expansion.b(p))
            entry["a"] = count_points_ap(job.curve, p)
            entry["b(p)"] = str(expansion.b(p))
        results.append(entry)
    return {"curve": job.curve.to_dict(), "results": results}


def _verify(
    job: JobConfig, A: QuadRat, primes: List[int]
) -> Tuple[Dict[str, Any], int]:
    from swh.eisenstein.verifier import TheoremVerifier

    verifier = TheoremVerifier(
        job.curve,
        A,
        required_terms(job, primes),
        k=job.k,
        places=job.places,
        domain=job.domain,
        thread_pool_size=job.thread_pool_size,
    )
    reports = verifier.verify_many(primes)
    payload = {
        "curve": job.curve.to_dict(),
        "A": str(A),
        "results": [report.to_dict() for report in reports],
    }
    return payload, 0 if all(report.ok for report in reports) else 1


def cmd_verify(job: JobConfig) -> Tuple[Dict[str, Any], int]:
    """Verify A at every configured prime; the exit code is 0 iff every
    verification succeeded. With A = recover, A is first recovered from the
    ordinary primes."""
    primes = _primes_required(job)
    A = job.A
    if job.recover:
        recovered = cmd_recover(job)
        if recovered["recovered"] is None:
            payload = {"curve": job.curve.to_dict(), "A": None, "recovery": recovered}
            return payload, 1
        A = job.curve.field.parse(recovered["recovered"])
    if A is None:
        raise ConfigurationError("missing 'A' configuration")
    return _verify(job, A, primes)


def cmd_solve_mu(job: JobConfig) -> Tuple[Dict[str, Any], int]:
    """Solve mu at the supersingular primes among the configured ones."""
    primes = [
        p
        for p in _primes_required(job)
        if classify_prime(job.curve, p) is Reduction.SUPERSINGULAR
    ]
    if not primes:
        raise _invalid("no supersingular prime to solve mu at")
    if job.A is None:
        raise ConfigurationError("missing 'A' configuration")
    return _verify(job, job.A, primes)


def cmd_recover(job: JobConfig) -> Dict[str, Any]:
    """A mod p^k at each ordinary prime, then the element of height at most
    ``bound`` matching all of them, if the combined modulus allows it."""
    from swh.eisenstein.verifier import (
        effective_k,
        reconstruct_from_residues,
        recover_lambda,
    )

    primes = [
        p
        for p in _primes_required(job)
        if classify_prime(job.curve, p) is Reduction.ORDINARY
    ]
    if not primes:
        raise _invalid("recovering A needs at least one ordinary prime")
    N = required_terms(job, primes)
    expansion = None
    if job.domain != "fast":
        expansion = ExpansionCache().get(job.curve, N + 1)
    residues: List[ModularQuad] = []
    entries = []
    for p in primes:
        k = effective_k(p, N, job.k, Reduction.ORDINARY)
        if k == 0:
            logger.warning("Skipping %d: N = %d is below %d", p, N, p)
            continue
        domain = "exact" if job.domain == "both" else job.domain
        lam = recover_lambda(job.curve, p, N, k, domain, expansion)
        residues.append(lam)
        entries.append({"p": p, "k": k, "lambda": str(lam)})
    recovered = None
    modulus = 1
    for lam in residues:
        modulus *= lam.modulus
    if residues and modulus > 2 * job.bound**2:
        recovered = reconstruct_from_residues(residues, job.bound)
    else:
        logger.warning(
            "Modulus %d too small to reconstruct with height bound %d",
            modulus,
            job.bound,
        )
    return {
        "curve": job.curve.to_dict(),
        "bound": job.bound,
        "residues": entries,
        "recovered": None if recovered is None else str(recovered),
    }


def cmd_analytic(job: JobConfig) -> Dict[str, Any]:
    """Analytic A at each real embedding, recognized in the coefficient
    field, and compared with the configured A if any."""
    from swh.eisenstein.analytic import analytic_report

    report = analytic_report(job.curve, job.bound)
    if job.A is not None:
        report["A"] = str(job.A)
        report["matches"] = report["recognized"] == str(job.A)
    return report
