# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

import logging
import textwrap

import pytest
from sympy import primerange

from swh.core.sentry import init_sentry
from swh.eisenstein.cache import ExpansionCache
from swh.eisenstein.exactnum import ModularQuad
from swh.eisenstein.exc import (
    InternalInconsistency,
    PrecisionExhausted,
    PreconditionViolation,
)
from swh.eisenstein.reduction import Reduction
from swh.eisenstein.weierstrass import expand
from swh.eisenstein.verifier import (
    TheoremVerifier,
    VerificationReport,
    compare_reports,
    fast_path_agrees,
    fast_precision,
    frobenius_twist,
    mu_from_all_indices,
    mu_from_sparse_indices,
    place_context,
    reconstruct_from_residues,
    recover_lambda,
    residual_series,
    scan_violations,
    solve_mu_supersingular,
    verify_lambda_ordinary,
    verify_theorem,
)

SENTRY_DSN = "https://user@example.org/1234"


@pytest.fixture(scope="module")
def report_at_7(cm15, cm15_A, cm15_expansion):
    return verify_theorem(cm15, cm15_A, 7, 500, 2, expansion=cm15_expansion)


def test_supersingular_mu(report_at_7, field):
    assert report_at_7.ok
    assert report_at_7.classification is Reduction.SUPERSINGULAR
    assert report_at_7.mu == ModularQuad(field, 7, 2, 47)
    assert report_at_7.first_violation is None
    assert report_at_7.uncorrected_violation == (343, -2)


def test_report_to_dict(report_at_7):
    payload = report_at_7.to_dict()
    assert payload["class"] == "supersingular"
    assert payload["mu"] == "47 mod 7^2"
    assert payload["lambda"] == "13/2 + 21/2*w"
    assert payload["uncorrected_violation"] == [343, -2]
    assert payload["first_violation"] is None
    assert payload["ok"] is True


def test_uncorrected_residual_at_7(cm15, cm15_A, cm15_expansion):
    R = residual_series(cm15, cm15_A, 7, 500, expansion=cm15_expansion)
    first, worst = scan_violations(R, place_context(cm15, 7, 2), 500)
    assert first[0] == 7
    assert worst == (343, -2)


def test_mu_routes_agree(cm15, cm15_A, cm15_expansion, field):
    ctx = place_context(cm15, 7, 2)
    log = cm15_expansion.log.truncate(501)
    R = residual_series(cm15, cm15_A, 7, 500, expansion=cm15_expansion)
    T = frobenius_twist(log, ctx, 500)
    expected = ModularQuad(field, 7, 2, 47)
    assert mu_from_sparse_indices(R, T, log, ctx, 2) == expected
    assert mu_from_all_indices(R, T, ctx, 500, 2) == expected


def test_frobenius_twist(cm15_short, cm15, field):
    ctx = place_context(cm15, 7, 2)
    T = frobenius_twist(cm15_short.log, ctx, 19)
    assert T.coefficient(7) == field.element(1) / 7
    assert T.coefficient(8) == field.zero
    assert T.prec == 20


def test_wrong_A_fails_at_supersingular_prime(cm15, cm15_A, cm15_expansion):
    report = verify_theorem(cm15, cm15_A + 1, 7, 500, 2, expansion=cm15_expansion)
    assert not report.ok
    assert report.first_violation is not None


@pytest.mark.parametrize("p", [17, 19, 23, 31, 47])
def test_ordinary_primes(cm15, cm15_A, cm15_expansion, p):
    report = verify_theorem(cm15, cm15_A, p, 500, 2, expansion=cm15_expansion)
    assert report.ok, report.error
    assert report.classification is Reduction.ORDINARY
    assert report.lambda_recovered == ModularQuad.from_quadrat(
        cm15_A, p, report.k
    )


def test_wrong_A_fails_at_ordinary_prime(cm15, cm15_A, cm15_expansion):
    report = verify_lambda_ordinary(
        cm15, cm15_A + 1, 17, 500, 2, expansion=cm15_expansion
    )
    assert not report.ok
    assert report.first_violation == (17, -1)
    report = verify_theorem(cm15, cm15_A + 1, 17, 500, 2, expansion=cm15_expansion)
    assert not report.ok
    assert report.error.startswith("recovered lambda 151 + 155*w mod 17^2")


def test_perturbed_A_fails_mod_49(cm15, cm15_A, cm15_expansion):
    # A + 7 agrees with A mod 7, so only the k = 2 constraints at u^343 see it
    report = verify_theorem(cm15, cm15_A + 7, 7, 500, 2, expansion=cm15_expansion)
    assert report.k == 2
    assert not report.ok
    report = verify_theorem(cm15, cm15_A + 7, 7, 300, 2, expansion=cm15_expansion)
    assert report.k == 1
    assert report.ok, report.error


@pytest.mark.parametrize("p", list(primerange(7, 200)))
def test_every_good_prime(cm15, cm15_A, cm15_expansion, p):
    verifier = TheoremVerifier(cm15, cm15_A, 500, k=1)
    for q, place in verifier.jobs([p]):
        report = verify_theorem(
            cm15,
            cm15_A,
            q,
            500,
            1,
            place=place,
            expansion=cm15_expansion,
            count_points=p < 50,
        )
        assert report.ok, report.error
        assert report.classification in (Reduction.ORDINARY, Reduction.SUPERSINGULAR)


@pytest.fixture(scope="module")
def cm15_doubled(cm15):
    return cm15.scaled(2)


@pytest.fixture(scope="module")
def cm15_doubled_expansion(cm15_doubled):
    return expand(cm15_doubled, 61)


@pytest.mark.parametrize("p", list(primerange(7, 50)))
def test_weight_two_scaling(cm15_doubled, cm15_doubled_expansion, cm15_A, p):
    A = cm15_A / 4
    for q, place in TheoremVerifier(cm15_doubled, A, 60, k=1).jobs([p]):
        report = verify_theorem(
            cm15_doubled, A, q, 60, 1, place=place, expansion=cm15_doubled_expansion
        )
        assert report.ok, report.error


def test_recover_and_reconstruct(cm15, cm15_A, cm15_expansion):
    at_17 = recover_lambda(cm15, 17, 500, 2, expansion=cm15_expansion)
    at_19 = recover_lambda(cm15, 19, 500, 1, expansion=cm15_expansion)
    assert str(at_17) == "151 + 155*w mod 17^2"
    assert (at_19.a, at_19.b) == (16, 1)
    assert reconstruct_from_residues([at_17, at_19], 25) == cm15_A


def test_reconstruct_needs_residues():
    with pytest.raises(PreconditionViolation):
        reconstruct_from_residues([], 25)


def test_recover_lambda_preconditions(cm15, cm15_expansion):
    with pytest.raises(PreconditionViolation, match="not ordinary"):
        recover_lambda(cm15, 7, 500, 2, expansion=cm15_expansion)
    with pytest.raises(PreconditionViolation, match="needs N >= 289"):
        recover_lambda(cm15, 17, 200, 2, expansion=cm15_expansion)


def test_solve_mu_preconditions(cm15, cm15_A, cm15_expansion):
    with pytest.raises(PreconditionViolation, match="needs N >= 343"):
        solve_mu_supersingular(cm15, cm15_A, 7, 100, 2, expansion=cm15_expansion)
    with pytest.raises(PreconditionViolation, match="bad reduction"):
        residual_series(cm15, cm15_A, 5, 100)


def test_bad_prime_report(cm15, cm15_A):
    report = verify_theorem(cm15, cm15_A, 5, 500)
    assert report.ok
    assert report.classification is Reduction.BAD
    assert report.place is None
    assert report.mu is None


def test_k_is_lowered(cm15, cm15_A, cm15_expansion, caplog):
    with caplog.at_level(logging.WARNING, logger="swh.eisenstein.verifier"):
        report = verify_theorem(cm15, cm15_A, 7, 300, 2, expansion=cm15_expansion)
    assert report.ok
    assert report.k == 1
    assert report.mu == ModularQuad(report.mu.field, 7, 1, 47)
    assert "Lowering k from 2 to 1" in caplog.text


def test_precision_exhausted(cm15, cm15_A):
    with pytest.raises(PrecisionExhausted):
        verify_theorem(cm15, cm15_A, 7, 5)


def test_fast_precision():
    assert fast_precision(7, 500, 2) == 7
    assert fast_precision(17, 16, 1) == 3


def test_fast_path_agrees(cm15, cm15_expansion):
    assert fast_path_agrees(cm15, 7, 100, 3, expansion=cm15_expansion)
    assert fast_path_agrees(cm15, 19, 60, 2, place=1)


@pytest.mark.parametrize("p,N,k", [(7, 60, 1), (17, 300, 2)])
def test_both_domains(cm15, cm15_A, cm15_expansion, p, N, k):
    report = verify_theorem(
        cm15, cm15_A, p, N, k, domain="both", expansion=cm15_expansion
    )
    assert report.ok
    assert report.domain == "both"


@pytest.mark.parametrize("place", [0, 1])
def test_fast_domain_at_split_supersingular_prime(
    cm15, cm15_A, cm15_expansion, place
):
    fast = verify_theorem(cm15, cm15_A, 11, 130, 1, place=place, domain="fast")
    assert fast.ok, fast.error
    assert fast.classification is Reduction.SUPERSINGULAR
    both = verify_theorem(
        cm15, cm15_A, 11, 130, 1, place=place, domain="both", expansion=cm15_expansion
    )
    assert both.ok, both.error


def test_compare_reports():
    exact = VerificationReport(p=7, classification=Reduction.SUPERSINGULAR)
    fast = VerificationReport(p=7, classification=Reduction.SUPERSINGULAR, ok=False)
    compare_reports(exact, exact)
    with pytest.raises(InternalInconsistency, match="disagree on ok"):
        compare_reports(exact, fast)


def test_jobs(cm15, cm15_A):
    verifier = TheoremVerifier(cm15, cm15_A, 100, places="1")
    assert verifier.jobs([11, 7, 5, 7]) == [(5, None), (7, 0), (11, 1)]
    verifier = TheoremVerifier(cm15, cm15_A, 100)
    assert verifier.jobs([19, 13]) == [(13, 0), (19, 0), (19, 1)]
    with pytest.raises(PreconditionViolation):
        TheoremVerifier(cm15, cm15_A, 100, places="2")


def test_verify_many(cm15, cm15_A):
    cache = ExpansionCache()
    verifier = TheoremVerifier(cm15, cm15_A, 100, k=1, cache=cache)
    reports = verifier.verify_many([5, 7, 11, 17, 19])
    assert [(r.p, r.place) for r in reports] == [
        (5, None),
        (7, 0),
        (11, 0),
        (11, 1),
        (17, 0),
        (19, 0),
        (19, 1),
    ]
    assert all(r.ok for r in reports), [r.error for r in reports]
    assert cache.is_cached(cm15, 101)


def test_run_job_precision_exhausted(cm15, cm15_A):
    report = TheoremVerifier(cm15, cm15_A, 5).run_job(7, 0)
    assert not report.ok
    assert report.classification is Reduction.SUPERSINGULAR
    assert "does not reach" in report.error


def test_run_job_internal_error(cm15, cm15_A, mocker):
    reports = []
    init_sentry(SENTRY_DSN, extra_kwargs={"transport": reports.append})
    mocker.patch(
        "swh.eisenstein.verifier.verify_theorem",
        side_effect=RuntimeError("series exploded"),
    )
    report = TheoremVerifier(cm15, cm15_A, 100).run_job(7, 0)

    assert not report.ok
    assert report.place == 0
    assert report.error.startswith(
        textwrap.dedent(
            """\
            Internal error. This incident will be reported.
            The full error was:

            Traceback (most recent call last):
            """
        )
    )
    assert "RuntimeError: series exploded" in report.error
    assert any(
        r.get("exception", {}).get("values", [{}])[0].get("type") == "RuntimeError"
        for r in reports
    )


def test_run_job_internal_inconsistency_propagates(cm15, cm15_A, mocker):
    mocker.patch(
        "swh.eisenstein.verifier.verify_theorem",
        side_effect=InternalInconsistency("b(p) says ordinary"),
    )
    with pytest.raises(InternalInconsistency):
        TheoremVerifier(cm15, cm15_A, 100).run_job(7, 0)
