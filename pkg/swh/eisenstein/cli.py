# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

from __future__ import annotations

# WARNING: do not import unnecessary things here to keep cli startup time under
# control
import contextlib
import logging
from typing import TYPE_CHECKING, Any, Callable, Iterator, Optional

import click

from swh.core.cli import CONTEXT_SETTINGS, AliasedGroup
from swh.core.cli import swh as swh_cli_group

if TYPE_CHECKING:
    from swh.eisenstein.jobs import JobConfig


class VerificationFailed(click.ClickException):
    exit_code = 1


class InvalidConfiguration(click.ClickException):
    exit_code = 2


class InternalInconsistencyError(click.ClickException):
    exit_code = 3


class QuadRatParamType(click.ParamType):
    """An element a/b + c/d*w of the coefficient field, or ``recover``."""

    name = "quadrat"

    def convert(self, value, param, ctx):
        from swh.eisenstein.exactnum import QuadFieldDesc, parse_quadrat
        from swh.eisenstein.exc import PreconditionViolation

        if value is None or value == "recover":
            return value
        try:
            parse_quadrat(value, QuadFieldDesc(1, 1))
        except PreconditionViolation:
            self.fail(f"expected a/b + c/d*w or 'recover', got {value!r}", param, ctx)
        return value


@contextlib.contextmanager
def reporting_errors() -> Iterator[None]:
    """Turn library errors into click exceptions carrying the exit code."""
    from swh.eisenstein.exc import (
        ConfigurationError,
        EisensteinError,
        InternalInconsistency,
    )

    try:
        yield
    except ConfigurationError as e:
        raise InvalidConfiguration(str(e))
    except InternalInconsistency as e:
        raise InternalInconsistencyError(str(e))
    except EisensteinError as e:
        raise VerificationFailed(str(e))


def job_options(func: Callable) -> Callable:
    options = [
        click.option(
            "--config-file",
            "-C",
            default=None,
            metavar="CONFIGFILE",
            type=click.Path(exists=True, dir_okay=False),
            help="Job configuration file.",
        ),
        click.option("--curve", help="Bundled curve name or curve YAML file."),
        click.option(
            "--A", "A", type=QuadRatParamType(), help="Value of A, or 'recover'."
        ),
        click.option("--primes", help="Primes, as a list (7,11) or range (5..50)."),
        click.option(
            "--filter",
            "filter_",
            type=click.Choice(["all", "all-good", "ordinary", "supersingular"]),
            help="Keep only primes of this reduction type.",
        ),
        click.option("--N", "N", type=click.IntRange(min=1), help="Terms checked."),
        click.option("--k", "k", type=click.IntRange(min=1), help="Digits of mu."),
        click.option("--places", type=click.Choice(["0", "1", "both"])),
        click.option("--domain", type=click.Choice(["exact", "fast", "both"])),
        click.option("--bound", type=click.IntRange(min=1), help="Height bound."),
        click.option(
            "--out",
            type=click.Path(dir_okay=False, writable=True),
            help="Output file (default: standard output).",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _load(config_file: Optional[str], **overrides: Any) -> JobConfig:
    from swh.eisenstein.jobs import load_job

    overrides["filter"] = overrides.pop("filter_", None)
    with reporting_errors():
        return load_job(config_file, overrides)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w") as f:
            f.write(text)


@swh_cli_group.group(
    name="eisenstein", context_settings=CONTEXT_SETTINGS, cls=AliasedGroup
)
@click.pass_context
def eisenstein(ctx):
    """Exact verification of the p-adic weight-2 Eisenstein value of CM
    elliptic curves."""


@eisenstein.command()
@job_options
def expand(config_file, **overrides):
    """Print the Weierstrass, zeta and formal-group expansions to order N."""
    from swh.eisenstein.jobs import cmd_expand
    from swh.eisenstein.report import format_expansion

    job = _load(config_file, **overrides)
    with reporting_errors():
        series = cmd_expand(job)
    _emit(format_expansion(series), job.out)


@eisenstein.command()
@job_options
def classify(config_file, **overrides):
    """Classify primes as bad, ordinary or supersingular."""
    from swh.eisenstein.jobs import cmd_classify
    from swh.eisenstein.report import dumps

    job = _load(config_file, **overrides)
    with reporting_errors():
        payload = cmd_classify(job)
    _emit(dumps(payload), job.out)


@eisenstein.command()
@job_options
@click.pass_context
def verify(ctx, config_file, **overrides):
    """Verify A at every configured prime; exits 1 if any check fails."""
    from swh.eisenstein.jobs import cmd_verify
    from swh.eisenstein.report import dumps, summary

    job = _load(config_file, **overrides)
    with reporting_errors():
        payload, code = cmd_verify(job)
    _emit(dumps(payload), job.out)
    if "results" in payload:
        click.echo(summary(payload), err=True)
    ctx.exit(code)


@eisenstein.command(name="solve-mu")
@job_options
@click.pass_context
def solve_mu(ctx, config_file, **overrides):
    """Solve mu at the supersingular primes; exits 1 if any check fails."""
    from swh.eisenstein.jobs import cmd_solve_mu
    from swh.eisenstein.report import dumps

    job = _load(config_file, **overrides)
    with reporting_errors():
        payload, code = cmd_solve_mu(job)
    _emit(dumps(payload), job.out)
    ctx.exit(code)


@eisenstein.command()
@job_options
def recover(config_file, **overrides):
    """Recover A from its residues at the ordinary primes."""
    from swh.eisenstein.jobs import cmd_recover
    from swh.eisenstein.report import dumps

    job = _load(config_file, **overrides)
    with reporting_errors():
        payload = cmd_recover(job)
    _emit(dumps(payload), job.out)


@eisenstein.command()
@job_options
def analytic(config_file, **overrides):
    """Compute A from the periods at each real embedding and recognize it."""
    from swh.eisenstein.jobs import cmd_analytic
    from swh.eisenstein.report import dumps

    job = _load(config_file, **overrides)
    with reporting_errors():
        payload = cmd_analytic(job)
    _emit(dumps(payload), job.out)


def main():
    logging.basicConfig()
    return eisenstein(auto_envvar_prefix="SWH_EISENSTEIN")


if __name__ == "__main__":
    main()
