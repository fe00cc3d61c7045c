# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

import random

from gmpy2 import mpq
import pytest

from swh.eisenstein.domains import ExactDomain, PadicDomain
from swh.eisenstein.exactnum import PlaceContext, QuadFieldDesc
from swh.eisenstein.exc import NotInvertibleError, PreconditionViolation
from swh.eisenstein.series import (
    BivariateSeries,
    TruncatedSeries,
    honda_quotient_check,
)


@pytest.fixture
def dom(field):
    return ExactDomain(field)


@pytest.fixture
def series(dom):
    def build(terms, prec):
        return TruncatedSeries.from_dict(dom, terms, prec)

    return build


def geometric(series, prec, ratio=1):
    return series({n: mpq(ratio) ** n for n in range(prec)}, prec)


def test_leading_zeros_are_trimmed(dom):
    f = TruncatedSeries.from_coefficients(dom, 0, [0, 0, 3, 1], 4)
    assert (f.val, f.prec) == (2, 4)
    assert f[1] == dom.zero()
    assert f[2] == dom.coerce(3)
    with pytest.raises(PreconditionViolation, match="known mod u\\^4"):
        f[4]


def test_zero_series(dom):
    zero = TruncatedSeries.from_dict(dom, {}, 5)
    assert zero.is_zero
    assert str(zero) == "O(u^5)"


def test_product_and_power(series):
    f = series({0: 1, 1: 1}, 6)
    assert f * series({0: 1, 1: -1}, 6) == series({0: 1, 2: -1}, 6)
    assert f**3 == series({0: 1, 1: 3, 2: 3, 3: 1}, 6)
    assert (f * 2 - f) == f


def test_product_precision(series):
    f = series({1: 1}, 4)
    g = series({2: 1}, 10)
    # u*(u^2 + O(u^10)) is known mod u^11 but u^2*(u + O(u^4)) only mod u^6
    assert (f * g).prec == 6


def test_inverse(series):
    assert series({0: 1, 1: -1}, 6).inverse() == geometric(series, 6)
    inverse = series({2: 1, 3: 1}, 6).inverse()
    assert inverse == series({-2: 1, -1: -1, 0: 1, 1: -1}, 2)


def test_inverse_errors(series, dom):
    with pytest.raises(NotInvertibleError):
        series({}, 3).inverse()
    with pytest.raises(PreconditionViolation, match="cannot mix"):
        series({0: 1}, 3) * TruncatedSeries.from_dict(
            ExactDomain(QuadFieldDesc(0, 0)), {0: 1}, 3
        )


def test_compose(series):
    f = geometric(series, 6)
    two_u = series({1: 2}, 6)
    assert f.compose(two_u) == geometric(series, 6, ratio=2)
    with pytest.raises(PreconditionViolation, match="valuation 0"):
        f.compose(f)


def test_compose_principal_part(series):
    f = series({-1: 1}, 3)
    g = series({1: 1, 2: 1}, 5)
    assert f.compose(g) == series({-1: 1, 0: -1, 1: 1, 2: -1}, 3)


def test_revert(series):
    f = series({n: 1 for n in range(1, 8)}, 8)
    expected = series({n: (-1) ** (n + 1) for n in range(1, 8)}, 8)
    assert f.revert() == expected
    assert f.compose(expected) == series({1: 1}, 8)


def test_revert_needs_valuation_one(series):
    with pytest.raises(PreconditionViolation, match="valuation 1"):
        series({2: 1}, 6).revert()


def test_derive_integrate(series):
    f = series({n: (-1) ** n for n in range(5)}, 5)
    log = f.integrate()
    assert log == series({n: mpq((-1) ** (n + 1), n) for n in range(1, 6)}, 6)
    assert log.derive() == f
    with pytest.raises(PreconditionViolation, match="u\\^-1"):
        series({-1: 1}, 3).integrate()


def test_substitute_power_and_parity(series):
    f = series({0: 1, 1: 1}, 3)
    g = f.substitute_power(2)
    assert g == series({0: 1, 2: 1}, 6)
    assert g.has_parity(0)
    assert not f.has_parity(0)
    assert series({1: 1, 3: 5}, 6).has_parity(1)


def test_truncate(series):
    f = geometric(series, 8)
    assert f.truncate(3) == geometric(series, 3)
    assert f.truncate(10) is f


def test_frobenius_series(series, field):
    f = series({1: field.w, 3: 2}, 5)
    ctx = PlaceContext.create(field, 7)
    assert f.frobenius_series(ctx) == series({1: 1 - field.w, 3: 2}, 5)


def test_map_coefficients_into_fast_domain(series, field):
    fast = PadicDomain(PlaceContext.create(field, 7, 2), 2)
    f = series({0: 0, 1: 7, 2: mpq(1, 7), 3: 49}, 5)
    reduced = f.map_coefficients(fast.coerce, fast)
    assert reduced.domain == fast
    assert (reduced.val, reduced.prec) == (1, 5)
    assert [reduced[n].v for n in (1, 2, 3)] == [1, -1, 2]
    assert fast.is_zero(reduced[4])


def test_to_text(series, cm15_A):
    f = series({1: 1, 2: -1, 3: cm15_A}, 5)
    assert f.to_text() == "u + -u^2 + (13/2 + 21/2*w)*u^3 + O(u^5)"
    assert series({0: 3, 2: mpq(1, 2)}, 4).to_text("z") == "3 + 1/2*z^2 + O(z^4)"


def test_honda_quotient_check(series):
    a = series({0: 1, 1: 1}, 6)
    b = series({0: 1, 1: 1, 2: 7}, 6)
    assert honda_quotient_check(a, b, 7, 14)


def test_honda_quotient_check_preconditions(series):
    a = series({0: 1, 1: 1}, 6)
    with pytest.raises(PreconditionViolation, match="not congruent"):
        honda_quotient_check(a, series({0: 1, 1: 2}, 6), 7, 3)
    with pytest.raises(PreconditionViolation, match="not 7-integral"):
        honda_quotient_check(series({0: 1, 1: mpq(1, 7)}, 6), a, 7, 3)


def test_bivariate(series, dom):
    x = BivariateSeries.embed(series({1: 1}, 5), "X")
    y = BivariateSeries.embed(series({1: 1}, 5), "Y")
    assert (x * y).terms == {(1, 1): dom.one()}
    total = (x + y).substitute_into(geometric(series, 4))
    assert total.coefficient(1, 1) == dom.coerce(2)
    assert total.coefficient(2, 1) == dom.coerce(3)
    assert total.coefficient(0, 0) == dom.one()
    assert total.coefficient_series(1) == series({0: 1, 1: 2, 2: 3}, 3)
    assert total.swap().terms == total.terms
    with pytest.raises(PreconditionViolation, match="beyond"):
        total.coefficient(2, 2)
    with pytest.raises(PreconditionViolation, match="unknown variable"):
        BivariateSeries.embed(series({1: 1}, 5), "Z")


def random_series(rng, dom, val, prec, size=9):
    coeffs = [
        dom.field.element(rng.randint(-size, size), rng.randint(-size, size))
        for _ in range(prec - val)
    ]
    coeffs[0] = rng.randint(1, size)
    return TruncatedSeries.from_coefficients(dom, val, coeffs, prec)


def assert_same(f, g):
    assert f.prec == g.prec
    assert (f - g).is_zero, f"{f} != {g}"


@pytest.mark.parametrize("seed", range(5))
def test_compose_matches_sum_of_powers(dom, seed):
    rng = random.Random(seed)
    f = random_series(rng, dom, 0, 12)
    g = random_series(rng, dom, 1, 12)
    naive = TruncatedSeries.constant(dom, f[0], 12)
    power = g
    for n in range(1, 12):
        naive = naive + power * f[n]
        power = power * g
    assert_same(f.compose(g), naive)


@pytest.mark.parametrize("prec", [12, 24, 40])
def test_revert_matches_lagrange_inversion(dom, prec):
    rng = random.Random(prec)
    coeffs = [1] + [rng.randint(-5, 5) for _ in range(prec - 2)]
    f = TruncatedSeries.from_coefficients(dom, 1, coeffs, prec)
    g = f.revert()
    u = TruncatedSeries.variable(dom, prec)
    assert_same(f.compose(g), u)
    assert_same(g.compose(f), u)
    # [u^n] g = [u^(n-1)] (u/f)^n / n
    h = TruncatedSeries.from_coefficients(dom, 0, f.coeffs, prec - 1).inverse()
    power = h
    for n in range(1, prec):
        assert g[n] == power[n - 1] * dom.coerce(mpq(1, n))
        power = power * h


@pytest.mark.parametrize("seed", range(3))
def test_chain_rule(dom, seed):
    rng = random.Random(seed)
    f = random_series(rng, dom, 0, 25)
    g = random_series(rng, dom, 1, 25)
    lhs = f.compose(g).derive()
    rhs = f.derive().compose(g) * g.derive()
    assert_same(lhs.truncate(24), rhs.truncate(24))


@pytest.mark.parametrize("seed", range(3))
def test_ring_axioms(dom, seed):
    rng = random.Random(seed)
    a, b, c = (random_series(rng, dom, rng.randint(0, 2), 30) for _ in range(3))
    assert_same((a + b) + c, a + (b + c))
    assert_same(a + b, b + a)
    assert_same(a * b, b * a)
    assert_same((a * b) * c, a * (b * c))
    assert_same(a * (b + c), a * b + a * c)
    assert (a - a).is_zero
    assert_same(a * TruncatedSeries.constant(dom, 1, 40), a)


def test_honda_quotient_check_random_congruent_pairs(dom):
    rng = random.Random(2026)
    for _ in range(50):
        p = rng.choice([3, 5, 7, 11])
        a = random_series(rng, dom, 1, 6, size=20)
        c = random_series(rng, dom, rng.randint(1, 3), 6, size=20)
        n = rng.randint(1, 12)
        assert honda_quotient_check(a, a + c * p, p, n), (a, c, p, n)


def test_honda_quotient_check_prime_power_exponents(series):
    a = series({1: 1}, 25)
    b = series({1: 1, 2: 5}, 25)
    assert honda_quotient_check(a, b, 5, 25)
