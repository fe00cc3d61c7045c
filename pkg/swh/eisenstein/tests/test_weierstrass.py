# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

from gmpy2 import mpq
import pytest

from swh.eisenstein.exc import DegenerateCurve, PreconditionViolation
from swh.eisenstein.series import BivariateSeries, TruncatedSeries
from swh.eisenstein.weierstrass import (
    MAX_FORMAL_GROUP_PRECISION,
    CurveModel,
    coordinate_series,
    denominators_are_powers_of_two,
    expand,
    formal_group_law,
    formal_log,
    is_fundamental_discriminant,
    wp_coeffs,
    wp_prime_series,
    wp_series,
    xy_integrality_check,
    zeta_of_log,
    zeta_series,
)

ZETA_COEFFICIENTS = {
    3: "-237/2 - 767/4*w",
    5: "-6299/4 - 2548*w",
    7: "-2438895/112 - 563745/16*w",
    9: "-2455225/8 - 7945275/16*w",
    11: "-1517389435/352 - 6974965*w",
    13: "-25264737675/416 - 3144554175/32*w",
}

LOG_COEFFICIENTS = {
    3: "0",
    5: "-711 - 2301/2*w",
    7: "-94485/4 - 38220*w",
    9: "60972375/8 + 98655375/8*w",
    11: "1288993125/2 + 4171269375/4*w",
    13: "-200868706875/2 - 162506197500*w",
}


def test_curve_invariants(cm15, parse):
    assert cm15.g2 == parse("7110 + 11505*w")
    assert cm15.j == parse("-52515 - 85995*w")
    assert cm15.norm_disc == 2**12 * 3**6 * 5**6
    assert cm15.cm_discriminant == -15
    assert cm15.to_dict()["j"] == "-52515 - 85995*w"


def test_wp_coefficients(cm15_short, parse):
    assert cm15_short.c(2) == parse("711/2 + 2301/4*w")
    assert cm15_short.c(3) == parse("31495/4 + 12740*w")
    assert cm15_short.wp.coefficient(2) == cm15_short.c(2)
    assert cm15_short.wp.coefficient(-2) == parse("1")
    assert cm15_short.wp.has_parity(0)


@pytest.mark.parametrize("n,expected", sorted(ZETA_COEFFICIENTS.items()))
def test_zeta_coefficients(cm15_short, parse, n, expected):
    assert cm15_short.zeta.coefficient(n) == parse(expected)


@pytest.mark.parametrize("n,expected", sorted(LOG_COEFFICIENTS.items()))
def test_log_coefficients(cm15_short, parse, n, expected):
    assert cm15_short.log.coefficient(n) == parse(expected)
    assert cm15_short.b(n) == parse(expected) * n


def test_odd_expansions(cm15_short, field):
    assert cm15_short.log.coefficient(1) == field.one
    assert cm15_short.log.has_parity(1)
    assert cm15_short.zeta_of_log.has_parity(1)
    assert cm15_short.u_of_l.has_parity(1)
    assert cm15_short.d0 == field.zero


def test_wp_differential_equation(cm15):
    wp = wp_series(cm15, 20)
    wp_prime = wp_prime_series(cm15, 20)
    residual = wp_prime * wp_prime - 4 * wp**3 + wp * cm15.g2 + cm15.g3
    assert residual.prec == 16
    assert residual.is_zero


def test_zeta_derivative_is_minus_wp(cm15):
    assert (zeta_series(cm15, 20).derive() + wp_series(cm15, 19)).is_zero


def test_log_routes_agree(cm15):
    assert formal_log(cm15, 15) == formal_log(cm15, 15, method="reversion")
    with pytest.raises(PreconditionViolation, match="unknown method"):
        formal_log(cm15, 15, method="guess")


def test_zeta_of_log_routes_agree(cm15):
    by_coordinates, d0 = zeta_of_log(cm15, 12)
    by_composition, d0_composed = zeta_of_log(cm15, 12, method="composition")
    assert by_coordinates == by_composition
    assert d0 == d0_composed


def test_u_of_l_inverts_log(cm15_short):
    log = cm15_short.log.truncate(12)
    identity = cm15_short.u_of_l.truncate(12).compose(log)
    assert identity == TruncatedSeries.variable(cm15_short.domain, 12)


def test_coordinate_series(cm15, field):
    x, y = coordinate_series(cm15, 10)
    assert x.val == -2 and x.coefficient(-2) == field.one
    assert y.val == -3 and y.coefficient(-3) == field.element(-2)
    # x = wp(l(u)) satisfies the curve equation
    lhs = y * y
    rhs = x * x * x * 4 - x * cm15.g2 - cm15.g3
    assert (lhs - rhs).is_zero


def test_coefficient_denominators(cm15_short):
    x, y = coordinate_series(cm15_short.curve, 20)
    assert denominators_are_powers_of_two(c for _, c in x.terms())
    assert denominators_are_powers_of_two(c for _, c in y.terms())
    assert xy_integrality_check(cm15_short.curve, 30, 7)


@pytest.mark.parametrize("p", [7, 11])
def test_coordinates_are_integral_at_supersingular_primes(cm15, p):
    assert xy_integrality_check(cm15, 300, p)


def test_scaling(cm15):
    omega = 2
    base = expand(cm15, 50)
    scaled = expand(cm15.scaled(omega), 50)
    for n in range(2, 26):
        assert scaled.c(n) == base.c(n) / omega ** (2 * n)
    for n in range(1, 50, 2):
        assert scaled.b(n) == base.b(n) * mpq(omega) ** (1 - n)
    assert scaled.curve.j == cm15.j


def test_truncated_expansion_matches(cm15_expansion, cm15_short):
    assert cm15_expansion.truncate(20) == cm15_short


def test_formal_group_law(cm15, field):
    law = formal_group_law(cm15, 8)
    assert law.coefficient(1, 0) == field.one
    assert law.coefficient(0, 1) == field.one
    for i, j in [(1, 1), (2, 1), (3, 1), (2, 2)]:
        assert law.coefficient(i, j) == field.zero
    for n in range(2, 8):
        assert law.coefficient(n, 0) == field.zero
    assert law.swap().terms == law.terms
    with pytest.raises(PreconditionViolation, match="limited"):
        formal_group_law(cm15, MAX_FORMAL_GROUP_PRECISION + 1)


def test_formal_group_law_adds_logarithms(cm15):
    law = formal_group_law(cm15, 10)
    log = formal_log(cm15, 10)
    total = BivariateSeries.embed(log, "X") + BivariateSeries.embed(log, "Y")
    assert law.substitute_into(log).prec == 10
    assert (law.substitute_into(log) - total).terms == {}


def test_formal_group_law_denominators(cm15):
    law = formal_group_law(cm15, 10)
    assert law.terms
    assert denominators_are_powers_of_two(law.terms.values())


def test_rational_curve(cm4):
    expansion = expand(cm4, 12)
    assert cm4.field.is_rational
    assert cm4.j == cm4.field.element(1728)
    assert expansion.c(2) == cm4.field.element(mpq(1, 5))
    assert expansion.c(3) == cm4.field.zero
    assert expansion.c(4) == cm4.field.element(mpq(1, 75))


def test_wp_coeffs_bounds(cm15):
    with pytest.raises(PreconditionViolation):
        wp_coeffs(cm15, 1)


def test_curve_validation(field):
    one = field.one
    with pytest.raises(DegenerateCurve):
        CurveModel(field, one * 3, one, -15)
    with pytest.raises(PreconditionViolation, match="fundamental"):
        CurveModel(field, one * 4, one, -16)
    with pytest.raises(PreconditionViolation, match="integral away from 2"):
        CurveModel(field, one / 3, one, -15)
    with pytest.raises(PreconditionViolation, match="missing g3"):
        CurveModel.from_config({"s": 1, "t": 1, "g2": "1", "dK": -15})


def test_fundamental_discriminants():
    assert is_fundamental_discriminant(-15)
    assert is_fundamental_discriminant(-4)
    assert not is_fundamental_discriminant(-16)
    assert not is_fundamental_discriminant(-9)
