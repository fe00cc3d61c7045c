# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

import math
import random

from gmpy2 import mpq
import pytest

from swh.eisenstein.exactnum import (
    ModularQuad,
    PlaceResidue,
    combine_places,
    crt_combine,
    hensel_lift_root,
    kronecker,
    modring_inv,
    p_valuation,
    rational_reconstruction,
)
from swh.eisenstein.exactnum.modular import reduce_rational
from swh.eisenstein.exc import (
    NotInvertibleError,
    PreconditionViolation,
    RamifiedPrimeError,
)


@pytest.mark.parametrize(
    "a,n,expected", [(5, 7, -1), (5, 11, 1), (5, 13, -1), (5, 19, 1), (-15, 7, -1)]
)
def test_kronecker(a, n, expected):
    assert kronecker(a, n) == expected


def test_kronecker_negative_modulus():
    with pytest.raises(PreconditionViolation):
        kronecker(5, -7)


def test_p_valuation():
    assert p_valuation(mpq(49, 3), 7) == 2
    assert p_valuation(mpq(3, 343), 7) == -3
    assert p_valuation(12, 7) == 0
    assert p_valuation(0, 7) == math.inf


def test_reduce_rational():
    assert reduce_rational(mpq(13, 2), 289) == 151
    with pytest.raises(NotInvertibleError):
        reduce_rational(mpq(1, 14), 49)


def test_hensel_lift_root():
    assert hensel_lift_root(1, 1, 11, 1) == (4, 8)
    assert hensel_lift_root(1, 1, 11, 2) == (37, 85)
    assert hensel_lift_root(1, 1, 19, 1) == (5, 15)
    for k in (1, 3, 6):
        modulus = 19**k
        for r in hensel_lift_root(1, 1, 19, k):
            assert (r * r - r - 1) % modulus == 0


def test_hensel_lift_root_no_roots():
    with pytest.raises(PreconditionViolation, match="no root"):
        hensel_lift_root(1, 1, 7, 2)
    with pytest.raises(RamifiedPrimeError):
        hensel_lift_root(1, 1, 5, 2)


def test_modular_quad_from_quadrat(cm15_A):
    residue = ModularQuad.from_quadrat(cm15_A, 17, 2)
    assert str(residue) == "151 + 155*w mod 17^2"
    assert (residue.a, residue.b) == (151, 155)
    assert ModularQuad.from_quadrat(cm15_A, 19, 1) == ModularQuad(
        cm15_A.field, 19, 1, 16, 1
    )
    assert residue.reduce(1) == ModularQuad.from_quadrat(cm15_A, 17, 1)
    with pytest.raises(PreconditionViolation):
        residue.reduce(3)


def test_modular_quad_arithmetic(field):
    w = ModularQuad(field, 7, 2, 0, 1)
    one = ModularQuad(field, 7, 2, 1)
    assert w * w == w + one
    assert w - w == ModularQuad(field, 7, 2, 0)
    assert -one == ModularQuad(field, 7, 2, 48)
    with pytest.raises(PreconditionViolation):
        w + ModularQuad(field, 7, 1, 0, 1)


def test_modring_inv(field):
    w = ModularQuad(field, 7, 2, 0, 1)
    assert modring_inv(w) == ModularQuad(field, 7, 2, -1, 1)
    with pytest.raises(NotInvertibleError):
        modring_inv(ModularQuad(field, 7, 2, 7, 14))


def test_rational_reconstruction():
    assert rational_reconstruction(2463, 17**3, 13) == mpq(13, 2)
    assert rational_reconstruction(151, 289, 12) is None
    residue = -3 * pow(5, -1, 10007) % 10007
    assert rational_reconstruction(residue, 10007, 50) == mpq(-3, 5)


def test_rational_reconstruction_modulus_too_small():
    with pytest.raises(PreconditionViolation, match="too small"):
        rational_reconstruction(1, 289, 13)


def test_crt_combine():
    assert crt_combine([(2, 3), (3, 5), (2, 7)]) == (23, 105)
    with pytest.raises(PreconditionViolation, match="not coprime"):
        crt_combine([(1, 9), (2, 6)])
    with pytest.raises(PreconditionViolation):
        crt_combine([])


def test_combine_places(field):
    residues = [PlaceResidue(19, 1, 12, place=1), PlaceResidue(19, 1, 2, place=0)]
    combined = combine_places(residues, (5, 15), field)
    assert (combined.a, combined.b) == (16, 1)


def test_combine_places_needs_both(field):
    with pytest.raises(PreconditionViolation, match="both places"):
        combine_places([PlaceResidue(19, 1, 2)], (5, 15), field)


SMALL_ODD_PRIMES = [p for p in range(3, 200) if all(p % q for q in range(2, p))]


def test_kronecker_matches_euler_criterion():
    for p in SMALL_ODD_PRIMES:
        for a in range(-199, 200):
            euler = pow(a % p, (p - 1) // 2, p)
            assert kronecker(a, p) == (-1 if euler == p - 1 else euler), (a, p)


def test_kronecker_is_multiplicative():
    rng = random.Random(20260101)
    for _ in range(500):
        a, b = rng.randint(-500, 500), rng.randint(-500, 500)
        n = rng.choice([3, 5, 7, 9, 15, 21, 45, 97, 121, 143])
        assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)
        m = rng.choice([3, 5, 7, 11, 13])
        assert kronecker(a, n * m) == kronecker(a, n) * kronecker(a, m)


def test_hensel_roots_satisfy_vieta():
    rng = random.Random(7)
    checked = 0
    while checked < 100:
        p = rng.choice(SMALL_ODD_PRIMES[2:])
        s, t = rng.randint(-30, 30), rng.randint(-30, 30)
        if kronecker(s * s + 4 * t, p) != 1:
            continue
        k = rng.randint(1, 8)
        modulus = p**k
        r0, r1 = hensel_lift_root(s, t, p, k)
        assert (r0 + r1 - s) % modulus == 0
        assert (r0 * r1 + t) % modulus == 0
        assert (r0 * r0 - s * r0 - t) % modulus == 0
        assert r0 % p < r1 % p
        checked += 1


def test_rational_reconstruction_against_brute_force():
    rng = random.Random(1009)
    modulus, bound = 211, 10
    for _ in range(60):
        residue = rng.randrange(modulus)
        candidates = {
            mpq(n, d)
            for n in range(-bound, bound + 1)
            for d in range(1, bound + 1)
            if (n - d * residue) % modulus == 0
        }
        assert len(candidates) <= 1
        expected = candidates.pop() if candidates else None
        assert rational_reconstruction(residue, modulus, bound) == expected


def test_rational_reconstruction_round_trip():
    rng = random.Random(4)
    modulus = 17**3 * 19**2
    for _ in range(100):
        value = mpq(rng.randint(-99, 99), rng.choice([1, 2, 3, 4, 5, 7, 11, 99]))
        residue = reduce_rational(value, modulus)
        assert rational_reconstruction(residue, modulus, 99) == value


def test_crt_combine_against_brute_force():
    rng = random.Random(12)
    pools = [(4, 9, 5), (7, 11, 13), (8, 3), (25, 49, 11), (17, 19)]
    for moduli in pools:
        total = math.prod(moduli)
        for _ in range(20):
            x = rng.randrange(total)
            residues = [(x % m + rng.randint(-3, 3) * m, m) for m in moduli]
            brute = [
                y for y in range(total) if all(y % m == r % m for r, m in residues)
            ]
            assert crt_combine(residues) == (brute[0], total)


@pytest.mark.parametrize("p,k", [(7, 3), (11, 2), (19, 4)])
def test_modring_inv_is_an_involution(field, p, k):
    rng = random.Random(p * 100 + k)
    one = ModularQuad(field, p, k, 1)
    modulus = p**k
    found = 0
    while found < 40:
        x = ModularQuad(field, p, k, rng.randrange(modulus), rng.randrange(modulus))
        if not x.is_unit():
            with pytest.raises(NotInvertibleError):
                modring_inv(x)
            continue
        inverse = modring_inv(x)
        assert x * inverse == one
        assert modring_inv(inverse) == x
        found += 1
