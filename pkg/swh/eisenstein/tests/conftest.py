# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

import pytest

from swh.eisenstein.fixtures import get_curve
from swh.eisenstein.weierstrass import expand


@pytest.fixture(scope="session")
def cm15():
    return get_curve("cm15")


@pytest.fixture(scope="session")
def field(cm15):
    return cm15.field


@pytest.fixture(scope="session")
def cm15_A(field):
    return field.parse("13/2 + 21/2*w")


@pytest.fixture(scope="session")
def cm15_short(cm15):
    """Expansions mod u^20."""
    return expand(cm15, 20)


@pytest.fixture(scope="session")
def cm15_expansion(cm15):
    """Expansions through u^500, shared by the verification tests."""
    return expand(cm15, 501)


@pytest.fixture(scope="session")
def cm4():
    return get_curve("cm4")


@pytest.fixture
def parse(field):
    return field.parse
