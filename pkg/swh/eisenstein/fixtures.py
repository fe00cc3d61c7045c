# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

"""Bundled curves, usable by name wherever a curve is configured."""

from typing import Any, Dict, Optional

from swh.eisenstein.exc import ConfigurationError
from swh.eisenstein.weierstrass import CurveModel

CURVES: Dict[str, Dict[str, Any]] = {
    # CM by the maximal order of Q(sqrt(-15)), defined over Q(sqrt(5))
    "cm15": {
        "s": 1,
        "t": 1,
        "g2": "7110 + 11505*w",
        "g3": "220465 + 356720*w",
        "dK": -15,
        "f": 1,
        "A": "13/2 + 21/2*w",
    },
    # y^2 = 4x^3 - 4x, the lattice Z[i]
    "cm4": {
        "s": 0,
        "t": 0,
        "g2": "4",
        "g3": "0",
        "dK": -4,
        "f": 1,
        "A": "0",
    },
}


def get_curve(name: str) -> CurveModel:
    try:
        config = CURVES[name]
    except KeyError:
        raise ConfigurationError(
            f"{name} is not a known curve (expected one of {', '.join(CURVES)})"
        ) from None
    return CurveModel.from_config(config, name=name)


def known_value(name: str) -> Optional[str]:
    """The algebraic value A(Lambda) of a bundled curve, in wire syntax."""
    return CURVES.get(name, {}).get("A")
