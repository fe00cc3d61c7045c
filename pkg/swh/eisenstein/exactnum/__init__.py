# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

from .modular import (
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
from .padic import (
    EXACT,
    PadicScaled,
    PlaceContext,
    coordinate_valuation,
    embed_place,
    frobenius,
    residue,
    to_padic,
    valuation,
    vp,
)
from .quadratic import QuadFieldDesc, QuadRat, format_quadrat, parse_quadrat

__all__ = [
    "EXACT",
    "ModularQuad",
    "PadicScaled",
    "PlaceContext",
    "PlaceResidue",
    "QuadFieldDesc",
    "QuadRat",
    "combine_places",
    "coordinate_valuation",
    "crt_combine",
    "embed_place",
    "format_quadrat",
    "frobenius",
    "hensel_lift_root",
    "kronecker",
    "modring_inv",
    "p_valuation",
    "parse_quadrat",
    "rational_reconstruction",
    "residue",
    "to_padic",
    "valuation",
    "vp",
]
