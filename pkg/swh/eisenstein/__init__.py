# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .interface import CoefficientDomain

logger = logging.getLogger(__name__)


def get_domain(cls: str, **kwargs) -> "CoefficientDomain":
    """
    Get a coefficient domain of class `cls` with arguments `kwargs`.

    Args:
        cls: domain's class, ``exact`` or ``fast``
        kwargs: arguments to pass to the class' constructor

    Returns:
        an instance of the requested domain

    Raises:
        ValueError if passed an unknown domain class.

    """
    from .domains import DOMAIN_TYPES

    if cls not in DOMAIN_TYPES:
        raise ValueError(f"{cls} is not a valid coefficient domain.")
    logger.debug("Building %s coefficient domain", cls)
    return DOMAIN_TYPES[cls](**kwargs)
