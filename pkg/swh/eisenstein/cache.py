# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

import logging
import threading
from typing import Dict, Optional, Tuple

from swh.eisenstein.domains import ExactDomain
from swh.eisenstein.interface import CoefficientDomain
from swh.eisenstein.weierstrass import CurveModel, WeierstrassExpansion, expand

logger = logging.getLogger(__name__)


class ExpansionCache:
    """Expansions shared between verification jobs.

    One expansion is kept per (curve, domain), at the largest precision asked
    for so far; smaller requests are served by truncation. Computation happens
    under the lock, so concurrent jobs asking for the same curve compute it
    once.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: Dict[Tuple[CurveModel, CoefficientDomain], WeierstrassExpansion]
        self._entries = {}

    def _key(
        self, curve: CurveModel, domain: Optional[CoefficientDomain]
    ) -> Tuple[CurveModel, CoefficientDomain]:
        return (curve, domain if domain is not None else ExactDomain(curve.field))

    def get(
        self,
        curve: CurveModel,
        prec: int,
        domain: Optional[CoefficientDomain] = None,
    ) -> WeierstrassExpansion:
        key = self._key(curve, domain)
        with self._lock:
            entry = self._entries.get(key)
            if entry is None or entry.prec < prec:
                logger.debug("Cache miss for %s at precision %d", curve, prec)
                entry = expand(curve, prec, key[1])
                self._entries[key] = entry
        return entry.truncate(prec)

    def is_cached(
        self,
        curve: CurveModel,
        prec: int,
        domain: Optional[CoefficientDomain] = None,
    ) -> bool:
        with self._lock:
            entry = self._entries.get(self._key(curve, domain))
        return entry is not None and entry.prec >= prec

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
