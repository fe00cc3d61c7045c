# Copyright (C) 2026  The Software Heritage developers
# See the AUTHORS file at the top-level directory of this distribution
# License: GNU General Public License version 3, or any later version
# See top-level LICENSE file for more information

import json
from typing import Any, Dict, Mapping

from swh.eisenstein.exactnum import ModularQuad, PlaceResidue, QuadRat
from swh.eisenstein.reduction import Reduction
from swh.eisenstein.series import TruncatedSeries
from swh.eisenstein.verifier import VerificationReport


class ReportEncoder(json.JSONEncoder):
    """Writes exact values in their wire syntax."""

    def default(self, o: Any) -> Any:
        if isinstance(o, VerificationReport):
            return o.to_dict()
        if isinstance(o, (QuadRat, ModularQuad, PlaceResidue, TruncatedSeries)):
            return str(o)
        if isinstance(o, Reduction):
            return o.value
        return super().default(o)


def dumps(payload: Any) -> str:
    """Deterministic JSON: same payload, same bytes."""
    return json.dumps(payload, cls=ReportEncoder, indent=2) + "\n"


def format_expansion(series: Mapping[str, Any]) -> str:
    """One ``name = value`` line per entry, lists one element per line."""
    lines = []
    for name, value in series.items():
        if isinstance(value, (list, tuple)):
            lines.append(f"{name} =")
            lines.extend(f"  {item}" for item in value)
        else:
            lines.append(f"{name} = {value}")
    return "\n".join(lines) + "\n"


def summary(payload: Dict[str, Any]) -> str:
    results = payload.get("results", [])
    failed = [r for r in results if not r["ok"]]
    return f"{len(results) - len(failed)} ok, {len(failed)} failed"
