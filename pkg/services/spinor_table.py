"""
Spinor norms of the outer (diagram) automorphisms of simply-laced T_n++.

For each non-trivial diagram automorphism a, the isometry sigma(alpha_i) =
alpha_{a(i)} of W and its negative are factored into reflections and their
spinor norms reported.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from config import SIMPLY_LACED_HYPERBOLIC
from services.cartan import (
    ExtensionSpec,
    automorphism_isometry,
    diagram_automorphisms,
    double_extend,
)
from services.exactform import Isometry, SquarefreeClass, spinor_norm
from utils.errors import UnsupportedSpaceError


@dataclass(frozen=True)
class SpinorRow:
    automorphism: str
    theta_a: SquarefreeClass
    theta_minus_a: SquarefreeClass

    def to_dict(self) -> Dict:
        return {
            "automorphism": self.automorphism,
            "theta_a": int(self.theta_a),
            "theta_minus_a": int(self.theta_minus_a),
        }


@dataclass(frozen=True)
class SpinorOuterTable:
    name: str
    theta_minus_identity: SquarefreeClass
    rows: Tuple[SpinorRow, ...] = field(default_factory=tuple)

    @property
    def has_outer(self) -> bool:
        return bool(self.rows)

    def to_dict(self) -> Dict:
        return {
            "extension": self.name,
            "outer_automorphisms": [row.to_dict() for row in self.rows],
            "theta_minus_identity": int(self.theta_minus_identity),
            "note": None if self.rows else "no outer automorphisms",
        }

    def to_records(self) -> List[Dict]:
        """Flat rows for tabular output; the -id row always comes last."""
        records = [
            {"extension": self.name, "automorphism": r.automorphism, "theta(a)": int(r.theta_a),
             "theta(-a)": int(r.theta_minus_a)}
            for r in self.rows
        ]
        records.append(
            {"extension": self.name, "automorphism": "-id" if self.rows else "no outer automorphisms; -id",
             "theta(a)": None, "theta(-a)": int(self.theta_minus_identity)}
        )
        return records


def _theta(ext: ExtensionSpec, sigma: Isometry) -> SquarefreeClass:
    return spinor_norm(ext.W, sigma)


def spinor_outer_table(base_type: str, rank: int, ext: Optional[ExtensionSpec] = None) -> SpinorOuterTable:
    """
    Spinor norms of +-a for every non-trivial diagram automorphism a of T_n++.

    Raises:
        UnsupportedSpaceError: for extensions outside the simply-laced hyperbolic list.
    """
    if (base_type, rank) not in SIMPLY_LACED_HYPERBOLIC:
        raise UnsupportedSpaceError(
            f"spinor-outer covers the simply-laced hyperbolic extensions only, not {base_type}{rank}++"
        )
    ext = ext or double_extend(base_type, rank)
    minus_id = -Isometry.identity(ext.W)
    theta_minus_id = _theta(ext, minus_id)

    rows = []
    for aut in diagram_automorphisms(ext.cartan):
        if aut.is_identity():
            continue
        sigma = automorphism_isometry(ext, aut)
        rows.append(
            SpinorRow(
                automorphism=aut.describe(),
                theta_a=_theta(ext, sigma),
                theta_minus_a=_theta(ext, -sigma),
            )
        )
    logging.info(f"{ext.name}: {len(rows)} outer automorphisms, theta(-id) = {theta_minus_id}")
    return SpinorOuterTable(name=ext.name, theta_minus_identity=theta_minus_id, rows=tuple(rows))


def full_table() -> List[SpinorOuterTable]:
    return [spinor_outer_table(t, n) for t, n in SIMPLY_LACED_HYPERBOLIC]
