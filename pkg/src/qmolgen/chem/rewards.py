"""Property scoring bundle and unit-interval reward normalization."""

from __future__ import annotations

from dataclasses import dataclass

from ..graphs import MolecularGraph
from .descriptors import compute_descriptors
from .qed import qed_score
from .sa import FragmentTable, sa_score

LOGP_MIN = -2.12
LOGP_MAX = 6.04


@dataclass
class PropertyScores:
    qed_raw: float
    logp_raw: float
    sa_raw: float
    qed_norm: float = 0.0
    logp_norm: float = 0.0
    sa_norm: float = 0.0


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def normalize_rewards(p: PropertyScores, logp_min: float = LOGP_MIN, logp_max: float = LOGP_MAX) -> PropertyScores:
    """Fill normalized fields: qed passes through, logp min-max, sa inverted."""
    p.qed_norm = _clamp01(p.qed_raw)
    p.logp_norm = _clamp01((p.logp_raw - logp_min) / (logp_max - logp_min))
    p.sa_norm = _clamp01((10.0 - p.sa_raw) / 9.0)
    return p


def score_molecule(g: MolecularGraph, table: FragmentTable) -> PropertyScores:
    d = compute_descriptors(g)
    scores = PropertyScores(
        qed_raw=qed_score(d),
        logp_raw=d.logp,
        sa_raw=sa_score(g, table),
    )
    return normalize_rewards(scores)
