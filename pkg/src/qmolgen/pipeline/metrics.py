"""Evaluation metrics over generated molecules and the metrics.csv format."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .. import autograd as ag
from ..chem import FragmentTable, fingerprint, score_molecule
from ..chem.rewards import normalize_rewards
from ..graphs import DenseGraphLogits, MolecularGraph, decode_logits, valence_valid
from ..nets import Generator
from ..qcbm import QcbmParameters, sample
from ..smiles import canonical_smiles

CSV_HEADER = "epoch,validity,uniqueness,novelty,diversity,qed,sa,logp,average"


@dataclass
class MetricsReport:
    epoch: int
    validity: float  # percent
    uniqueness: float  # percent of valid
    novelty: float  # percent of unique
    diversity: float  # in [0, 1]
    qed: float
    sa: float
    logp: float
    average: float
    empty_warning: bool = False

    def csv_row(self) -> str:
        return (
            f"{self.epoch},{self.validity:.4f},{self.uniqueness:.4f},{self.novelty:.4f},"
            f"{self.diversity:.6f},{self.qed:.6f},{self.sa:.6f},{self.logp:.6f},{self.average:.6f}"
        )


def decode_batch(x_logits: np.ndarray, a_logits: np.ndarray) -> list[MolecularGraph]:
    return [
        decode_logits(DenseGraphLogits(x_logits[i], a_logits[i]))
        for i in range(x_logits.shape[0])
    ]


def generate_graphs(
    generator: Generator,
    qcbm_params: QcbmParameters,
    n_samples: int,
    rng: np.random.Generator,
) -> list[MolecularGraph]:
    z = sample(qcbm_params, n_samples, rng)
    with ag.no_grad():
        x_logits, a_logits = generator.forward(z)
    return decode_batch(x_logits.data, a_logits.data)


def evaluate_graphs(
    graphs: list[MolecularGraph],
    training_keys: set[str],
    sa_table: FragmentTable,
    epoch: int = 0,
    require_connected: bool = True,
    pair_cap: int = 10_000,
    rng: np.random.Generator | None = None,
    logp_range: tuple[float, float] = (-2.12, 6.04),
) -> MetricsReport:
    """Validity, uniqueness, novelty, diversity, and property means."""
    total = len(graphs)
    valid = [g for g in graphs if valence_valid(g, require_connected=require_connected)]
    if not valid:
        return MetricsReport(epoch, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, empty_warning=True)

    keys = [canonical_smiles(g) for g in valid]
    unique_keys = set(keys)
    novel = {k for k in unique_keys if k not in training_keys}

    fps = [fingerprint(g) for g in valid]
    diversity = _diversity(fps, pair_cap, rng)

    qed_vals, sa_vals, logp_vals = [], [], []
    for g in valid:
        s = score_molecule(g, sa_table)
        s = normalize_rewards(s, logp_min=logp_range[0], logp_max=logp_range[1])
        qed_vals.append(s.qed_norm)
        sa_vals.append(s.sa_norm)
        logp_vals.append(s.logp_norm)
    qed = float(np.mean(qed_vals))
    sa = float(np.mean(sa_vals))
    logp = float(np.mean(logp_vals))

    return MetricsReport(
        epoch=epoch,
        validity=100.0 * len(valid) / total,
        uniqueness=100.0 * len(unique_keys) / len(valid),
        novelty=100.0 * len(novel) / len(unique_keys),
        diversity=diversity,
        qed=qed,
        sa=sa,
        logp=logp,
        average=float(np.mean([qed, sa, logp])),
    )


def _diversity(fps, pair_cap: int, rng: np.random.Generator | None) -> float:
    from ..chem import tanimoto

    n = len(fps)
    if n < 2:
        return 0.0
    total_pairs = n * (n - 1) // 2
    sims = []
    if total_pairs <= pair_cap:
        for i in range(n):
            for j in range(i + 1, n):
                sims.append(tanimoto(fps[i], fps[j]))
    else:
        if rng is None:
            rng = np.random.default_rng(0)
        idx_i = rng.integers(0, n, size=pair_cap)
        idx_j = rng.integers(0, n - 1, size=pair_cap)
        idx_j = np.where(idx_j >= idx_i, idx_j + 1, idx_j)
        for i, j in zip(idx_i, idx_j):
            sims.append(tanimoto(fps[i], fps[j]))
    return float(1.0 - np.mean(sims))


def append_metrics_row(path: str, report: MetricsReport) -> None:
    """Append one row, rewriting through a temp file and atomic rename."""
    existing = ""
    if os.path.exists(path):
        with open(path) as fh:
            existing = fh.read()
    if not existing:
        existing = CSV_HEADER + "\n"
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(existing + report.csv_row() + "\n")
    os.replace(tmp, path)
