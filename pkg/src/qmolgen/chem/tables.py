"""Loading of the shipped parameter tables, with checksum verification."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources


class TableError(RuntimeError):
    """A parameter table failed to load or verify."""


def _data_text(name: str) -> str:
    ref = resources.files("qmolgen.chem").joinpath("data").joinpath(name)
    try:
        return ref.read_text()
    except FileNotFoundError as exc:
        raise TableError(f"missing data file {name}") from exc


def data_rows(name: str) -> list[list[str]]:
    rows = []
    for line in _data_text(name).splitlines():
        line = line.rstrip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split("\t"))
    return rows


def verify_checksums() -> dict[str, str]:
    """Compare shipped file digests against checksums.tsv; raise on mismatch."""
    recorded = {row[0]: row[1] for row in data_rows("checksums.tsv")}
    actual = {}
    for name in recorded:
        digest = hashlib.sha256(_data_text(name).encode()).hexdigest()
        actual[name] = digest
        if digest != recorded[name]:
            raise TableError(f"checksum mismatch for {name}: {digest} != {recorded[name]}")
    return actual


def load_crippen() -> dict[str, float]:
    table = {}
    for row in data_rows("crippen_contributions.tsv"):
        if len(row) != 2:
            raise TableError(f"bad crippen row: {row}")
        table[row[0]] = float(row[1])
    return table


def load_tpsa() -> dict[str, float]:
    table = {}
    for row in data_rows("tpsa_contributions.tsv"):
        if len(row) != 2:
            raise TableError(f"bad tpsa row: {row}")
        table[row[0]] = float(row[1])
    return table


@dataclass
class AdsParams:
    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    dmax: float
    weight: float


def load_qed_params() -> dict[str, AdsParams]:
    table = {}
    for row in data_rows("qed_params.tsv"):
        if len(row) != 9:
            raise TableError(f"bad qed row: {row}")
        table[row[0]] = AdsParams(*(float(v) for v in row[1:]))
    return table


def load_alert_names() -> list[str]:
    return [row[0] for row in data_rows("alerts.tsv")]


def load_sa_fragments() -> tuple[dict[str, int], int]:
    counts: dict[str, int] = {}
    for row in data_rows("sa_fragments.tsv"):
        if len(row) != 2:
            raise TableError(f"bad sa fragment row: {row}")
        counts[row[0]] = int(row[1])
    if not counts:
        raise TableError("empty SA fragment table")
    return counts, max(counts.values())
