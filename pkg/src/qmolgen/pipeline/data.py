"""Dataset ingestion: SMILES-per-line files to deduplicated graph lists."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..graphs import MolecularGraph
from ..smiles import SmilesError, canonical_smiles, parse

log = logging.getLogger(__name__)


class IngestError(RuntimeError):
    pass


@dataclass
class Dataset:
    graphs: list[MolecularGraph]
    keys: list[str]  # canonical SMILES, aligned with graphs
    path: str
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def key_set(self) -> set[str]:
        return set(self.keys)

    def __len__(self) -> int:
        return len(self.graphs)


def ingest(path: str) -> Dataset:
    """Parse, validate, and canonical-deduplicate a SMILES-lines file.

    Molecules failing the element/size/valence constraints are dropped with
    a logged reason; duplicate canonical structures keep the first copy.
    """
    try:
        fh = open(path)
    except OSError as exc:
        raise IngestError(f"cannot read dataset {path}: {exc}") from exc

    graphs: list[MolecularGraph] = []
    keys: list[str] = []
    seen: set[str] = set()
    stats = {"lines": 0, "kept": 0, "rejected": 0, "duplicates": 0, "comments": 0}
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                stats["comments"] += 1
                continue
            stats["lines"] += 1
            try:
                g = parse(line)
            except SmilesError as exc:
                stats["rejected"] += 1
                log.info("dropped %s:%d %r: %s", path, lineno, line, exc)
                continue
            key = canonical_smiles(g)
            if key in seen:
                stats["duplicates"] += 1
                continue
            seen.add(key)
            graphs.append(g)
            keys.append(key)
            stats["kept"] += 1

    if not graphs:
        raise IngestError(f"dataset {path} produced no valid molecules")
    return Dataset(graphs=graphs, keys=keys, path=path, stats=stats)
