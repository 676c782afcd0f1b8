"""Drug-likeness as a weighted geometric mean of desirability functions."""

from __future__ import annotations

import math

from .descriptors import DescriptorSet
from .tables import AdsParams, load_qed_params

_PARAMS: dict[str, AdsParams] | None = None


def _params() -> dict[str, AdsParams]:
    global _PARAMS
    if _PARAMS is None:
        _PARAMS = load_qed_params()
    return _PARAMS


def ads(x: float, p: AdsParams) -> float:
    rise = 1.0 + math.exp(-(x - p.c + p.d / 2.0) / p.e)
    fall = 1.0 + math.exp(-(x - p.c - p.d / 2.0) / p.f)
    return p.a + (p.b / rise) * (1.0 - 1.0 / fall)


def desirability(name: str, x: float) -> float:
    p = _params()[name]
    return max(ads(x, p) / p.dmax, 1e-9)


def qed_score(d: DescriptorSet) -> float:
    values = {
        "MW": d.mw,
        "ALOGP": d.logp,
        "HBA": float(d.hba),
        "HBD": float(d.hbd),
        "PSA": d.tpsa,
        "ROTB": float(d.rotb),
        "AROM": float(d.aromatic_rings),
        "ALERTS": float(d.alerts),
    }
    num = 0.0
    den = 0.0
    for name, p in _params().items():
        num += p.weight * math.log(desirability(name, values[name]))
        den += p.weight
    return math.exp(num / den)
