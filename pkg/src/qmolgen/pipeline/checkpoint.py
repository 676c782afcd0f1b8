"""Single-file checkpoint container with checksum and exact round-trips.

Layout: magic, 8-byte header length, canonical JSON header, little-endian
float64 array payload, sha256 digest of everything before it. Named arrays,
RNG states, and scalar counters round-trip losslessly, so a resumed run
replays the uninterrupted one bit for bit.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

MAGIC = b"QMGCKPT1"
FORMAT_VERSION = 1


class CheckpointError(RuntimeError):
    pass


@dataclass
class CheckpointPayload:
    epoch: int
    config: dict
    arrays: dict[str, np.ndarray]
    rng_states: dict[str, dict]
    scalars: dict[str, int] = field(default_factory=dict)


def save(payload: CheckpointPayload, path: str) -> None:
    manifest = []
    blobs = []
    offset = 0
    for name in sorted(payload.arrays):
        arr = np.ascontiguousarray(payload.arrays[name], dtype=np.float64)
        blob = arr.tobytes()
        manifest.append({"name": name, "shape": list(arr.shape), "offset": offset})
        blobs.append(blob)
        offset += len(blob)
    header = {
        "version": FORMAT_VERSION,
        "epoch": payload.epoch,
        "config": payload.config,
        "rng": payload.rng_states,
        "scalars": payload.scalars,
        "arrays": manifest,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    body = MAGIC + len(header_bytes).to_bytes(8, "big") + header_bytes + b"".join(blobs)
    digest = hashlib.sha256(body).digest()
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(body + digest)
    os.replace(tmp, path)


def load(path: str) -> CheckpointPayload:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if len(raw) < len(MAGIC) + 8 + 32 or raw[: len(MAGIC)] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint file")
    body, digest = raw[:-32], raw[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CheckpointError(f"{path}: checksum mismatch (corrupt or truncated)")
    header_len = int.from_bytes(body[len(MAGIC) : len(MAGIC) + 8], "big")
    header_start = len(MAGIC) + 8
    try:
        header = json.loads(body[header_start : header_start + header_len])
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"{path}: bad header: {exc}") from exc
    if header.get("version") != FORMAT_VERSION:
        raise CheckpointError(
            f"{path}: version {header.get('version')} unsupported (expected {FORMAT_VERSION})"
        )
    payload_bytes = body[header_start + header_len :]
    arrays = {}
    for entry in header["arrays"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        arr = np.frombuffer(payload_bytes, dtype="<f8", count=count, offset=start)
        arrays[entry["name"]] = arr.reshape(shape).copy()
    return CheckpointPayload(
        epoch=header["epoch"],
        config=header["config"],
        arrays=arrays,
        rng_states=header["rng"],
        scalars=header.get("scalars", {}),
    )


def rng_state_to_json(rng: np.random.Generator) -> dict:
    state = rng.bit_generator.state
    return json.loads(json.dumps(state, default=str))


def rng_from_json(state: dict) -> np.random.Generator:
    rng = np.random.Generator(np.random.PCG64())
    fixed = {
        "bit_generator": state["bit_generator"],
        "state": {k: int(v) for k, v in state["state"].items()},
        "has_uint32": int(state["has_uint32"]),
        "uinteger": int(state["uinteger"]),
    }
    rng.bit_generator.state = fixed
    return rng
