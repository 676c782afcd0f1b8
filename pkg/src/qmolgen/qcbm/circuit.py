"""Dense statevector simulation of the layered Born-machine circuit.

Circuit structure per layer: single-qubit Rx then Rz on every qubit,
followed by Rxx on every qubit pair (i, j), i < j, applied in lexicographic
order (the pair gates within a layer commute, so the order is a convention,
not a physical choice).

Bit convention used everywhere, including the bitstrings handed to and from
the GAN side: bit i of a sample is qubit i, and qubit 0 is the most
significant bit of the basis-state index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

LOG_CLIP_DEFAULT = math.log(1e-8)


def pair_order(n_qubits: int) -> list[tuple[int, int]]:
    """Lexicographic qubit pairs (i, j) with i < j."""
    return [(i, j) for i in range(n_qubits) for j in range(i + 1, n_qubits)]


@dataclass
class QcbmParameters:
    """Rotation and entangling angles of the layered circuit."""

    n_qubits: int
    n_layers: int
    theta_x: np.ndarray
    theta_z: np.ndarray
    theta_xx: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1 or self.n_layers < 1:
            raise ValueError("n_qubits and n_layers must be positive")
        n, L = self.n_qubits, self.n_layers
        n_pairs = n * (n - 1) // 2
        self.theta_x = np.asarray(self.theta_x, dtype=np.float64).reshape(L, n)
        self.theta_z = np.asarray(self.theta_z, dtype=np.float64).reshape(L, n)
        self.theta_xx = np.asarray(self.theta_xx, dtype=np.float64).reshape(L, n_pairs)
        for name, arr in (("theta_x", self.theta_x), ("theta_z", self.theta_z), ("theta_xx", self.theta_xx)):
            if not np.isfinite(arr).all():
                raise ValueError(f"{name} contains non-finite angles")

    @classmethod
    def zeros(cls, n_qubits: int, n_layers: int) -> "QcbmParameters":
        n_pairs = n_qubits * (n_qubits - 1) // 2
        return cls(
            n_qubits,
            n_layers,
            np.zeros((n_layers, n_qubits)),
            np.zeros((n_layers, n_qubits)),
            np.zeros((n_layers, n_pairs)),
        )

    @classmethod
    def random(cls, n_qubits: int, n_layers: int, rng: np.random.Generator, scale: float = 0.1) -> "QcbmParameters":
        n_pairs = n_qubits * (n_qubits - 1) // 2
        return cls(
            n_qubits,
            n_layers,
            rng.normal(0.0, scale, size=(n_layers, n_qubits)),
            rng.normal(0.0, scale, size=(n_layers, n_qubits)),
            rng.normal(0.0, scale, size=(n_layers, n_pairs)),
        )

    @classmethod
    def broad(cls, n_qubits: int, n_layers: int, rng: np.random.Generator, scale: float = 0.1) -> "QcbmParameters":
        """Near-uniform initialization: first-layer Rx at pi/2 plus noise.

        A freshly random circuit concentrates mass near |0...0>, which
        starves the downstream sampler of latent entropy; this start makes
        every bitstring roughly equally likely.
        """
        params = cls.random(n_qubits, n_layers, rng, scale)
        params.theta_x[0] += math.pi / 2.0
        return params

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.theta_x.ravel(), self.theta_z.ravel(), self.theta_xx.ravel()])

    @classmethod
    def from_vector(cls, n_qubits: int, n_layers: int, vec: np.ndarray) -> "QcbmParameters":
        n, L = n_qubits, n_layers
        n_pairs = n * (n - 1) // 2
        vec = np.asarray(vec, dtype=np.float64)
        if vec.size != L * (2 * n + n_pairs):
            raise ValueError(f"angle vector has {vec.size} entries, expected {L * (2 * n + n_pairs)}")
        tx = vec[: L * n].reshape(L, n)
        tz = vec[L * n : 2 * L * n].reshape(L, n)
        txx = vec[2 * L * n :].reshape(L, n_pairs)
        return cls(n, L, tx, tz, txx)

    def copy(self) -> "QcbmParameters":
        return QcbmParameters(
            self.n_qubits, self.n_layers, self.theta_x.copy(), self.theta_z.copy(), self.theta_xx.copy()
        )


def initial_state(n_qubits: int) -> np.ndarray:
    amp = np.zeros(1 << n_qubits, dtype=np.complex128)
    amp[0] = 1.0
    return amp


def apply_rotation_layer(amp: np.ndarray, n_qubits: int, theta_x_row: np.ndarray, theta_z_row: np.ndarray) -> np.ndarray:
    """In-place Rx-then-Rz on each qubit; returns amp for chaining."""
    theta_x_row = np.ascontiguousarray(theta_x_row, dtype=np.float64)
    theta_z_row = np.ascontiguousarray(theta_z_row, dtype=np.float64)
    if theta_x_row.shape != (n_qubits,) or theta_z_row.shape != (n_qubits,):
        raise ValueError(
            f"rotation layer expects {n_qubits} angles per axis, "
            f"got {theta_x_row.shape} and {theta_z_row.shape}"
        )
    fused = getattr(kernels._impl, "apply_rotation_layer_fused", None)
    if fused is not None:
        fused(amp, n_qubits, theta_x_row, theta_z_row)
        return amp
    for q in range(n_qubits):
        kernels.apply_rx(amp, n_qubits, q, float(theta_x_row[q]))
        kernels.apply_rz(amp, n_qubits, q, float(theta_z_row[q]))
    return amp


_SIGN_CACHE: dict[int, np.ndarray] = {}


def _sign_matrix(n_qubits: int) -> np.ndarray:
    """(2^n, n) matrix of +/-1 spin values per basis state (qubit 0 = MSB)."""
    mat = _SIGN_CACHE.get(n_qubits)
    if mat is None:
        indices = np.arange(1 << n_qubits, dtype=np.int64)
        shifts = np.arange(n_qubits - 1, -1, -1, dtype=np.int64)
        bits = (indices[:, None] >> shifts[None, :]) & 1
        mat = 1.0 - 2.0 * bits.astype(np.float64)
        _SIGN_CACHE[n_qubits] = mat
    return mat


def apply_entangling_layer(amp: np.ndarray, n_qubits: int, theta_xx_row: np.ndarray) -> np.ndarray:
    """In-place all-to-all Rxx in lexicographic pair order; returns amp.

    For wide registers the commuting pair rotations are applied as one
    diagonal phase in the Hadamard-transformed basis (X -> Z), cutting the
    per-layer work from n(n-1)/2 statevector passes to two transforms.
    """
    theta_xx_row = np.ascontiguousarray(theta_xx_row, dtype=np.float64)
    n_pairs = n_qubits * (n_qubits - 1) // 2
    if theta_xx_row.shape != (n_pairs,):
        raise ValueError(f"entangling layer expects {n_pairs} pair angles, got {theta_xx_row.shape}")
    fwht = getattr(kernels._impl, "fwht_inplace", None)
    if fwht is not None and n_qubits >= 8:
        theta_full = np.zeros((n_qubits, n_qubits))
        rows, cols = np.triu_indices(n_qubits, k=1)
        theta_full[rows, cols] = theta_xx_row
        theta_full += theta_full.T
        signs = _sign_matrix(n_qubits)
        quad = np.einsum("ij,ij->i", signs @ theta_full, signs)  # = 2 * sum_{i<j}
        phases = np.exp(-0.25j * quad)
        fwht(amp, n_qubits)
        amp *= phases
        fwht(amp, n_qubits)
        amp *= 1.0 / (1 << n_qubits)
        return amp
    fused = getattr(kernels._impl, "apply_entangling_layer_fused", None)
    if fused is not None:
        fused(amp, n_qubits, theta_xx_row)
        return amp
    for k, (i, j) in enumerate(pair_order(n_qubits)):
        kernels.apply_rxx(amp, n_qubits, i, j, float(theta_xx_row[k]))
    return amp


def build_state(params: QcbmParameters) -> np.ndarray:
    """Full statevector from |0...0> through all layers."""
    amp = initial_state(params.n_qubits)
    for layer in range(params.n_layers):
        apply_rotation_layer(amp, params.n_qubits, params.theta_x[layer], params.theta_z[layer])
        apply_entangling_layer(amp, params.n_qubits, params.theta_xx[layer])
    return amp


def born_probabilities(amp: np.ndarray) -> np.ndarray:
    return (amp.real * amp.real + amp.imag * amp.imag).astype(np.float64)


def index_to_bits(index: int, n_qubits: int) -> np.ndarray:
    bits = np.zeros(n_qubits, dtype=np.uint8)
    for q in range(n_qubits):
        bits[q] = (index >> (n_qubits - 1 - q)) & 1
    return bits


def bits_to_index(bits: np.ndarray) -> int:
    idx = 0
    for b in np.asarray(bits).astype(int):
        idx = (idx << 1) | (b & 1)
    return idx


def bits_matrix_to_indices(bits: np.ndarray) -> np.ndarray:
    """(m, n) bit rows to basis indices, vectorized."""
    bits = np.asarray(bits, dtype=np.int64)
    n = bits.shape[1]
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    return bits @ weights


def sample(params: QcbmParameters, shots: int, rng: np.random.Generator | int | None) -> np.ndarray:
    """Draw `shots` i.i.d. bitstring rows (shots, n) from the Born law."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    probs = born_probabilities(build_state(params))
    probs = probs / probs.sum()
    cdf = np.cumsum(probs)
    draws = rng.random(shots)
    indices = np.searchsorted(cdf, draws, side="right")
    indices = np.minimum(indices, probs.size - 1)
    n = params.n_qubits
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def loss_from_probabilities(probs: np.ndarray, target_indices: np.ndarray, clip_floor: float = LOG_CLIP_DEFAULT) -> float:
    """Negative mean clipped log-likelihood of the targets under `probs`."""
    target_indices = np.asarray(target_indices, dtype=np.int64)
    if target_indices.size == 0:
        raise ValueError("empty target set")
    p = probs[target_indices]
    with np.errstate(divide="ignore"):
        logp = np.log(p)
    return float(-np.mean(np.maximum(logp, clip_floor)))


def clipped_cross_entropy(
    params: QcbmParameters,
    targets: np.ndarray,
    clip_floor: float = LOG_CLIP_DEFAULT,
) -> float:
    """Training loss of the prior against target bitstrings.

    Uses exact statevector probabilities; minimizing this maximizes the
    clipped log-likelihood of the targets.
    """
    targets = np.asarray(targets)
    if targets.ndim != 2 or targets.shape[0] == 0:
        raise ValueError("targets must be a nonempty (m, n) bit matrix")
    if targets.shape[1] != params.n_qubits:
        raise ValueError(f"target rows have {targets.shape[1]} bits, circuit has {params.n_qubits} qubits")
    probs = born_probabilities(build_state(params))
    return loss_from_probabilities(probs, bits_matrix_to_indices(targets), clip_floor)
