"""Simultaneous-perturbation stochastic approximation for the circuit angles.

Gradient-free: each step evaluates the loss at theta +/- c_k * delta for one
Rademacher direction delta and moves against the estimated slope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuit import QcbmParameters, clipped_cross_entropy


class SpsaDivergenceError(RuntimeError):
    """A perturbed loss evaluation returned a non-finite value."""


@dataclass
class SpsaState:
    """Iteration counter plus standard gain schedules.

    a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma.
    """

    a: float = 0.2
    c: float = 0.1
    A: float = 10.0
    alpha: float = 0.602
    gamma: float = 0.101
    k: int = 0

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ValueError("gain constants a and c must be positive")

    def step_size(self) -> float:
        return self.a / (self.k + 1 + self.A) ** self.alpha

    def perturbation_size(self) -> float:
        return self.c / (self.k + 1) ** self.gamma


def spsa_step(
    theta: np.ndarray,
    loss_fn: Callable[[np.ndarray], float],
    state: SpsaState,
    rng: np.random.Generator | int | None,
) -> tuple[np.ndarray, float]:
    """One SPSA update; returns (new theta, mean of the two loss evals)."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    a_k = state.step_size()
    c_k = state.perturbation_size()
    delta = rng.integers(0, 2, size=theta.shape).astype(np.float64) * 2.0 - 1.0
    loss_plus = float(loss_fn(theta + c_k * delta))
    loss_minus = float(loss_fn(theta - c_k * delta))
    if not (np.isfinite(loss_plus) and np.isfinite(loss_minus)):
        raise SpsaDivergenceError(
            f"non-finite loss at iteration {state.k}: L+={loss_plus}, L-={loss_minus}"
        )
    ghat = (loss_plus - loss_minus) / (2.0 * c_k * delta)
    state.k += 1
    return theta - a_k * ghat, 0.5 * (loss_plus + loss_minus)


def train_to_target(
    params: QcbmParameters,
    target_samples: np.ndarray,
    iterations: int,
    shots: int | None = None,
    seed: int | np.random.Generator | None = None,
    state: SpsaState | None = None,
    clip_floor: float | None = None,
) -> tuple[QcbmParameters, list[float]]:
    """Fit the circuit to target bitstrings by repeated SPSA steps.

    `shots`, when given, subsamples that many target rows per iteration;
    otherwise every iteration scores the full target set. The returned trace
    holds the mean of the two perturbed losses per iteration.
    """
    targets = np.asarray(target_samples)
    if targets.ndim != 2 or targets.shape[0] == 0:
        raise ValueError("target_samples must be a nonempty (m, n) bit matrix")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    state = state if state is not None else SpsaState()
    n, L = params.n_qubits, params.n_layers
    kwargs = {} if clip_floor is None else {"clip_floor": clip_floor}

    theta = params.to_vector()
    trace: list[float] = []
    for _ in range(iterations):
        if shots is not None and shots < targets.shape[0]:
            rows = rng.choice(targets.shape[0], size=shots, replace=False)
            batch = targets[rows]
        else:
            batch = targets

        def loss_fn(vec: np.ndarray) -> float:
            return clipped_cross_entropy(QcbmParameters.from_vector(n, L, vec), batch, **kwargs)

        theta, loss = spsa_step(theta, loss_fn, state, rng)
        trace.append(loss)
    return QcbmParameters.from_vector(n, L, theta), trace
