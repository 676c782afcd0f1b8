"""Numpy fallback gate kernels, API-compatible with the compiled module.

Amplitude layout: flat complex128 array of length 2**n, index bits ordered
so qubit 0 is the most significant bit of the basis-state index. All kernels
update the array in place.
"""

import math

import numpy as np


def _axis_view(amp: np.ndarray, n: int, qubit: int) -> np.ndarray:
    return np.moveaxis(amp.reshape((2,) * n), qubit, 0)


def apply_rx(amp: np.ndarray, n: int, qubit: int, theta: float) -> None:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    v = _axis_view(amp, n, qubit)
    a0 = v[0].copy()
    a1 = v[1].copy()
    v[0] = c * a0 - 1j * s * a1
    v[1] = c * a1 - 1j * s * a0


def apply_rz(amp: np.ndarray, n: int, qubit: int, theta: float) -> None:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    v = _axis_view(amp, n, qubit)
    v[0] *= c - 1j * s
    v[1] *= c + 1j * s


def apply_rxx(amp: np.ndarray, n: int, qi: int, qj: int, theta: float) -> None:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    w = np.moveaxis(amp.reshape((2,) * n), (qi, qj), (0, 1))
    a00 = w[0, 0].copy()
    a01 = w[0, 1].copy()
    a10 = w[1, 0].copy()
    a11 = w[1, 1].copy()
    w[0, 0] = c * a00 - 1j * s * a11
    w[0, 1] = c * a01 - 1j * s * a10
    w[1, 0] = c * a10 - 1j * s * a01
    w[1, 1] = c * a11 - 1j * s * a00
