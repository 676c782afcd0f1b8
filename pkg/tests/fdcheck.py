"""Finite-difference gradient checking shared by unit and acceptance tests."""

import numpy as np

from qmolgen import autograd as ag


def fd_check_params(build_loss, params, tol=1e-4, h=1e-5, max_coords=60, seed=0):
    """Compare backward() grads to central differences on each parameter.

    Tensors larger than `max_coords` entries are probed on a seeded random
    coordinate subset. Returns the worst relative error encountered.
    """
    rng = np.random.default_rng(seed)
    for p in params:
        p.grad = None
    loss = build_loss()
    ag.backward(loss)
    worst = 0.0
    for p in params:
        assert p.grad is not None, f"no grad on {p!r}"
        flat = p.data.reshape(-1)
        gflat = p.grad.reshape(-1)
        n = flat.size
        coords = range(n) if n <= max_coords else rng.choice(n, size=max_coords, replace=False)
        scale = max(np.max(np.abs(gflat)), 1.0)
        for idx in coords:
            orig = flat[idx]
            flat[idx] = orig + h
            fp = build_loss().item()
            flat[idx] = orig - h
            fm = build_loss().item()
            flat[idx] = orig
            fd = (fp - fm) / (2 * h)
            err = abs(fd - gflat[idx]) / scale
            worst = max(worst, err)
            assert err < tol, f"grad mismatch at coord {idx}: analytic={gflat[idx]}, fd={fd}"
    return worst
