#!/usr/bin/env python3
"""Benchmark the compiled gate kernels against the numpy fallback.

Run: python3 benchmarks/bench_gates.py [--qubits 16] [--layers 2] [--repeats 20]
"""

import argparse
import time

import numpy as np


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(label, circuit_mod, kernels_mod, n, layers, repeats):
    from qmolgen.qcbm.circuit import QcbmParameters

    rng = np.random.default_rng(7)
    params = QcbmParameters.random(n, layers, rng, scale=1.0)
    amp = np.zeros(1 << n, dtype=np.complex128)

    def one_rx():
        kernels_mod.apply_rx(amp, n, n // 2, 0.37)

    def one_rxx():
        kernels_mod.apply_rxx(amp, n, 1, n - 2, 0.37)

    def full_build():
        circuit_mod.build_state(params)

    amp[0] = 1.0
    rx = time_call(one_rx, repeats * 5)
    rxx = time_call(one_rxx, repeats * 5)
    build = time_call(full_build, repeats)
    print(f"{label:<8} rx {rx * 1e6:9.1f} us   rxx {rxx * 1e6:9.1f} us   "
          f"build_state {build * 1e3:8.2f} ms")
    return build


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qubits", type=int, default=16)
    ap.add_argument("--layers", type=int, default=2)
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()

    import qmolgen.qcbm.circuit as circuit
    import qmolgen.qcbm.kernels as kernels
    from qmolgen.qcbm import _gates_py

    print(f"statevector: {args.qubits} qubits, {args.layers} layers "
          f"({args.qubits * 2 + args.qubits * (args.qubits - 1) // 2} gates per layer)")
    print(f"selected backend: {kernels.BACKEND}")

    times = {}
    if kernels.BACKEND == "cython":
        times["cython"] = bench_backend("cython", circuit, kernels, args.qubits, args.layers, args.repeats)
        # swap in the fallback and re-time through the same circuit code
        saved = kernels._impl
        kernels._impl = _gates_py
        kernels.apply_rx = _gates_py.apply_rx
        kernels.apply_rz = _gates_py.apply_rz
        kernels.apply_rxx = _gates_py.apply_rxx
        try:
            times["numpy"] = bench_backend("numpy", circuit, _gates_py, args.qubits, args.layers, args.repeats)
        finally:
            kernels._impl = saved
            kernels.apply_rx = saved.apply_rx
            kernels.apply_rz = saved.apply_rz
            kernels.apply_rxx = saved.apply_rxx
        print(f"speedup (full circuit): {times['numpy'] / times['cython']:.2f}x")
    else:
        times["numpy"] = bench_backend("numpy", circuit, _gates_py, args.qubits, args.layers, args.repeats)
        print("compiled backend unavailable; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
