# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector gate kernels (hot loop of prior training).

Same contract as ``_gates_py``: in-place updates on a flat complex128
array, qubit 0 = most significant index bit. The complex buffer is
reinterpreted as interleaved (re, im) doubles so the inner loops stay in
plain double arithmetic.
"""

import numpy as np

from libc.math cimport cos, sin


cdef inline double[::1] _as_doubles(amp):
    return np.asarray(amp).view(np.float64)


def apply_rx(amp, int n, int qubit, double theta):
    cdef double[::1] buf = _as_doubles(amp)
    cdef double c = cos(theta / 2.0)
    cdef double s = sin(theta / 2.0)
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t step = 1 << (n - 1 - qubit)
    cdef Py_ssize_t base, off, i0, i1
    cdef double re0, im0, re1, im1
    for base in range(0, size, 2 * step):
        for off in range(step):
            i0 = 2 * (base + off)
            i1 = i0 + 2 * step
            re0 = buf[i0]
            im0 = buf[i0 + 1]
            re1 = buf[i1]
            im1 = buf[i1 + 1]
            # new0 = c*a0 - i*s*a1 ; new1 = c*a1 - i*s*a0
            buf[i0] = c * re0 + s * im1
            buf[i0 + 1] = c * im0 - s * re1
            buf[i1] = c * re1 + s * im0
            buf[i1 + 1] = c * im1 - s * re0


def apply_rz(amp, int n, int qubit, double theta):
    cdef double[::1] buf = _as_doubles(amp)
    cdef double c = cos(theta / 2.0)
    cdef double s = sin(theta / 2.0)
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t step = 1 << (n - 1 - qubit)
    cdef Py_ssize_t base, off, i0, i1
    cdef double re, im
    for base in range(0, size, 2 * step):
        for off in range(step):
            i0 = 2 * (base + off)
            i1 = i0 + 2 * step
            # phase0 = c - i*s
            re = buf[i0]
            im = buf[i0 + 1]
            buf[i0] = c * re + s * im
            buf[i0 + 1] = c * im - s * re
            # phase1 = c + i*s
            re = buf[i1]
            im = buf[i1 + 1]
            buf[i1] = c * re - s * im
            buf[i1 + 1] = c * im + s * re


def apply_rxx(amp, int n, int qi, int qj, double theta):
    cdef double[::1] buf = _as_doubles(amp)
    cdef double c = cos(theta / 2.0)
    cdef double s = sin(theta / 2.0)
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t step_i = 1 << (n - 1 - qi)
    cdef Py_ssize_t step_j = 1 << (n - 1 - qj)
    cdef Py_ssize_t hi = step_i if step_i > step_j else step_j
    cdef Py_ssize_t lo = step_j if step_i > step_j else step_i
    cdef Py_ssize_t a, b, k, i00, i01, i10, i11
    cdef double re00, im00, re01, im01, re10, im10, re11, im11
    for a in range(0, size, 2 * hi):
        for b in range(0, hi, 2 * lo):
            for k in range(lo):
                i00 = 2 * (a + b + k)
                i01 = i00 + 2 * lo
                i10 = i00 + 2 * hi
                i11 = i10 + 2 * lo
                re00 = buf[i00]; im00 = buf[i00 + 1]
                re01 = buf[i01]; im01 = buf[i01 + 1]
                re10 = buf[i10]; im10 = buf[i10 + 1]
                re11 = buf[i11]; im11 = buf[i11 + 1]
                # pair (00, 11): new00 = c*a00 - i*s*a11, new11 = c*a11 - i*s*a00
                buf[i00] = c * re00 + s * im11
                buf[i00 + 1] = c * im00 - s * re11
                buf[i11] = c * re11 + s * im00
                buf[i11 + 1] = c * im11 - s * re00
                # pair (01, 10)
                buf[i01] = c * re01 + s * im10
                buf[i01 + 1] = c * im01 - s * re10
                buf[i10] = c * re10 + s * im01
                buf[i10 + 1] = c * im10 - s * re01


def apply_rotation_layer_fused(amp, int n, double[::1] theta_x, double[::1] theta_z):
    """Rx then Rz on every qubit, one call."""
    cdef double[::1] buf = _as_doubles(amp)
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t q, base, off, i0, i1, step
    cdef double cx, sx, cz, sz
    cdef double re0, im0, re1, im1, tre, tim
    for q in range(n):
        cx = cos(theta_x[q] / 2.0)
        sx = sin(theta_x[q] / 2.0)
        cz = cos(theta_z[q] / 2.0)
        sz = sin(theta_z[q] / 2.0)
        step = 1 << (n - 1 - q)
        for base in range(0, size, 2 * step):
            for off in range(step):
                i0 = 2 * (base + off)
                i1 = i0 + 2 * step
                re0 = buf[i0]
                im0 = buf[i0 + 1]
                re1 = buf[i1]
                im1 = buf[i1 + 1]
                # Rx
                tre = cx * re0 + sx * im1
                tim = cx * im0 - sx * re1
                re1 = cx * re1 + sx * im0
                im1 = cx * im1 - sx * re0
                re0 = tre
                im0 = tim
                # Rz: phase0 = cz - i*sz on |0>, phase1 = cz + i*sz on |1>
                buf[i0] = cz * re0 + sz * im0
                buf[i0 + 1] = cz * im0 - sz * re0
                buf[i1] = cz * re1 - sz * im1
                buf[i1 + 1] = cz * im1 + sz * re1


def apply_entangling_layer_fused(amp, int n, double[::1] thetas):
    """All-to-all Rxx in lexicographic (i, j) order, one call."""
    cdef double[::1] buf = _as_doubles(amp)
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t qi, qj, k, a, b, m, i00, i01, i10, i11, hi, lo
    cdef double c, s
    cdef double re00, im00, re01, im01, re10, im10, re11, im11
    k = 0
    for qi in range(n):
        for qj in range(qi + 1, n):
            c = cos(thetas[k] / 2.0)
            s = sin(thetas[k] / 2.0)
            k += 1
            hi = 1 << (n - 1 - qi)
            lo = 1 << (n - 1 - qj)
            for a in range(0, size, 2 * hi):
                for b in range(0, hi, 2 * lo):
                    for m in range(lo):
                        i00 = 2 * (a + b + m)
                        i01 = i00 + 2 * lo
                        i10 = i00 + 2 * hi
                        i11 = i10 + 2 * lo
                        re00 = buf[i00]; im00 = buf[i00 + 1]
                        re01 = buf[i01]; im01 = buf[i01 + 1]
                        re10 = buf[i10]; im10 = buf[i10 + 1]
                        re11 = buf[i11]; im11 = buf[i11 + 1]
                        buf[i00] = c * re00 + s * im11
                        buf[i00 + 1] = c * im00 - s * re11
                        buf[i11] = c * re11 + s * im00
                        buf[i11 + 1] = c * im11 - s * re00
                        buf[i01] = c * re01 + s * im10
                        buf[i01 + 1] = c * im01 - s * re10
                        buf[i10] = c * re10 + s * im01
                        buf[i10 + 1] = c * im10 - s * re01


def fwht_inplace(amp, int n):
    """Unnormalized fast Walsh-Hadamard transform over all qubit axes."""
    cdef double[::1] buf = _as_doubles(amp)
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t step, base, off, i0, i1
    cdef double re0, im0, re1, im1
    step = 1
    while step < size:
        for base in range(0, size, 2 * step):
            for off in range(step):
                i0 = 2 * (base + off)
                i1 = i0 + 2 * step
                re0 = buf[i0]; im0 = buf[i0 + 1]
                re1 = buf[i1]; im1 = buf[i1 + 1]
                buf[i0] = re0 + re1
                buf[i0 + 1] = im0 + im1
                buf[i1] = re0 - re1
                buf[i1 + 1] = im0 - im1
        step <<= 1
