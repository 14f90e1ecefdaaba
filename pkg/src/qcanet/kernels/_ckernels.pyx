# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernels.

Same contract as _numpy_kernels: in-place updates on flat, C-contiguous
complex128 arrays with the qubit tensor in the trailing axes.
"""

import numpy as np

cimport cython

ctypedef double complex cdouble

BACKEND = "cython"


def apply_matrix(cdouble[::1] state, Py_ssize_t dim, Py_ssize_t right, mat):
    cdef cdouble[:, ::1] m = np.ascontiguousarray(mat, dtype=np.complex128)
    if dim > 16:
        from . import _numpy_kernels
        _numpy_kernels.apply_matrix(np.asarray(state), dim, right, np.asarray(m))
        return
    cdef Py_ssize_t block = dim * right
    cdef Py_ssize_t outer = state.shape[0] // block
    cdef Py_ssize_t a, r, j, k, base
    cdef cdouble buf[16]
    cdef cdouble acc
    for a in range(outer):
        base = a * block
        for r in range(right):
            for j in range(dim):
                buf[j] = state[base + j * right + r]
            for k in range(dim):
                acc = 0
                for j in range(dim):
                    acc = acc + m[k, j] * buf[j]
                state[base + k * right + r] = acc


def apply_update_interior(cdouble[::1] state, Py_ssize_t right, gate, active):
    cdef cdouble g00, g01, g10, g11
    g00, g01, g10, g11 = gate[0, 0], gate[0, 1], gate[1, 0], gate[1, 1]
    cdef long[::1] ms = np.array([pair[0] for pair in active], dtype=np.int64)
    cdef long[::1] ns = np.array([pair[1] for pair in active], dtype=np.int64)
    cdef Py_ssize_t n_active = ms.shape[0]
    cdef Py_ssize_t block = 8 * right
    cdef Py_ssize_t outer = state.shape[0] // block
    cdef Py_ssize_t a, r, p, base, lo, hi
    cdef cdouble vlo, vhi
    for a in range(outer):
        base = a * block
        for p in range(n_active):
            lo = base + (ms[p] * 4 + ns[p]) * right
            hi = lo + 2 * right
            for r in range(right):
                vlo = state[lo + r]
                vhi = state[hi + r]
                state[lo + r] = g00 * vlo + g01 * vhi
                state[hi + r] = g10 * vlo + g11 * vhi


def apply_update_left(cdouble[::1] state, Py_ssize_t right, gate, active):
    cdef cdouble g00, g01, g10, g11
    g00, g01, g10, g11 = gate[0, 0], gate[0, 1], gate[1, 0], gate[1, 1]
    cdef long[::1] ns = np.array(list(active), dtype=np.int64)
    cdef Py_ssize_t n_active = ns.shape[0]
    cdef Py_ssize_t block = 4 * right
    cdef Py_ssize_t outer = state.shape[0] // block
    cdef Py_ssize_t a, r, p, base, lo, hi
    cdef cdouble vlo, vhi
    for a in range(outer):
        base = a * block
        for p in range(n_active):
            lo = base + ns[p] * right
            hi = lo + 2 * right
            for r in range(right):
                vlo = state[lo + r]
                vhi = state[hi + r]
                state[lo + r] = g00 * vlo + g01 * vhi
                state[hi + r] = g10 * vlo + g11 * vhi


def apply_update_right(cdouble[::1] state, gate, active):
    cdef cdouble g00, g01, g10, g11
    g00, g01, g10, g11 = gate[0, 0], gate[0, 1], gate[1, 0], gate[1, 1]
    cdef long[::1] ms = np.array(list(active), dtype=np.int64)
    cdef Py_ssize_t n_active = ms.shape[0]
    cdef Py_ssize_t outer = state.shape[0] // 4
    cdef Py_ssize_t a, p, lo
    cdef cdouble vlo, vhi
    for a in range(outer):
        for p in range(n_active):
            lo = a * 4 + ms[p] * 2
            vlo = state[lo]
            vhi = state[lo + 1]
            state[lo] = g00 * vlo + g01 * vhi
            state[lo + 1] = g10 * vlo + g11 * vhi


def damping_sweep(cdouble[::1] state, Py_ssize_t length, double gamma, double[::1] unifs):
    cdef Py_ssize_t size = state.shape[0]
    cdef Py_ssize_t q, right, block, a, r, hi_base, jumps
    cdef double p_one, scale
    cdef cdouble v
    jumps = 0
    for q in range(length):
        right = 1 << (length - q - 1)
        block = 2 * right
        p_one = 0.0
        for a in range(size // block):
            hi_base = a * block + right
            for r in range(right):
                v = state[hi_base + r]
                p_one += v.real * v.real + v.imag * v.imag
        if unifs[q] < gamma * p_one:
            scale = 1.0 / np.sqrt(p_one)
            for a in range(size // block):
                hi_base = a * block + right
                for r in range(right):
                    state[hi_base - right + r] = state[hi_base + r] * scale
                    state[hi_base + r] = 0
            jumps += 1
        else:
            if 1.0 - gamma * p_one > 0.0:
                scale = 1.0 / np.sqrt(1.0 - gamma * p_one)
            else:
                scale = 1.0
            p_one = np.sqrt(1.0 - gamma) * scale
            for a in range(size // block):
                hi_base = a * block + right
                for r in range(right):
                    state[hi_base - right + r] = state[hi_base - right + r] * scale
                    state[hi_base + r] = state[hi_base + r] * p_one
    return jumps
