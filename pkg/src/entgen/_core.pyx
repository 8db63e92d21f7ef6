# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernels.

Same API as ``entgen._pure``; all functions mutate their amplitude buffers in
place. States are C-contiguous complex128 arrays of length 2**n with qubit 0
as the least-significant index bit.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt

ctypedef double complex cplx

BACKEND_NAME = "compiled"

cdef enum:
    K_RX = 0
    K_RY = 1
    K_RZ = 2
    K_H = 3
    K_X = 4
    K_CNOT = 5
    K_CRX = 6
    K_CRZ = 7
    K_CSWAP = 8


cdef inline void _mat2(int kind, double angle, cplx* m) noexcept nogil:
    cdef double c = cos(angle * 0.5)
    cdef double s = sin(angle * 0.5)
    cdef double h = 1.0 / sqrt(2.0)
    if kind == K_RX or kind == K_CRX:
        m[0] = c
        m[1] = -1j * s
        m[2] = -1j * s
        m[3] = c
    elif kind == K_RY:
        m[0] = c
        m[1] = -s
        m[2] = s
        m[3] = c
    elif kind == K_RZ or kind == K_CRZ:
        m[0] = c - 1j * s
        m[1] = 0
        m[2] = 0
        m[3] = c + 1j * s
    elif kind == K_H:
        m[0] = h
        m[1] = h
        m[2] = h
        m[3] = -h
    else:  # K_X
        m[0] = 0
        m[1] = 1
        m[2] = 1
        m[3] = 0


cdef inline void _apply_1q_c(cplx* amps, Py_ssize_t size, Py_ssize_t stride, cplx* m) noexcept nogil:
    cdef Py_ssize_t block, i, j
    cdef cplx a0, a1
    for block in range(0, size, 2 * stride):
        for i in range(block, block + stride):
            j = i + stride
            a0 = amps[i]
            a1 = amps[j]
            amps[i] = m[0] * a0 + m[1] * a1
            amps[j] = m[2] * a0 + m[3] * a1


cdef inline void _apply_ctrl_1q_c(cplx* amps, Py_ssize_t size, Py_ssize_t cmask,
                                  Py_ssize_t stride, cplx* m) noexcept nogil:
    cdef Py_ssize_t block, i, j
    cdef cplx a0, a1
    for block in range(0, size, 2 * stride):
        for i in range(block, block + stride):
            if (i & cmask) == 0:
                continue
            j = i + stride
            a0 = amps[i]
            a1 = amps[j]
            amps[i] = m[0] * a0 + m[1] * a1
            amps[j] = m[2] * a0 + m[3] * a1


cdef inline void _apply_cnot_c(cplx* amps, Py_ssize_t size, Py_ssize_t cmask,
                               Py_ssize_t tmask) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef cplx tmp
    for i in range(size):
        if (i & cmask) != 0 and (i & tmask) == 0:
            j = i | tmask
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


cdef inline void _apply_cswap_c(cplx* amps, Py_ssize_t size, Py_ssize_t cmask,
                                Py_ssize_t amask, Py_ssize_t bmask) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef cplx tmp
    for i in range(size):
        if (i & cmask) != 0 and (i & amask) != 0 and (i & bmask) == 0:
            j = (i ^ amask) | bmask
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


cdef inline void _apply_gate_c(cplx* amps, Py_ssize_t size, int kind,
                               int t0, int t1, int t2, double angle) noexcept nogil:
    cdef cplx m[4]
    if kind == K_CNOT:
        _apply_cnot_c(amps, size, (<Py_ssize_t>1) << t0, (<Py_ssize_t>1) << t1)
    elif kind == K_CSWAP:
        _apply_cswap_c(amps, size, (<Py_ssize_t>1) << t0, (<Py_ssize_t>1) << t1,
                       (<Py_ssize_t>1) << t2)
    elif kind == K_CRX or kind == K_CRZ:
        _mat2(kind, angle, m)
        _apply_ctrl_1q_c(amps, size, (<Py_ssize_t>1) << t0, (<Py_ssize_t>1) << t1, m)
    else:
        _mat2(kind, angle, m)
        _apply_1q_c(amps, size, (<Py_ssize_t>1) << t0, m)


def apply_gate(cplx[::1] amps, int n, int kind, int t0, int t1, int t2, double angle):
    with nogil:
        _apply_gate_c(&amps[0], amps.shape[0], kind, t0, t1, t2, angle)


def apply_pauli(cplx[::1] amps, int n, int which, int target):
    """Apply X (0), Y (1) or Z (2) to ``target`` in place."""
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << target
    cdef Py_ssize_t block, i, j
    cdef cplx tmp
    if which < 0 or which > 2:
        raise ValueError(f"pauli code must be 0..2, got {which}")
    with nogil:
        for block in range(0, size, 2 * stride):
            for i in range(block, block + stride):
                j = i + stride
                if which == 0:
                    tmp = amps[i]
                    amps[i] = amps[j]
                    amps[j] = tmp
                elif which == 1:
                    tmp = amps[i]
                    amps[i] = -1j * amps[j]
                    amps[j] = 1j * tmp
                else:
                    amps[j] = -amps[j]


cdef void _run_circuit_c(cplx* amps, Py_ssize_t size, Py_ssize_t ngates,
                         const int* kinds, const int* t0, const int* t1,
                         const int* t2, const double* angles) noexcept nogil:
    cdef Py_ssize_t g
    for g in range(ngates):
        _apply_gate_c(amps, size, kinds[g], t0[g], t1[g], t2[g], angles[g])


def run_circuit(cplx[::1] amps, int n, const int[::1] kinds, const int[::1] t0,
                const int[::1] t1, const int[::1] t2, const double[::1] angles):
    if kinds.shape[0] == 0:
        return
    with nogil:
        _run_circuit_c(&amps[0], amps.shape[0], kinds.shape[0],
                       &kinds[0], &t0[0], &t1[0], &t2[0], &angles[0])


def run_circuit_batch(cplx[:, ::1] batch, int n, const int[::1] kinds, const int[::1] t0,
                      const int[::1] t1, const int[::1] t2, const double[::1] angles):
    cdef Py_ssize_t r
    if kinds.shape[0] == 0:
        return
    with nogil:
        for r in range(batch.shape[0]):
            _run_circuit_c(&batch[r, 0], batch.shape[1], kinds.shape[0],
                           &kinds[0], &t0[0], &t1[0], &t2[0], &angles[0])


cdef inline int _popcount(Py_ssize_t v) noexcept nogil:
    cdef int c = 0
    while v:
        v &= v - 1
        c += 1
    return c


cdef void _fill_scatter(Py_ssize_t* table, Py_ssize_t count, int n,
                        Py_ssize_t mask) noexcept nogil:
    """table[v] = basis index with the bits of v scattered into the set bits of mask."""
    cdef Py_ssize_t v, out
    cdef int q, j
    for v in range(count):
        out = 0
        j = 0
        for q in range(n):
            if (mask >> q) & 1:
                out |= ((v >> j) & 1) << q
                j += 1
        table[v] = out


cdef double _subset_purity_c(const cplx* amps, int n, Py_ssize_t mask,
                             Py_ssize_t* sidx, Py_ssize_t* ridx) noexcept nogil:
    cdef int k = _popcount(mask)
    cdef Py_ssize_t ds = (<Py_ssize_t>1) << k
    cdef Py_ssize_t dr = (<Py_ssize_t>1) << (n - k)
    cdef Py_ssize_t full = ((<Py_ssize_t>1) << n) - 1
    cdef Py_ssize_t s1, s2, r
    cdef cplx g
    cdef double total = 0.0
    cdef double diag
    _fill_scatter(sidx, ds, n, mask)
    _fill_scatter(ridx, dr, n, full ^ mask)
    # purity = ||Gram||_F^2 of A A^H with A[s, r] = amps[sidx[s] + ridx[r]]
    for s1 in range(ds):
        diag = 0.0
        for r in range(dr):
            g = amps[sidx[s1] + ridx[r]]
            diag += g.real * g.real + g.imag * g.imag
        total += diag * diag
        for s2 in range(s1 + 1, ds):
            g = 0
            for r in range(dr):
                g += amps[sidx[s1] + ridx[r]] * amps[sidx[s2] + ridx[r]].conjugate()
            total += 2.0 * (g.real * g.real + g.imag * g.imag)
    return total


def subset_purity(const cplx[::1] amps, int n, Py_ssize_t mask):
    """Tr(rho_S^2) for the subset of qubits whose bits are set in ``mask``."""
    if mask <= 0 or mask >= ((<Py_ssize_t>1) << n):
        raise ValueError(f"mask must select a nonempty proper or full subset, got {mask}")
    scratch = np.empty(2 << n, dtype=np.intp)
    cdef Py_ssize_t[::1] sc = scratch
    cdef double out
    with nogil:
        out = _subset_purity_c(&amps[0], n, mask, &sc[0], &sc[(<Py_ssize_t>1) << n])
    return out


cdef double _powerset_sum_c(const cplx* amps, int n, Py_ssize_t* sidx,
                            Py_ssize_t* ridx) noexcept nogil:
    # empty and full subsets contribute 1 each; proper subsets pair with their
    # complements (equal purity for pure states), so only masks of size <= n/2
    # are evaluated.
    cdef double total = 2.0
    cdef Py_ssize_t full = ((<Py_ssize_t>1) << n) - 1
    cdef Py_ssize_t mask
    cdef int k
    for mask in range(1, full):
        k = _popcount(mask)
        if 2 * k < n or (2 * k == n and mask < (full ^ mask)):
            total += 2.0 * _subset_purity_c(amps, n, mask, sidx, ridx)
    return total


def powerset_purity_sum(const cplx[::1] amps, int n):
    """Sum of Tr(rho_a^2) over all 2^n subsets of a pure state."""
    scratch = np.empty(2 << n, dtype=np.intp)
    cdef Py_ssize_t[::1] sc = scratch
    cdef double out
    with nogil:
        out = _powerset_sum_c(&amps[0], n, &sc[0], &sc[(<Py_ssize_t>1) << n])
    return out


def ce_full_batch(const cplx[:, ::1] batch, int n):
    out = np.empty(batch.shape[0], dtype=np.float64)
    scratch = np.empty(2 << n, dtype=np.intp)
    cdef double[::1] ov = out
    cdef Py_ssize_t[::1] sc = scratch
    cdef double scale = 1.0 / ((<Py_ssize_t>1) << n)
    cdef Py_ssize_t r
    with nogil:
        for r in range(batch.shape[0]):
            ov[r] = 1.0 - scale * _powerset_sum_c(&batch[r, 0], n, &sc[0],
                                                  &sc[(<Py_ssize_t>1) << n])
    return out
