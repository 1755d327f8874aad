# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels over packed ``uint64`` words.

Same contracts and outputs as ``_pykernels``; see that module for the layouts.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef enum:
    OP_H = 0
    OP_T = 1
    OP_TDG = 2
    OP_CZ = 3
    OP_X = 4
    OP_Y = 5
    OP_Z = 6
    OP_CX = 7
    OP_SWAP = 8


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popcount64(uint64_t v) nogil:
    return __builtin_popcountll(v)


def propagate(uint64_t[:, ::1] xs, uint64_t[:, ::1] zs, uint64_t[:, ::1] ph,
              int64_t[:, ::1] ops):
    cdef Py_ssize_t W = xs.shape[1]
    cdef Py_ssize_t N = ops.shape[0]
    cdef Py_ssize_t k, w
    cdef int64_t code, q0, q1
    cdef uint64_t x, z, x0, x1, p0
    if ops.shape[1] != 3:
        raise ValueError("ops must have shape (N, 3)")
    with nogil:
        for k in range(N):
            code = ops[k, 0]
            q0 = ops[k, 1]
            q1 = ops[k, 2]
            if code == OP_H:
                for w in range(W):
                    x = xs[q0, w]
                    z = zs[q0, w]
                    ph[1, w] ^= x & z
                    xs[q0, w] = z
                    zs[q0, w] = x
            elif code == OP_T:
                for w in range(W):
                    x = xs[q0, w]
                    zs[q0, w] ^= x
                    p0 = ph[0, w]
                    ph[1, w] ^= p0 & x
                    ph[0, w] = p0 ^ x
            elif code == OP_TDG:
                for w in range(W):
                    x = xs[q0, w]
                    zs[q0, w] ^= x
                    p0 = ph[0, w]
                    ph[1, w] ^= (~p0) & x
                    ph[0, w] = p0 ^ x
            elif code == OP_CZ:
                for w in range(W):
                    x0 = xs[q0, w]
                    x1 = xs[q1, w]
                    zs[q0, w] ^= x1
                    zs[q1, w] ^= x0
                    ph[1, w] ^= x0 & x1
            elif code == OP_CX:
                for w in range(W):
                    xs[q1, w] ^= xs[q0, w]
                    zs[q0, w] ^= zs[q1, w]
            elif code == OP_X:
                for w in range(W):
                    ph[1, w] ^= zs[q0, w]
            elif code == OP_Z:
                for w in range(W):
                    ph[1, w] ^= xs[q0, w]
            elif code == OP_Y:
                for w in range(W):
                    ph[1, w] ^= xs[q0, w] ^ zs[q0, w]
            elif code == OP_SWAP:
                for w in range(W):
                    x = xs[q0, w]
                    xs[q0, w] = xs[q1, w]
                    xs[q1, w] = x
                    z = zs[q0, w]
                    zs[q0, w] = zs[q1, w]
                    zs[q1, w] = z
            else:
                with gil:
                    raise ValueError(f"bad opcode {code}")


cdef Py_ssize_t _rref(uint64_t[:, ::1] work, Py_ssize_t ncols, int64_t[::1] pivots) nogil:
    """Gauss-Jordan in place; returns the rank, pivot columns in ``pivots``."""
    cdef Py_ssize_t R = work.shape[0]
    cdef Py_ssize_t W = work.shape[1]
    cdef Py_ssize_t r = 0, col, i, w, piv, cw
    cdef uint64_t bit, tmp
    for col in range(ncols):
        if r == R:
            break
        cw = col >> 6
        bit = (<uint64_t>1) << (col & 63)
        piv = -1
        for i in range(r, R):
            if work[i, cw] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for w in range(W):
                tmp = work[r, w]
                work[r, w] = work[piv, w]
                work[piv, w] = tmp
        for i in range(R):
            if i != r and (work[i, cw] & bit):
                # columns below cw are already zero in the pivot row
                for w in range(cw, W):
                    work[i, w] ^= work[r, w]
        pivots[r] = col
        r += 1
    return r


def rank_rows(rows, Py_ssize_t ncols):
    cdef cnp.ndarray work = np.array(rows, dtype=np.uint64, order="C", copy=True)
    cdef int64_t[::1] pivots = np.zeros(max(1, work.shape[0]), dtype=np.int64)
    if work.shape[0] == 0:
        return 0
    return _rref(work, ncols, pivots)


def kernel_basis_rows(rows, Py_ssize_t ncols):
    cdef cnp.ndarray work_arr = np.array(rows, dtype=np.uint64, order="C", copy=True)
    cdef Py_ssize_t R = work_arr.shape[0]
    cdef Py_ssize_t KW = max(1, (ncols + 63) // 64)
    cdef int64_t[::1] pivots = np.zeros(max(1, R), dtype=np.int64)
    cdef Py_ssize_t rank = 0
    if R > 0:
        rank = _rref(work_arr, ncols, pivots)
    cdef uint64_t[:, ::1] work = work_arr
    cdef cnp.ndarray is_pivot_arr = np.zeros(max(1, ncols), dtype=np.uint8)
    cdef unsigned char[::1] is_pivot = is_pivot_arr
    cdef Py_ssize_t i, f, k, pc
    for i in range(rank):
        is_pivot[pivots[i]] = 1
    cdef cnp.ndarray out_arr = np.zeros((ncols - rank, KW), dtype=np.uint64)
    cdef uint64_t[:, ::1] out = out_arr
    k = 0
    for f in range(ncols):
        if is_pivot[f]:
            continue
        out[k, f >> 6] |= (<uint64_t>1) << (f & 63)
        for i in range(rank):
            if (work[i, f >> 6] >> (f & 63)) & 1:
                pc = pivots[i]
                out[k, pc >> 6] |= (<uint64_t>1) << (pc & 63)
        k += 1
    return out_arr


def product_phases(uint64_t[:, ::1] a_rows, uint64_t[:, ::1] b_rows,
                   e, uint64_t[:, ::1] vecs):
    cdef Py_ssize_t L = vecs.shape[0]
    cdef Py_ssize_t VW = vecs.shape[1]
    cdef Py_ssize_t W = a_rows.shape[1]
    cdef unsigned char[::1] ev = np.ascontiguousarray(e, dtype=np.uint8)
    cdef cnp.ndarray phases_arr = np.zeros(L, dtype=np.int64)
    cdef cnp.ndarray zero_arr = np.zeros(L, dtype=bool)
    cdef int64_t[::1] phases = phases_arr
    cdef cnp.ndarray acc_a_arr = np.zeros(max(1, W), dtype=np.uint64)
    cdef cnp.ndarray acc_b_arr = np.zeros(max(1, W), dtype=np.uint64)
    cdef uint64_t[::1] acc_a = acc_a_arr
    cdef uint64_t[::1] acc_b = acc_b_arr
    cdef Py_ssize_t k, vw, w, j
    cdef uint64_t word, any_x
    cdef int64_t ph
    cdef int cnt
    for k in range(L):
        for w in range(W):
            acc_a[w] = 0
            acc_b[w] = 0
        ph = 0
        for vw in range(VW):
            word = vecs[k, vw]
            while word:
                j = vw * 64 + __builtin_ctzll(word)
                word &= word - 1
                cnt = 0
                for w in range(W):
                    cnt += popcount64(acc_b[w] & a_rows[j, w])
                    acc_a[w] ^= a_rows[j, w]
                    acc_b[w] ^= b_rows[j, w]
                ph += ev[j] + 2 * cnt
        phases[k] = ph & 3
        any_x = 0
        for w in range(W):
            any_x |= acc_a[w]
        zero_arr[k] = any_x == 0
    return phases_arr, zero_arr
