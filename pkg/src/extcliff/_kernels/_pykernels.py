"""Pure-Python kernels over integer bitsets.

Array-level entry points take and return the same packed ``uint64`` layouts as
the compiled module; the ``*_ints`` variants are used directly by callers that
already hold Python integers.
"""

from __future__ import annotations

import numpy as np

OP_H, OP_T, OP_TDG, OP_CZ, OP_X, OP_Y, OP_Z, OP_CX, OP_SWAP = range(9)


def row_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


def int_to_row(value: int, words: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(8 * words, "little"), dtype="<u8").astype(
        np.uint64
    )


def rows_to_ints(mat: np.ndarray) -> list[int]:
    return [row_to_int(r) for r in mat]


def ints_to_rows(values, words: int) -> np.ndarray:
    out = np.zeros((len(values), words), dtype=np.uint64)
    for i, v in enumerate(values):
        if v:
            out[i] = int_to_row(v, words)
    return out


def propagate_ints(xs: list[int], zs: list[int], p0: int, p1: int, ops) -> tuple[int, int]:
    """Bit-sliced conjugation of many Paulis at once.

    ``xs[q]``/``zs[q]`` hold bit ``j`` of generator ``j`` on line ``q``; the phase
    exponent of generator ``j`` is ``p0_j + 2 p1_j``.  Each op ``(code, q0, q1)``
    maps every generator ``P`` to ``G P G^dag``.  Lists are updated in place and
    the new phase planes returned.
    """
    for code, q0, q1 in ops:
        if code == OP_H:
            x = xs[q0]
            z = zs[q0]
            p1 ^= x & z
            xs[q0] = z
            zs[q0] = x
        elif code == OP_T:
            x = xs[q0]
            zs[q0] ^= x
            p1 ^= p0 & x
            p0 ^= x
        elif code == OP_TDG:
            x = xs[q0]
            zs[q0] ^= x
            p1 ^= ~p0 & x
            p0 ^= x
        elif code == OP_CZ:
            x0 = xs[q0]
            x1 = xs[q1]
            zs[q0] ^= x1
            zs[q1] ^= x0
            p1 ^= x0 & x1
        elif code == OP_CX:
            xs[q1] ^= xs[q0]
            zs[q0] ^= zs[q1]
        elif code == OP_X:
            p1 ^= zs[q0]
        elif code == OP_Z:
            p1 ^= xs[q0]
        elif code == OP_Y:
            p1 ^= xs[q0] ^ zs[q0]
        elif code == OP_SWAP:
            xs[q0], xs[q1] = xs[q1], xs[q0]
            zs[q0], zs[q1] = zs[q1], zs[q0]
        else:
            raise ValueError(f"bad opcode {code}")
    return p0, p1


def propagate(xs: np.ndarray, zs: np.ndarray, ph: np.ndarray, ops: np.ndarray) -> None:
    """In-place array version of :func:`propagate_ints`.

    ``xs``, ``zs``: ``(n, W)`` uint64; ``ph``: ``(2, W)`` uint64; ``ops``: ``(N, 3)``.
    """
    words = xs.shape[1]
    X = rows_to_ints(xs)
    Z = rows_to_ints(zs)
    p0, p1 = rows_to_ints(ph)
    p0, p1 = propagate_ints(X, Z, p0, p1, np.asarray(ops).tolist())
    xs[:] = ints_to_rows(X, words)
    zs[:] = ints_to_rows(Z, words)
    ph[:] = ints_to_rows([p0, p1], words)


def rref_ints(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; pivots chosen on the lowest column first.

    Returns the nonzero reduced rows and their pivot columns.
    """
    work = [r for r in rows if r]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(work):
            break
        bit = 1 << col
        piv = -1
        for i in range(r, len(work)):
            if work[i] & bit:
                piv = i
                break
        if piv < 0:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= prow
        pivots.append(col)
        r += 1
    return work[:r], pivots


def kernel_basis_ints(rows: list[int], ncols: int) -> list[int]:
    """Basis of ``{t : A t = 0}``, one vector per free column, in column order."""
    reduced, pivots = rref_ints(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        for row, pc in zip(reduced, pivots):
            if (row >> f) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def kernel_basis_rows(rows: np.ndarray, ncols: int) -> np.ndarray:
    words = max(1, (ncols + 63) // 64)
    return ints_to_rows(kernel_basis_ints(rows_to_ints(rows), ncols), words)


def rank_rows(rows: np.ndarray, ncols: int) -> int:
    return len(rref_ints(rows_to_ints(rows), ncols)[1])


def product_phases_ints(
    a: list[int], b: list[int], e: list[int], vecs: list[int]
) -> tuple[list[int], list[bool]]:
    """Phase exponent of the ordered product selected by each vector in ``vecs``.

    Generator ``j`` is ``i**e[j] X(a[j]) Z(b[j])``; for every ``v`` the product
    over set bits in ascending order is formed.  Returns the phases mod 4 and
    whether the X part of each product vanished.
    """
    phases = []
    x_zero = []
    for v in vecs:
        acc_a = acc_b = 0
        ph = 0
        while v:
            low = v & -v
            j = low.bit_length() - 1
            v ^= low
            ph += e[j] + 2 * (acc_b & a[j]).bit_count()
            acc_a ^= a[j]
            acc_b ^= b[j]
        phases.append(ph & 3)
        x_zero.append(acc_a == 0)
    return phases, x_zero


def product_phases(
    a_rows: np.ndarray, b_rows: np.ndarray, e: np.ndarray, vecs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    phases, x_zero = product_phases_ints(
        rows_to_ints(a_rows),
        rows_to_ints(b_rows),
        [int(v) for v in e],
        rows_to_ints(vecs),
    )
    return np.array(phases, dtype=np.int64), np.array(x_zero, dtype=bool)
