"""Bit-packed matrices over GF(2).

Rows are stored as ``uint64`` words, least significant bit first, so column
``j`` of row ``i`` is bit ``j % 64`` of ``data[i, j // 64]``.  Unused tail bits of
the last word are always zero.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ._kernels import get_backend
from .errors import DimensionError
from .pauli import BitString

WORD_BITS = 64


def words_for(nbits: int) -> int:
    return max(1, (nbits + WORD_BITS - 1) // WORD_BITS)


def pack_bits(dense: np.ndarray) -> np.ndarray:
    """``(R, C)`` array of 0/1 -> ``(R, words_for(C))`` uint64."""
    dense = np.asarray(dense, dtype=np.uint8)
    if dense.ndim != 2:
        raise DimensionError("pack_bits expects a 2-D array")
    rows, cols = dense.shape
    nbytes = 8 * words_for(cols)
    packed = np.packbits(dense & 1, axis=1, bitorder="little")
    buf = np.zeros((rows, nbytes), dtype=np.uint8)
    buf[:, : packed.shape[1]] = packed
    return buf.view("<u8").astype(np.uint64)


def unpack_bits(packed: np.ndarray, cols: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`."""
    packed = np.ascontiguousarray(packed, dtype="<u8")
    as_bytes = packed.view(np.uint8).reshape(packed.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


def transpose_packed(packed: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return pack_bits(unpack_bits(packed, cols)[:rows].T)


class BitMatrix:
    """Dense ``rows x cols`` matrix over GF(2), row-major and word-packed."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        words = words_for(cols)
        if data is None:
            data = np.zeros((rows, words), dtype=np.uint64)
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.shape != (rows, words):
            raise DimensionError(f"data shape {data.shape} != {(rows, words)}")
        tail = cols % WORD_BITS
        if rows and tail and np.any(data[:, -1] >> np.uint64(tail)):
            raise DimensionError("nonzero bits beyond the last column")
        if rows and cols == 0 and np.any(data):
            raise DimensionError("nonzero bits in a zero-column matrix")
        data.setflags(write=False)
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim != 2:
            raise DimensionError("expected a 2-D array")
        return cls(dense.shape[0], dense.shape[1], pack_bits(dense))

    @classmethod
    def from_rows(cls, rows: Sequence[BitString | int], cols: int | None = None) -> BitMatrix:
        if cols is None:
            if not rows or not isinstance(rows[0], BitString):
                raise DimensionError("cols is required for integer rows")
            cols = rows[0].n
        values = []
        for r in rows:
            if isinstance(r, BitString):
                if r.n != cols:
                    raise DimensionError(f"row of length {r.n} in a {cols}-column matrix")
                r = r.value
            if r < 0 or r >> cols:
                raise DimensionError(f"row {r:#x} wider than {cols} columns")
            values.append(r)
        data = np.zeros((len(values), words_for(cols)), dtype=np.uint64)
        for i, v in enumerate(values):
            for w in range(data.shape[1]):
                data[i, w] = (v >> (WORD_BITS * w)) & 0xFFFFFFFFFFFFFFFF
        return cls(len(values), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[BitString], rows: int) -> BitMatrix:
        """Matrix whose ``j``-th column is ``columns[j]``."""
        return cls.from_rows(columns, rows).transpose()

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator, density: float = 0.5) -> BitMatrix:
        return cls.from_dense((rng.random((rows, cols)) < density).astype(np.uint8))

    def to_dense(self) -> np.ndarray:
        return unpack_bits(self.data, self.cols).astype(np.uint8)

    def row(self, i: int) -> BitString:
        return BitString(self.cols, _row_int(self.data[i]))

    def transpose(self) -> BitMatrix:
        return BitMatrix(self.cols, self.rows, transpose_packed(self.data, self.rows, self.cols))

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return int(self.data[i, j // WORD_BITS] >> np.uint64(j % WORD_BITS)) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _row_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


def kernel_basis(A: BitMatrix, backend: str | None = None) -> list[BitString]:
    """Basis of the null space ``{t : A t = 0}``.

    One vector per non-pivot column, in increasing column order, with pivots
    chosen lowest column first; the output is identical across runs and
    backends.
    """
    vecs = get_backend(backend).kernel_basis_rows(A.data, A.cols)
    return [BitString(A.cols, _row_int(v)) for v in vecs]


def rank(A: BitMatrix, backend: str | None = None) -> int:
    return int(get_backend(backend).rank_rows(A.data, A.cols))


def matvec(A: BitMatrix, t: BitString) -> BitString:
    """``A t`` over GF(2)."""
    if t.n != A.cols:
        raise DimensionError(f"vector of length {t.n} for a {A.cols}-column matrix")
    if A.rows == 0:
        return BitString(0, 0)
    tv = BitMatrix.from_rows([t.value], A.cols).data[0]
    parities = np.bitwise_count(A.data & tv).sum(axis=1) & 1
    value = 0
    for i in np.flatnonzero(parities):
        value |= 1 << int(i)
    return BitString(A.rows, value)
