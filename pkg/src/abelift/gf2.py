"""Dense linear algebra over F2 on bit-packed rows.

Matrices live in two shapes: plain uint8 arrays with one entry per cell
(the interchange format) and packed uint64 arrays with 64 columns per
word (the compute format).  Elimination, rank, nullspace and row-space
tests all run on the packed form with whole-row XORs.
"""
from __future__ import annotations

import numpy as np


def as_f2(mat) -> np.ndarray:
    """Coerce to a 2-d uint8 array of 0/1 entries."""
    a = np.asarray(mat)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError("expected a 2-d binary matrix")
    a = (a.astype(np.int64) % 2).astype(np.uint8)
    return a


def pack_rows(mat) -> np.ndarray:
    """Pack each row of a binary matrix into uint64 words, 64 columns per word."""
    a = as_f2(mat)
    n_rows, n_cols = a.shape
    n_words = max(1, -(-n_cols // 64))
    padded = np.zeros((n_rows, n_words * 64), dtype=np.uint8)
    padded[:, :n_cols] = a
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).copy()


def unpack_rows(packed: np.ndarray, n_cols: int) -> np.ndarray:
    bits = np.unpackbits(packed.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :n_cols].astype(np.uint8)


def popcount_rows(packed: np.ndarray) -> np.ndarray:
    """Hamming weight of each packed row."""
    return np.bitwise_count(packed).sum(axis=1).astype(np.int64)


def _eliminate(packed: np.ndarray, n_cols: int):
    """In-place forward+backward elimination. Returns pivot column list."""
    n_rows = packed.shape[0]
    pivots = []
    r = 0
    for c in range(n_cols):
        word, bit = divmod(c, 64)
        mask = np.uint64(1) << np.uint64(bit)
        col = (packed[r:, word] & mask) != 0
        hits = np.nonzero(col)[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            packed[[r, p]] = packed[[p, r]]
        rows_with_bit = (packed[:, word] & mask) != 0
        rows_with_bit[r] = False
        packed[rows_with_bit] ^= packed[r]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return pivots


def rref(mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form. Returns (full-size uint8 matrix, pivot columns)."""
    a = as_f2(mat)
    packed = pack_rows(a)
    pivots = _eliminate(packed, a.shape[1])
    return unpack_rows(packed, a.shape[1]), pivots


def rank(mat) -> int:
    a = as_f2(mat)
    if a.size == 0:
        return 0
    packed = pack_rows(a)
    return len(_eliminate(packed, a.shape[1]))


def nullspace(mat) -> np.ndarray:
    """Basis of the right kernel, one vector per row (may have zero rows)."""
    a = as_f2(mat)
    n_cols = a.shape[1]
    red, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            if red[r, fc]:
                basis[i, pc] = 1
    return basis


def matmul(a, b) -> np.ndarray:
    """Matrix product over F2."""
    aa = as_f2(a).astype(np.int64)
    bb = as_f2(b).astype(np.int64)
    return ((aa @ bb) % 2).astype(np.uint8)


def in_row_space(mat, vec) -> bool:
    """Is *vec* an F2 combination of the rows of *mat*?"""
    a = as_f2(mat)
    v = as_f2(vec)
    if a.shape[1] != v.shape[1]:
        raise ValueError("length mismatch")
    return rank(a) == rank(np.vstack([a, v]))


def row_space_equal(a, b) -> bool:
    aa, bb = as_f2(a), as_f2(b)
    if aa.shape[1] != bb.shape[1]:
        return False
    ra, rb = rank(aa), rank(bb)
    if ra != rb:
        return False
    return rank(np.vstack([aa, bb])) == ra


def nonzero_rref_rows(mat) -> np.ndarray:
    """Canonical full-rank generating set for the row space of *mat*."""
    red, pivots = rref(mat)
    return red[: len(pivots)].copy()
