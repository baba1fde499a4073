"""Batch lattice kernels used by the closure engine.

Partitions are rows of ``int8`` min-representatives (``row[i]`` is the
smallest element of the block of ``i``).  Quasiorders are rows of ``uint64``
bitmasks, one per element.  Both encodings are canonical, so two rows are
equal exactly when the lattice elements are.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .partition import Partition
from .quasiorder import Quasiorder

_MIX = np.uint64(0x9E3779B97F4A7C15)


@njit(cache=True, nogil=True)
def _part_join_rows(src, t_pairs, out):
    n = src.shape[1]
    for r in range(src.shape[0]):
        for i in range(n):
            out[r, i] = src[r, i]
        for p in range(t_pairs.shape[0]):
            a = out[r, t_pairs[p, 0]]
            b = out[r, t_pairs[p, 1]]
            if a != b:
                lo = min(a, b)
                hi = max(a, b)
                for i in range(n):
                    if out[r, i] == hi:
                        out[r, i] = lo


@njit(cache=True, nogil=True)
def _part_meet_rows(src, t, out):
    n = src.shape[1]
    for r in range(src.shape[0]):
        for i in range(n):
            out[r, i] = i
            xi = src[r, i]
            ti = t[i]
            for j in range(i):
                if src[r, j] == xi and t[j] == ti:
                    out[r, i] = j
                    break


@njit(cache=True, nogil=True)
def _quo_close(rows):
    n = rows.shape[0]
    for k in range(n):
        bk = np.uint64(1) << np.uint64(k)
        rk = rows[k]
        for i in range(n):
            if rows[i] & bk:
                rows[i] |= rk


@njit(cache=True, nogil=True)
def _quo_join_rows(src, t, out):
    n = src.shape[1]
    for r in range(src.shape[0]):
        for i in range(n):
            out[r, i] = src[r, i] | t[i]
        _quo_close(out[r])


@njit(cache=True, nogil=True)
def _quo_meet_rows(src, t, out):
    n = src.shape[1]
    for r in range(src.shape[0]):
        for i in range(n):
            out[r, i] = src[r, i] & t[i]


@njit(cache=True, nogil=True)
def _row_hash(row):
    h = np.uint64(0xCBF29CE484222325)
    for i in range(row.shape[0]):
        h ^= np.uint64(row[i]) + np.uint64(1)
        h *= np.uint64(0x100000001B3)
        h ^= h >> np.uint64(29)
    h *= np.uint64(0xBF58476D1CE4E5B9)
    h ^= h >> np.uint64(31)
    return h


@njit(cache=True, nogil=True)
def _rows_equal(a, b):
    for i in range(a.shape[0]):
        if a[i] != b[i]:
            return False
    return True


@njit(cache=True, nogil=True)
def table_find(table, store, row):
    """Index of ``row`` in ``store`` via the open-addressing ``table``, or -1."""
    mask = np.uint64(table.shape[0] - 1)
    slot = _row_hash(row) & mask
    while True:
        idx = table[slot]
        if idx < 0:
            return -1
        if _rows_equal(store[idx], row):
            return idx
        slot = (slot + np.uint64(1)) & mask


@njit(cache=True, nogil=True)
def table_add(table, row, idx):
    mask = np.uint64(table.shape[0] - 1)
    slot = _row_hash(row) & mask
    while table[slot] >= 0:
        slot = (slot + np.uint64(1)) & mask
    table[slot] = idx


@njit(cache=True, nogil=True)
def insert_candidates(store, count, table, cand, cand_left, right, op,
                      parent_l, parent_r, parent_op, limit, target_table, found, remaining):
    """Append the new rows of ``cand`` to ``store`` in order.

    Stops early once ``count`` reaches ``limit`` or, when targets are given,
    once every target row has been seen.  Returns the new count and the
    remaining target count; ``-1`` as count signals that the store is full.
    """
    for c in range(cand.shape[0]):
        row = cand[c]
        if table_find(table, store, row) >= 0:
            continue
        if count >= store.shape[0]:
            return -1, remaining
        store[count] = row
        table_add(table, row, count)
        parent_l[count] = cand_left[c]
        parent_r[count] = right
        parent_op[count] = op[c]
        if remaining > 0:
            k = table_find(target_table[0], target_table[1], row)
            if k >= 0 and not found[k]:
                found[k] = True
                remaining -= 1
        count += 1
        if count >= limit or (remaining == 0 and found.shape[0] > 0):
            return count, remaining
    return count, remaining


class PartitionKernel:
    kind = "equ"
    dtype = np.int8

    def __init__(self, n: int):
        if n > 127:
            raise ValueError("partition kernel supports n <= 127")
        self.n = n

    def encode(self, elems) -> np.ndarray:
        return np.array([p.minrep() for p in elems], dtype=self.dtype).reshape(-1, self.n)

    def decode(self, row) -> Partition:
        return Partition.from_labels([int(v) for v in row])

    def join_rows(self, src, t, out):
        pairs = np.array([(i, int(t[i])) for i in range(self.n) if t[i] != i], dtype=np.int64)
        _part_join_rows(src, pairs.reshape(-1, 2), out)

    def meet_rows(self, src, t, out):
        _part_meet_rows(src, t, out)

    def rank(self, rows) -> np.ndarray:
        # finer elements rank higher
        return (rows == np.arange(self.n, dtype=self.dtype)).sum(axis=1)

    def is_symmetric(self, rows) -> np.ndarray:
        return np.ones(len(rows), dtype=bool)


class QuasiorderKernel:
    kind = "quo"
    dtype = np.uint64

    def __init__(self, n: int):
        if n > 64:
            raise ValueError("quasiorder kernel supports n <= 64")
        self.n = n

    def encode(self, elems) -> np.ndarray:
        return np.array([q.rows for q in elems], dtype=self.dtype).reshape(-1, self.n)

    def decode(self, row) -> Quasiorder:
        return Quasiorder(self.n, tuple(int(v) for v in row))

    def join_rows(self, src, t, out):
        _quo_join_rows(src, t, out)

    def meet_rows(self, src, t, out):
        _quo_meet_rows(src, t, out)

    def rank(self, rows) -> np.ndarray:
        bits = np.unpackbits(rows.view(np.uint8), axis=1)
        return self.n * self.n - bits.sum(axis=1).astype(np.int64)

    def is_symmetric(self, rows) -> np.ndarray:
        n = self.n
        mats = np.unpackbits(rows.view(np.uint8).reshape(len(rows), n, 8), axis=2, bitorder="little")
        mats = mats[:, :, :n].astype(bool)
        return (mats == mats.transpose(0, 2, 1)).all(axis=(1, 2))


def kernel_for(elem) -> PartitionKernel | QuasiorderKernel:
    if isinstance(elem, Partition):
        return PartitionKernel(elem.n)
    if isinstance(elem, Quasiorder):
        return QuasiorderKernel(elem.n)
    raise TypeError(f"not a lattice element: {elem!r}")
