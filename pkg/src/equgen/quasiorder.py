"""Quasiorders (reflexive, transitive relations) on {0, ..., n-1}.

Row ``i`` of a quasiorder is a bitmask of the ``j`` with ``(i, j)`` in the
relation.  Values are always stored closed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .partition import LimitExceededError, Partition, SizeMismatchError

QUO_ENUMERATION_LIMIT = 5


class QuasiorderError(ValueError):
    pass


def transitive_closure(mat: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a boolean matrix by repeated squaring."""
    m = np.asarray(mat, dtype=bool) | np.eye(len(mat), dtype=bool)
    while True:
        sq = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if np.array_equal(sq, m):
            return m
        m = sq


def _rows_from_matrix(mat: np.ndarray) -> tuple[int, ...]:
    weights = 1 << np.arange(mat.shape[1], dtype=object)
    return tuple(int(sum(w for w, b in zip(weights, row) if b)) for row in mat)


@dataclass(frozen=True)
class Quasiorder:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or len(self.rows) != self.n:
            raise QuasiorderError("malformed quasiorder")
        for i, row in enumerate(self.rows):
            if not (row >> i) & 1:
                raise QuasiorderError(f"not reflexive at {i}")
            j = row
            while j:
                low = j & -j
                k = low.bit_length() - 1
                if self.rows[k] & ~row:
                    raise QuasiorderError(f"not transitive at ({i}, {k})")
                j ^= low

    @classmethod
    def from_matrix(cls, mat) -> "Quasiorder":
        closed = transitive_closure(np.asarray(mat, dtype=bool))
        return cls(len(closed), _rows_from_matrix(closed))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Quasiorder":
        mat = np.zeros((n, n), dtype=bool)
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise QuasiorderError(f"pair ({x}, {y}) out of range for n={n}")
            mat[x, y] = True
        return cls.from_matrix(mat)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[(r >> j) & 1 for j in range(self.n)] for r in self.rows], dtype=bool)

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool((self.rows[x] >> y) & 1)

    def pairs(self) -> set[tuple[int, int]]:
        return {(i, j) for i in range(self.n) for j in range(self.n) if (self.rows[i] >> j) & 1}

    def size(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def __le__(self, other: "Quasiorder") -> bool:
        _check_same(self, other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __ge__(self, other: "Quasiorder") -> bool:
        return other <= self

    def __and__(self, other: "Quasiorder") -> "Quasiorder":
        return meet(self, other)

    def __or__(self, other: "Quasiorder") -> "Quasiorder":
        return join(self, other)

    def column(self, y: int) -> int:
        """Bitmask of the elements x with (x, y) in the relation."""
        return sum(1 << x for x in range(self.n) if (self.rows[x] >> y) & 1)

    def classes(self) -> list[list[int]]:
        """Classes of mutually related elements, ordered by minimum."""
        seen: set[int] = set()
        out = []
        for i in range(self.n):
            if i in seen:
                continue
            cls_ = [j for j in range(self.n) if (i, j) in self and (j, i) in self]
            seen.update(cls_)
            out.append(cls_)
        return out

    def reduction(self) -> list[tuple[int, int]]:
        """A minimal list of pairs whose closure is this quasiorder.

        Each class becomes a cycle through its members in increasing order;
        between classes only the covering pairs of the quotient order are kept,
        linking the class minima.
        """
        classes = self.classes()
        out: list[tuple[int, int]] = []
        for c in classes:
            if len(c) > 1:
                out.extend(zip(c, c[1:] + c[:1]))
        reps = [c[0] for c in classes]
        above = {r: {s for s in reps if s != r and (r, s) in self} for r in reps}
        for r in reps:
            for s in sorted(above[r]):
                if not any(s in above[z] for z in above[r] if z != s):
                    out.append((r, s))
        return sorted(out)

    def format(self) -> str:
        lines = [f"n={self.n}"] + [f"{x}>{y}" for x, y in self.reduction()] + ["closed"]
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        pairs = ",".join(f"{x}>{y}" for x, y in self.reduction())
        return f"rel({pairs})"

    def __repr__(self) -> str:
        return f"Quasiorder({self.n}, {str(self)!r})"


def _check_same(p: Quasiorder, q: Quasiorder) -> None:
    if p.n != q.n:
        raise SizeMismatchError(f"size mismatch: {p.n} vs {q.n}")


def parse_quasiorder(text: str) -> Quasiorder:
    """Parse the ``n=<N>`` header plus ``x>y`` pair lines format."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise QuasiorderError("missing 'n=<N>' header")
    n = int(lines[0][2:])
    pairs = []
    for ln in lines[1:]:
        if ln == "closed":
            continue
        x, sep, y = ln.partition(">")
        if not sep:
            raise QuasiorderError(f"malformed pair line {ln!r}")
        pairs.append((int(x), int(y)))
    return Quasiorder.from_pairs(n, pairs)


def identity(n: int) -> Quasiorder:
    return Quasiorder(n, tuple(1 << i for i in range(n)))


def full(n: int) -> Quasiorder:
    return Quasiorder(n, ((1 << n) - 1,) * n)


def qu(n: int, x: int, y: int) -> Quasiorder:
    """Smallest quasiorder containing (x, y)."""
    if not (0 <= x < n and 0 <= y < n):
        raise QuasiorderError(f"pair ({x}, {y}) out of range for n={n}")
    rows = [1 << i for i in range(n)]
    rows[x] |= 1 << y
    return Quasiorder(n, tuple(rows))


def meet(p: Quasiorder, q: Quasiorder) -> Quasiorder:
    _check_same(p, q)
    return Quasiorder(p.n, tuple(a & b for a, b in zip(p.rows, q.rows)))


def join(p: Quasiorder, q: Quasiorder) -> Quasiorder:
    _check_same(p, q)
    return Quasiorder.from_matrix(p.matrix | q.matrix)


def inverse(q: Quasiorder) -> Quasiorder:
    return Quasiorder.from_matrix(q.matrix.T)


def equ_to_quo(p: Partition) -> Quasiorder:
    rows = []
    for x in range(p.n):
        rows.append(sum(1 << y for y in range(p.n) if p.rgs[y] == p.rgs[x]))
    return Quasiorder(p.n, tuple(rows))


def quo_is_equivalence(q: Quasiorder) -> bool:
    m = q.matrix
    return bool(np.array_equal(m, m.T))


def quo_to_equ(q: Quasiorder) -> Partition:
    if not quo_is_equivalence(q):
        raise QuasiorderError("quasiorder is not symmetric")
    return Partition.from_labels([q.rows[x] for x in range(q.n)])


def symmetric_part(q: Quasiorder) -> Partition:
    """The largest equivalence contained in q."""
    return Partition.from_labels([q.rows[x] & q.column(x) for x in range(q.n)])


def enumerate_quasiorders(n: int, limit: int = QUO_ENUMERATION_LIMIT) -> Iterator[Quasiorder]:
    """All quasiorders on an n-set, by filtering off-diagonal relations."""
    if n < 1:
        raise QuasiorderError("n must be positive")
    if n > limit:
        raise LimitExceededError(f"enumeration of n={n} exceeds the limit {limit}")
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in product((0, 1), repeat=len(off)):
        rows = [1 << i for i in range(n)]
        for (i, j), b in zip(off, bits):
            if b:
                rows[i] |= 1 << j
        if _is_transitive(rows):
            yield Quasiorder(n, tuple(rows))


def _is_transitive(rows: Sequence[int]) -> bool:
    for row in rows:
        j = row
        while j:
            low = j & -j
            if rows[low.bit_length() - 1] & ~row:
                return False
            j ^= low
    return True
