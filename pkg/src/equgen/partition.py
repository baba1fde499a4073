"""Partitions of {0, ..., n-1} as elements of the equivalence lattice.

A partition is stored as its restricted growth string (rgs): ``rgs[i]`` is the
label of the block holding ``i``, blocks are labelled in order of their
smallest element.  This encoding is unique, so equality and hashing work on
the encoding directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from scipy.cluster.hierarchy import DisjointSet

ENUMERATION_LIMIT = 13


class PartitionError(ValueError):
    pass


class PartitionParseError(PartitionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SizeMismatchError(PartitionError):
    pass


class LimitExceededError(PartitionError):
    pass


def _canonical(labels: Sequence) -> tuple[int, ...]:
    seen: dict = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    n: int
    rgs: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise PartitionError("a partition needs n >= 1")
        if len(self.rgs) != self.n:
            raise PartitionError(f"rgs has length {len(self.rgs)}, expected {self.n}")
        top = -1
        for lab in self.rgs:
            if lab < 0 or lab > top + 1:
                raise PartitionError(f"not a restricted growth string: {self.rgs}")
            top = max(top, lab)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Build from arbitrary hashable block labels, one per element."""
        return cls(len(labels), _canonical(labels))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        labels = [None] * n
        for b, block in enumerate(blocks):
            for x in block:
                if not 0 <= x < n:
                    raise PartitionError(f"element {x} out of range for n={n}")
                if labels[x] is not None:
                    raise PartitionError(f"element {x} occurs twice")
                labels[x] = b
        missing = [x for x in range(n) if labels[x] is None]
        if missing:
            raise PartitionError(f"elements missing: {missing}")
        return cls.from_labels(labels)

    @property
    def block_count(self) -> int:
        return 1 + max(self.rgs)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for x, lab in enumerate(self.rgs):
            out[lab].append(x)
        return out

    def block_of(self, x: int) -> list[int]:
        lab = self.rgs[x]
        return [y for y in range(self.n) if self.rgs[y] == lab]

    def collapses(self, x: int, y: int) -> bool:
        return self.rgs[x] == self.rgs[y]

    def minrep(self) -> tuple[int, ...]:
        """Smallest element of the block of each element."""
        first: dict[int, int] = {}
        for x, lab in enumerate(self.rgs):
            first.setdefault(lab, x)
        return tuple(first[lab] for lab in self.rgs)

    def pairs(self) -> set[tuple[int, int]]:
        """The partition as an equivalence relation."""
        return {(x, y) for blk in self.blocks() for x in blk for y in blk}

    def __le__(self, other: "Partition") -> bool:  # type: ignore[override]
        _check_same(self, other)
        return all(other.rgs[x] == other.rgs[blk[0]] for blk in self.blocks() for x in blk)

    def __lt__(self, other: "Partition") -> bool:  # type: ignore[override]
        return self != other and self <= other

    def __ge__(self, other: "Partition") -> bool:  # type: ignore[override]
        return other <= self

    def __gt__(self, other: "Partition") -> bool:  # type: ignore[override]
        return other < self

    def __and__(self, other: "Partition") -> "Partition":
        return meet(self, other)

    def __or__(self, other: "Partition") -> "Partition":
        return join(self, other)

    def format(self) -> str:
        return "|".join(",".join(map(str, blk)) for blk in self.blocks())

    def format_eq(self) -> str:
        """Compact ``eq(12;3;45;6)`` with 1-based digits; only for n <= 9."""
        if self.n > 9:
            raise PartitionError("eq(...) notation needs n <= 9")
        return "eq(" + ";".join("".join(str(x + 1) for x in blk) for blk in self.blocks()) + ")"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Partition({self.n}, {self.format()!r})"


def _check_same(p: Partition, q: Partition) -> None:
    if p.n != q.n:
        raise SizeMismatchError(f"size mismatch: {p.n} vs {q.n}")


_EQ_RE = re.compile(r"\s*eq\s*\(")


def parse_partition(text: str, n: int) -> Partition:
    """Parse ``eq(b1;b2;...)`` (1-based digits) or ``B1|B2|...`` (0-based)."""
    if n < 1:
        raise PartitionError("n must be positive")
    m = _EQ_RE.match(text)
    if m:
        return _parse_eq(text, n, m.end())
    return _parse_general(text, n)


def _collect(n: int, blocks: list[list[tuple[int, int]]]) -> Partition:
    labels: list[int | None] = [None] * n
    last = 0
    for b, block in enumerate(blocks):
        for x, pos in block:
            last = pos
            if not 0 <= x < n:
                raise PartitionParseError(f"element {x} out of range for n={n}", pos)
            if labels[x] is not None:
                raise PartitionParseError(f"duplicate element {x}", pos)
            labels[x] = b
    missing = [x for x in range(n) if labels[x] is None]
    if missing:
        raise PartitionParseError(f"missing elements {missing}", last)
    return Partition.from_labels(labels)


def _parse_eq(text: str, n: int, start: int) -> Partition:
    if n > 9:
        raise PartitionParseError("eq(...) notation is limited to n <= 9", 0)
    end = text.find(")", start)
    if end < 0:
        raise PartitionParseError("missing ')'", len(text))
    if text[end + 1:].strip():
        raise PartitionParseError("trailing characters", end + 1)
    blocks: list[list[tuple[int, int]]] = [[]]
    for pos in range(start, end):
        ch = text[pos]
        if ch == ";":
            if not blocks[-1]:
                raise PartitionParseError("empty block", pos)
            blocks.append([])
        elif ch.isdigit():
            if ch == "0":
                raise PartitionParseError("eq(...) elements are 1-based", pos)
            blocks[-1].append((int(ch) - 1, pos))
        elif not ch.isspace():
            raise PartitionParseError(f"unexpected character {ch!r}", pos)
    if not blocks[-1]:
        raise PartitionParseError("empty block", end)
    return _collect(n, blocks)


def _parse_general(text: str, n: int) -> Partition:
    blocks: list[list[tuple[int, int]]] = []
    pos = 0
    for chunk in text.split("|"):
        block = []
        offset = 0
        for item in chunk.split(","):
            stripped = item.strip()
            at = pos + offset + (len(item) - len(item.lstrip()))
            if not stripped:
                raise PartitionParseError("empty element", at)
            if not stripped.isdigit():
                raise PartitionParseError(f"malformed element {stripped!r}", at)
            block.append((int(stripped), at))
            offset += len(item) + 1
        blocks.append(block)
        pos += len(chunk) + 1
    return _collect(n, blocks)


def meet(p: Partition, q: Partition) -> Partition:
    _check_same(p, q)
    return Partition.from_labels(list(zip(p.rgs, q.rgs)))


def join(p: Partition, q: Partition) -> Partition:
    _check_same(p, q)
    ds = DisjointSet(range(p.n))
    for part in (p, q):
        first: dict[int, int] = {}
        for x, lab in enumerate(part.rgs):
            ds.merge(first.setdefault(lab, x), x)
    return Partition.from_labels([ds[x] for x in range(p.n)])


def bottom(n: int) -> Partition:
    if n < 1:
        raise PartitionError("n must be positive")
    return Partition(n, tuple(range(n)))


def top(n: int) -> Partition:
    if n < 1:
        raise PartitionError("n must be positive")
    return Partition(n, (0,) * n)


def atom(n: int, x: int, y: int) -> Partition:
    """The partition whose only non-singleton block is {x, y}."""
    if x == y:
        raise PartitionError("an atom needs two distinct elements")
    if not (0 <= x < n and 0 <= y < n):
        raise PartitionError(f"elements ({x}, {y}) out of range for n={n}")
    labels = list(range(n))
    labels[max(x, y)] = min(x, y)
    return Partition.from_labels(labels)


def block_count(p: Partition) -> int:
    return p.block_count


def is_complementary(p: Partition, q: Partition) -> bool:
    _check_same(p, q)
    return join(p, q) == top(p.n) and meet(p, q) == bottom(p.n)


def embed(p: Partition, n: int) -> Partition:
    """Extend p to {0, ..., n-1} by adding singleton blocks."""
    if n < p.n:
        raise PartitionError(f"cannot embed a partition of size {p.n} into {n}")
    base = p.block_count
    return Partition(n, p.rgs + tuple(range(base, base + n - p.n)))


def _rgs_iter(n: int) -> Iterator[list[int]]:
    # lexicographic restricted growth strings; mx[i] = max(rgs[0..i])
    rgs = [0] * n
    mx = [0] * n
    while True:
        yield rgs
        i = n - 1
        while i > 0 and rgs[i] > mx[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        mx[i] = max(mx[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            mx[j] = mx[i]


def enumerate_partitions(n: int, limit: int = ENUMERATION_LIMIT) -> Iterator[Partition]:
    """All partitions of {0, ..., n-1} in lexicographic rgs order."""
    if n < 1:
        raise PartitionError("n must be positive")
    if n > limit:
        raise LimitExceededError(f"enumeration of n={n} exceeds the limit {limit}")
    for rgs in _rgs_iter(n):
        yield Partition(n, tuple(rgs))


@lru_cache(maxsize=None)
def bell(n: int, limit: int = ENUMERATION_LIMIT) -> int:
    """Number of partitions of an n-set, counted by enumerating rgs."""
    if n < 1:
        raise PartitionError("n must be positive")
    if n > limit:
        raise LimitExceededError(f"enumeration of n={n} exceeds the limit {limit}")
    return sum(1 for _ in _rgs_iter(n))


def read_partition_set(text: str) -> list[Partition]:
    """Parse a newline-delimited partition file with an ``n=<N>`` header."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise PartitionParseError("missing 'n=<N>' header", 0)
    n = int(lines[0][2:])
    return [parse_partition(ln, n) for ln in lines[1:]]


def write_partition_set(parts: Sequence[Partition]) -> str:
    if not parts:
        raise PartitionError("empty partition set")
    n = parts[0].n
    for p in parts:
        if p.n != n:
            raise SizeMismatchError("mixed sizes in a partition set")
    return "\n".join([f"n={n}"] + [p.format() for p in parts]) + "\n"
