"""Exhaustive search for four generators with consecutive block counts, n <= 7.

Tuples are taken one partition per block count c, c+1, c+2, c+3 and reduced
modulo relabelling of the base set: the first coordinate runs over orbit
representatives of the symmetric group, the second over orbit
representatives of the stabilizer of the first, and so on.  Taking the least
index in each orbit (indices follow the lexicographic order of restricted
growth strings) makes every representative the lexicographically least image
of its tuple.

Each representative with join = top and meet = bottom is closed inside
precomputed meet/join tables of the whole partition lattice.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..closure import BudgetExceeded
from ..partition import Partition, enumerate_partitions
from .systems import ConstructionError, GeneratorSet

SEARCH_LIMIT = 7


@njit(cache=True)
def _canonical_rows(labels):
    m, n = labels.shape
    out = np.empty((m, n), dtype=np.int64)
    for r in range(m):
        for i in range(n):
            j = 0
            while labels[r, j] != labels[r, i]:
                j += 1
            out[r, i] = j
    return out


@njit(cache=True)
def _join_row(a, b, n, out):
    lab = a.copy()
    for i in range(n):
        j = b[i]
        if j != i:
            x, y = lab[i], lab[j]
            if x != y:
                lo, hi = min(x, y), max(x, y)
                for k in range(n):
                    if lab[k] == hi:
                        lab[k] = lo
    for i in range(n):
        out[i] = lab[i]


@njit(cache=True)
def _meet_row(a, b, n, out):
    for i in range(n):
        j = 0
        while not (a[j] == a[i] and b[j] == b[i]):
            j += 1
        out[i] = j


@njit(cache=True)
def _tables(reps, n):
    m = reps.shape[0]
    joins = np.empty((m, m, n), dtype=np.int64)
    meets = np.empty((m, m, n), dtype=np.int64)
    for x in range(m):
        for y in range(m):
            _join_row(reps[x], reps[y], n, joins[x, y])
            _meet_row(reps[x], reps[y], n, meets[x, y])
    return joins, meets


@njit(cache=True)
def _closure_size(gens, join_t, meet_t):
    size = join_t.shape[0]
    inset = np.zeros(size, dtype=np.bool_)
    elems = np.empty(size, dtype=np.int64)
    cnt = 0
    for g in gens:
        if not inset[g]:
            inset[g] = True
            elems[cnt] = g
            cnt += 1
    i = 0
    while i < cnt:
        t = elems[i]
        for j in range(i + 1):
            x = elems[j]
            r = join_t[x, t]
            if not inset[r]:
                inset[r] = True
                elems[cnt] = r
                cnt += 1
            r = meet_t[x, t]
            if not inset[r]:
                inset[r] = True
                elems[cnt] = r
                cnt += 1
        if cnt == size:
            return cnt
        i += 1
    return cnt


class LatticeTables:
    """All partitions of an n-set with their meet/join tables and the S_n action."""

    def __init__(self, n: int):
        self.n = n
        self.parts = list(enumerate_partitions(n))
        reps = np.array([p.minrep() for p in self.parts], dtype=np.int64).reshape(len(self.parts), n)
        self.powers = n ** np.arange(n, dtype=np.int64)
        keys = reps @ self.powers
        self.order = np.argsort(keys)
        self.sorted_keys = keys[self.order]
        joins, meets = _tables(reps, n)
        self.join = self._index(joins.reshape(-1, n)).reshape(len(reps), len(reps))
        self.meet = self._index(meets.reshape(-1, n)).reshape(len(reps), len(reps))
        self.counts = np.array([p.block_count for p in self.parts])
        self.top = self.counts.argmin()
        self.bottom = self.counts.argmax()
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        labels = reps[:, perms]  # (parts, perms, n): labels of the relabelled partition
        act = self._index(_canonical_rows(labels.reshape(-1, n))).reshape(len(reps), len(perms))
        self.action = act.T.copy()  # (perms, parts)

    def _index(self, rows: np.ndarray) -> np.ndarray:
        return self.order[np.searchsorted(self.sorted_keys, rows @ self.powers)]

    def level(self, count: int) -> np.ndarray:
        return np.flatnonzero(self.counts == count)


def _orbit_reps(action: np.ndarray, group: np.ndarray, level: np.ndarray):
    seen: set[int] = set()
    for q in level:
        q = int(q)
        if q in seen:
            continue
        seen.update(int(x) for x in np.unique(action[group, q]))
        yield q


@dataclass
class SearchReport:
    n: int
    found: list[GeneratorSet] = field(default_factory=list)
    exhaustive: bool = True
    representatives: int = 0
    pruned: int = 0
    closures: int = 0
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "exhaustive": self.exhaustive,
            "found": [[p.format() for p in gs.generators] for gs in self.found],
            "representatives": self.representatives,
            "pruned": self.pruned,
            "closures": self.closures,
            "elapsed_s": round(self.elapsed, 3),
        }


def search_consecutive(n: int, time_limit: float | None = None) -> SearchReport:
    """All generating 4-tuples with consecutive block counts, up to relabelling.

    Raises BudgetExceeded (carrying the partial, non-exhaustive report in its
    ``stats``) when ``time_limit`` runs out.
    """
    if not 3 <= n <= SEARCH_LIMIT:
        raise ConstructionError(f"search is limited to 3 <= n <= {SEARCH_LIMIT}")
    start = time.perf_counter()
    lt = LatticeTables(n)
    report = SearchReport(n)
    everything = np.arange(lt.action.shape[0])
    size = len(lt.parts)
    for c in range(1, n - 2):
        levels = [lt.level(c + i) for i in range(4)]

        def extend(depth, group, chosen):
            for q in _orbit_reps(lt.action, group, levels[depth]):
                if time_limit is not None and time.perf_counter() - start > time_limit:
                    report.exhaustive = False
                    report.elapsed = time.perf_counter() - start
                    raise BudgetExceeded(f"time limit {time_limit}s", report.to_dict())
                picked = chosen + [q]
                if depth == 3:
                    _check(picked)
                else:
                    sub = group[lt.action[group, q] == q]
                    extend(depth + 1, sub, picked)

        def _check(picked):
            report.representatives += 1
            j = m = picked[0]
            for x in picked[1:]:
                j = lt.join[j, x]
                m = lt.meet[m, x]
            if j != lt.top or m != lt.bottom:
                report.pruned += 1
                return
            report.closures += 1
            if _closure_size(np.array(picked, dtype=np.int64), lt.join, lt.meet) == size:
                gens = tuple(lt.parts[i] for i in picked)
                report.found.append(GeneratorSet(n, "equ", gens, ("g1", "g2", "g3", "g4"),
                                                 (f"search n={n}",)))

        extend(0, everything, [])
    report.elapsed = time.perf_counter() - start
    return report


def canonical_form(parts: list[Partition]) -> tuple[int, ...]:
    """Lexicographically least relabelling of a tuple sorted by block count."""
    n = parts[0].n
    lt = LatticeTables(n)
    index = {p: i for i, p in enumerate(lt.parts)}
    ordered = sorted(parts, key=lambda p: p.block_count)
    images = lt.action[:, [index[p] for p in ordered]]
    best = min(map(tuple, images.tolist()))
    return best


def index_of_tuple(report: SearchReport) -> set[tuple[int, ...]]:
    lt = LatticeTables(report.n)
    index = {p: i for i, p in enumerate(lt.parts)}
    return {tuple(index[p] for p in gs.generators) for gs in report.found}
