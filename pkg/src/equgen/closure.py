"""Generated sublattices of Equ(n) and Quo(n).

The engine keeps every element found so far in one array and processes them
one at a time: processing ``t`` forms ``x v t`` and ``x ^ t`` for every stored
``x``.  Each element is processed once, so the loop stops exactly at the
generated sublattice whatever order is used.  The order only changes how soon
an early-exit target is met; finest-first alternated with discovery order
reaches atoms (and therefore everything) fastest in practice.
"""

from __future__ import annotations

import heapq
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from . import kernels
from .partition import Partition, atom, bell
from .quasiorder import Quasiorder, enumerate_quasiorders, equ_to_quo, qu

GEN, JOIN, MEET = 0, 1, 2
_OP_SYMBOL = {JOIN: "+", MEET: "*"}

DEFAULT_MAX_ELEMENTS = 8_000_000
FULL_EQU_LIMIT = 13
FULL_QUO_LIMIT = 4


class ClosureError(Exception):
    pass


class BudgetExceeded(ClosureError):
    def __init__(self, message: str, stats: dict):
        super().__init__(message)
        self.stats = stats


@dataclass(frozen=True)
class Fixpoint:
    pass


@dataclass(frozen=True)
class ReachCount:
    count: int


@dataclass(frozen=True)
class ContainsAll:
    elements: tuple


@dataclass
class ClosureCertificate:
    mode: str
    n: int
    kind: str
    generators: list
    generator_names: list[str]
    generated_count: int
    verdict: bool
    witnesses: list[tuple[Any, str]] = field(default_factory=list)
    derivation: list[tuple[str, str]] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    run: "ClosureRun | None" = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "kind": self.kind,
            "n": self.n,
            "generators": {name: str(g) for name, g in zip(self.generator_names, self.generators)},
            "generated_count": self.generated_count,
            "verdict": self.verdict,
            "witnesses": [{"element": str(e), "expr": expr} for e, expr in self.witnesses],
            "derivation": [f"{name} := {expr}" for name, expr in self.derivation],
            "stats": self.stats,
        }

    def to_json(self, timing: bool = True) -> str:
        doc = self.to_dict()
        if not timing:
            doc["stats"] = {k: v for k, v in doc["stats"].items() if k != "elapsed"}
        return json.dumps(doc, indent=2, sort_keys=True)


class ClosureRun:
    """State of one closure computation; owns its arrays."""

    def __init__(self, generators: Sequence, names: Sequence[str] | None = None,
                 max_elements: int = DEFAULT_MAX_ELEMENTS, time_limit: float | None = None,
                 workers: int = 1):
        if not generators:
            raise ClosureError("need at least one generator")
        self.kernel = kernels.kernel_for(generators[0])
        self.n = self.kernel.n
        for g in generators:
            if type(g) is not type(generators[0]) or g.n != self.n:
                raise ClosureError("generators must share a kind and a size")
        self.generators = list(generators)
        self.names = list(names) if names else [f"g{i}" for i in range(len(generators))]
        if len(self.names) != len(self.generators):
            raise ClosureError("one name per generator")
        self.max_elements = max_elements
        self.time_limit = time_limit
        self.workers = max(1, workers)
        self.count = 0
        self.iterations = 0
        self._alloc(1024)
        self.processed = np.zeros(1024, dtype=bool)
        self._heap: list[tuple[int, int]] = []
        self._fifo = 0
        self._turn = 0
        self._start = time.perf_counter()
        self._gen_index: list[int] = []
        self._no_targets = (np.full(1, -1, dtype=np.int64), np.zeros((1, self.n), dtype=self.kernel.dtype))
        rows = self.kernel.encode(self.generators)
        for i in range(len(rows)):
            self._gen_index.append(self._add_one(rows[i], i, -1, GEN))

    # storage --------------------------------------------------------------
    def _alloc(self, cap: int) -> None:
        self.store = np.zeros((cap, self.n), dtype=self.kernel.dtype)
        self.parent_l = np.full(cap, -1, dtype=np.int64)
        self.parent_r = np.full(cap, -1, dtype=np.int64)
        self.parent_op = np.zeros(cap, dtype=np.int8)
        self.table = np.full(2 * cap, -1, dtype=np.int64)

    def _reserve(self, extra: int) -> None:
        need = min(self.count + extra, self.max_elements)
        cap = self.store.shape[0]
        if need <= cap:
            return
        while cap < need:
            cap *= 2
        cap = min(cap, self.max_elements)
        old = (self.store, self.parent_l, self.parent_r, self.parent_op)
        self._alloc(cap)
        c = self.count
        self.store[:c] = old[0][:c]
        self.parent_l[:c] = old[1][:c]
        self.parent_r[:c] = old[2][:c]
        self.parent_op[:c] = old[3][:c]
        for i in range(c):
            kernels.table_add(self.table, self.store[i], i)
        grown = np.zeros(cap, dtype=bool)
        grown[:c] = self.processed[:c]
        self.processed = grown

    def stats(self) -> dict:
        return {
            "iterations": self.iterations,
            "elapsed": round(time.perf_counter() - self._start, 6),
            "peak_stored": self.count,
            "workers": self.workers,
        }

    def _budget_error(self, what: str) -> BudgetExceeded:
        return BudgetExceeded(f"{what} exceeded after {self.count} elements", self.stats())

    def find(self, elem) -> int:
        row = self.kernel.encode([elem])[0]
        return int(kernels.table_find(self.table, self.store, row))

    def element(self, idx: int):
        return self.kernel.decode(self.store[idx])

    def elements(self) -> list:
        return [self.kernel.decode(self.store[i]) for i in range(self.count)]

    def _insert(self, cand, left, right, ops, limit, targets) -> None:
        self._reserve(len(cand))
        ttable, found, remaining = targets if targets else (self._no_targets, np.zeros(0, bool), 0)
        start = self.count
        new_count, remaining = kernels.insert_candidates(
            self.store, self.count, self.table, cand, left, right, ops,
            self.parent_l, self.parent_r, self.parent_op, limit, ttable, found, remaining)
        if new_count < 0:
            raise self._budget_error(f"element budget {self.max_elements}")
        self.count = int(new_count)
        if targets:
            targets[2] = int(remaining)
        ranks = self.kernel.rank(self.store[start:self.count])
        for j, r in enumerate(ranks):
            heapq.heappush(self._heap, (-int(r), start + j))

    def _add_one(self, row, left, right, op, targets=None) -> int:
        idx = int(kernels.table_find(self.table, self.store, row))
        if idx >= 0:
            return idx
        self._insert(row.reshape(1, -1), np.array([left], dtype=np.int64), right,
                     np.array([op], dtype=np.int8), self.max_elements + 1, targets)
        return self.count - 1

    def combine(self, a: int, b: int, op: int, targets=None) -> int:
        """Store ``a op b`` (if new) and return its index."""
        out = np.empty((1, self.n), dtype=self.kernel.dtype)
        src = self.store[a:a + 1]
        t = self.store[b]
        if op == JOIN:
            self.kernel.join_rows(src, t, out)
        else:
            self.kernel.meet_rows(src, t, out)
        return self._add_one(out[0], a, b, op, targets)

    # main loop ------------------------------------------------------------
    def _next(self) -> int | None:
        self._turn += 1
        if self._turn % 2 == 0:
            while self._fifo < self.count and self.processed[self._fifo]:
                self._fifo += 1
            if self._fifo < self.count:
                return self._fifo
        while self._heap and self.processed[self._heap[0][1]]:
            heapq.heappop(self._heap)
        if self._heap:
            return heapq.heappop(self._heap)[1]
        return None

    def _products(self, t_idx: int):
        cur = self.store[:self.count].copy()
        t = cur[t_idx].copy()
        joins = np.empty_like(cur)
        meets = np.empty_like(cur)
        if self.workers == 1 or len(cur) < 4096:
            self.kernel.join_rows(cur, t, joins)
            self.kernel.meet_rows(cur, t, meets)
        else:
            bounds = np.linspace(0, len(cur), self.workers + 1).astype(int)

            def work(k):
                lo, hi = bounds[k], bounds[k + 1]
                self.kernel.join_rows(cur[lo:hi], t, joins[lo:hi])
                self.kernel.meet_rows(cur[lo:hi], t, meets[lo:hi])

            with ThreadPoolExecutor(self.workers) as pool:
                list(pool.map(work, range(self.workers)))
        idx = np.arange(len(cur), dtype=np.int64)
        cand = np.concatenate([joins, meets])
        left = np.concatenate([idx, idx])
        ops = np.concatenate([np.full(len(cur), JOIN, np.int8), np.full(len(cur), MEET, np.int8)])
        return cand, left, ops

    def run(self, target=Fixpoint(), universe_size: int | None = None) -> bool:
        """Run until the target is met or the fixpoint is reached.

        Returns True iff the target was met.
        """
        targets = None
        limit = self.max_elements + 1
        if isinstance(target, ReachCount):
            limit = target.count
            if self.count >= limit:
                return True
        elif isinstance(target, ContainsAll):
            targets = self._target_state(target.elements)
            if targets[2] == 0:
                return True
        if universe_size is not None:
            limit = min(limit, universe_size)
        while True:
            if self.count >= limit:
                break
            if self.time_limit is not None and time.perf_counter() - self._start > self.time_limit:
                raise self._budget_error(f"time limit {self.time_limit}s")
            t_idx = self._next()
            if t_idx is None:
                break
            self.processed[t_idx] = True
            self.iterations += 1
            cand, left, ops = self._products(t_idx)
            self._insert(cand, left, t_idx, ops, limit, targets)
            if self.count > self.max_elements:
                raise self._budget_error(f"element budget {self.max_elements}")
            if targets is not None and targets[2] == 0:
                return True
        if isinstance(target, ReachCount):
            return self.count >= target.count
        if isinstance(target, ContainsAll):
            return targets[2] == 0
        return True

    def _target_state(self, elements) -> list:
        rows = self.kernel.encode(list(elements))
        table = np.full(max(4, 1 << (2 * len(rows)).bit_length()), -1, dtype=np.int64)
        for i in range(len(rows)):
            if kernels.table_find(table, rows, rows[i]) < 0:
                kernels.table_add(table, rows[i], i)
        found = np.zeros(len(rows), dtype=bool)
        for i in range(len(rows)):
            if kernels.table_find(self.table, self.store, rows[i]) >= 0:
                found[kernels.table_find(table, rows, rows[i])] = True
        for i in range(len(rows)):
            if kernels.table_find(table, rows, rows[i]) != i:
                found[i] = True
        return [(table, rows), found, int((~found).sum())]

    # hints and witnesses ------------------------------------------------------
    def seed(self, steps: Sequence[tuple[str, str, str, str]]) -> dict[str, int]:
        """Evaluate flat derivation steps ``(name, op, left, right)``.

        ``op`` is ``"join"`` or ``"meet"``; operands name generators or earlier
        steps.  Every result is stored with its parents, so seeded elements
        are ordinary members of the generated sublattice.
        """
        where = {name: self._gen_index[i] for i, name in enumerate(self.names)}
        for name, op, a, b in steps:
            if a not in where or b not in where:
                raise ClosureError(f"step {name!r} uses an unknown operand")
            code = JOIN if op == "join" else MEET
            where[name] = self.combine(where[a], where[b], code)
        return where

    def derivation(self, indices: Sequence[int]) -> tuple[list[tuple[str, str]], dict[int, str]]:
        """Steps deriving the given stored elements from the generators."""
        need: set[int] = set()
        stack = list(indices)
        while stack:
            i = stack.pop()
            if i in need:
                continue
            need.add(i)
            if self.parent_op[i] != GEN:
                stack.append(int(self.parent_l[i]))
                stack.append(int(self.parent_r[i]))
        label: dict[int, str] = {}
        steps: list[tuple[str, str]] = []
        for i in sorted(need):
            if self.parent_op[i] == GEN:
                label[i] = self.names[int(self.parent_l[i])]
                continue
            label[i] = f"s{i}"
            sym = _OP_SYMBOL[int(self.parent_op[i])]
            steps.append((label[i], f"{label[int(self.parent_l[i])]} {sym} {label[int(self.parent_r[i])]}"))
        return steps, label

    def certificate(self, mode: str, verdict: bool, wanted: Sequence = ()) -> ClosureCertificate:
        indices = []
        for e in wanted:
            idx = self.find(e)
            if idx >= 0:
                indices.append((e, idx))
        steps, label = self.derivation([i for _, i in indices])
        exprs = dict(steps)
        witnesses = [(e, exprs.get(label[i], label[i])) for e, i in indices]
        return ClosureCertificate(
            mode=mode, n=self.n, kind=self.kernel.kind, generators=self.generators,
            generator_names=self.names, generated_count=self.count, verdict=verdict,
            witnesses=witnesses, derivation=steps, stats=self.stats(), run=self)


def _universe(kind: str, n: int) -> int | None:
    if kind == "equ" and n <= 11:
        return bell(n)
    if kind == "quo" and n <= FULL_QUO_LIMIT:
        return quo_count(n)
    return None


@lru_cache(maxsize=None)
def quo_count(n: int) -> int:
    return sum(1 for _ in enumerate_quasiorders(n))


def generate_sublattice(generators: Sequence, target=Fixpoint(), *, names=None, hints=(),
                        universe_size: int | None | str = "auto",
                        max_elements: int = DEFAULT_MAX_ELEMENTS,
                        time_limit: float | None = None, workers: int = 1) -> ClosureCertificate:
    """Close ``generators`` under meet and join until ``target`` is met.

    With ``universe_size`` known (``"auto"`` uses bell(n) for n <= 11 and the
    quasiorder count for n <= 4) a run stops as soon as it holds the whole
    lattice, since nothing more can be added.
    """
    run = ClosureRun(generators, names, max_elements, time_limit, workers)
    if universe_size == "auto":
        universe_size = _universe(run.kernel.kind, run.n)
    run.seed(hints)
    met = run.run(target, universe_size)
    if isinstance(target, Fixpoint):
        verdict = universe_size is not None and run.count == universe_size
        return run.certificate("full-closure", verdict)
    wanted = target.elements if isinstance(target, ContainsAll) else ()
    return run.certificate("full-closure", met, wanted)


def cycle_atoms(n: int, cycle: Sequence[int] | None = None) -> list[Partition]:
    cyc = list(cycle) if cycle is not None else list(range(n))
    return [atom(n, cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]


def directed_cycle_atoms(n: int, cycle: Sequence[int] | None = None) -> list[Quasiorder]:
    cyc = list(cycle) if cycle is not None else list(range(n))
    out = []
    for i in range(len(cyc)):
        x, y = cyc[i], cyc[(i + 1) % len(cyc)]
        out += [qu(n, x, y), qu(n, y, x)]
    return out


def verify_generates_equ(generators: Sequence[Partition], mode: str = "full", *, names=None,
                         hints=(), max_elements: int = DEFAULT_MAX_ELEMENTS,
                         time_limit: float | None = None, workers: int = 1) -> ClosureCertificate:
    """Decide whether ``generators`` generate Equ(n).

    ``full`` compares the closure size with bell(n).  ``certificate`` stops as
    soon as every atom ``(i, i+1 mod n)`` is in the closure; such a cycle of
    atoms generates Equ(n) for n >= 3.
    """
    n = generators[0].n
    run = ClosureRun(generators, names, max_elements, time_limit, workers)
    run.seed(hints)
    if mode == "full":
        if n > FULL_EQU_LIMIT:
            raise ClosureError(f"full mode is limited to n <= {FULL_EQU_LIMIT}")
        size = bell(n)
        run.run(Fixpoint(), size)
        return run.certificate("full-closure", run.count == size)
    if mode == "certificate":
        if n < 3:
            raise ClosureError("certificate mode needs n >= 3")
        wanted = cycle_atoms(n)
        met = run.run(ContainsAll(tuple(wanted)), _universe("equ", n))
        if not met and run.count == _universe("equ", n):
            met = True
        return run.certificate("cycle-atom-certificate", met, wanted)
    raise ClosureError(f"unknown mode {mode!r}")


@lru_cache(maxsize=None)
def validate_quo_cycle_rule() -> bool:
    """Check by full closure that directed cycle atoms generate Quo(n), n = 3, 4."""
    for n in (3, 4):
        cert = generate_sublattice(directed_cycle_atoms(n), universe_size=quo_count(n))
        if cert.generated_count != quo_count(n):
            return False
    return True


def verify_generates_quo(generators: Sequence[Quasiorder], mode: str = "full", *, names=None,
                         hints=(), max_elements: int = DEFAULT_MAX_ELEMENTS,
                         time_limit: float | None = None, workers: int = 1) -> ClosureCertificate:
    """Decide whether ``generators`` generate Quo(n).

    ``full`` (n <= 4) compares with the enumerated lattice.  ``cycle`` looks
    for both directed atoms along the cycle 0, 1, ..., n-1.  ``kulin`` looks
    for the (symmetric) equivalence atoms of that cycle, which give all of
    Equ(n), together with one non-symmetric element.
    """
    n = generators[0].n
    run = ClosureRun(generators, names, max_elements, time_limit, workers)
    run.seed(hints)
    if mode == "full":
        if n > FULL_QUO_LIMIT:
            raise ClosureError(f"full mode is limited to n <= {FULL_QUO_LIMIT}")
        size = quo_count(n)
        run.run(Fixpoint(), size)
        return run.certificate("full-closure", run.count == size)
    if n < 3:
        raise ClosureError(f"{mode} mode needs n >= 3")
    if mode == "cycle":
        if not validate_quo_cycle_rule():
            raise ClosureError("directed cycle rule failed its small-n validation")
        wanted = directed_cycle_atoms(n)
        met = run.run(ContainsAll(tuple(wanted)), _universe("quo", n))
        return run.certificate("cycle-atom-certificate", met, wanted)
    if mode == "kulin":
        wanted = [equ_to_quo(a) for a in cycle_atoms(n)]
        met = run.run(ContainsAll(tuple(wanted)), _universe("quo", n))
        asym = not run.kernel.is_symmetric(run.store[:run.count]).all()
        cert = run.certificate("kulin-certificate", met and asym, wanted)
        cert.stats["non_symmetric_found"] = bool(asym)
        return cert
    raise ClosureError(f"unknown mode {mode!r}")
