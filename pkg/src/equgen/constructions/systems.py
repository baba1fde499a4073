"""Result types shared by the constructions."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from ..partition import Partition, block_count
from ..script import Script


class ConstructionError(ValueError):
    pass


class UnsupportedSize(ConstructionError):
    pass


@dataclass(frozen=True)
class Checks:
    complementarity_ok: bool | None = None
    generation_ok: bool | None = None
    generation_mode: str | None = None


@dataclass(frozen=True)
class EligibleSystem:
    """Four partitions with a distinguished pair (u, v) that the doubling step extends.

    ``script`` derives every atom along ``cycle`` from the four partitions,
    which is what makes the system generating; it is carried along so each
    extension comes with its own derivation.
    """
    n: int
    alpha: Partition
    beta: Partition
    gamma: Partition
    delta: Partition
    u: int
    v: int
    checked: Checks = field(default_factory=Checks)
    provenance: tuple[str, ...] = ()
    script: Script | None = None
    cycle: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.u == self.v:
            raise ConstructionError("u and v must differ")
        for p in self.generators:
            if p.n != self.n:
                raise ConstructionError("all partitions must have the same size")
        if not (0 <= self.u < self.n and 0 <= self.v < self.n):
            raise ConstructionError("u, v out of range")

    @property
    def generators(self) -> list[Partition]:
        return [self.alpha, self.beta, self.gamma, self.delta]

    @property
    def names(self) -> list[str]:
        return ["alpha", "beta", "gamma", "delta"]

    def with_checks(self, **kw) -> "EligibleSystem":
        return replace(self, checked=replace(self.checked, **kw))

    def generator_set(self) -> "GeneratorSet":
        return GeneratorSet(self.n, "equ", tuple(self.generators), tuple(self.names),
                            self.provenance, self.script, self.cycle)


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    kind: str
    generators: tuple
    names: tuple[str, ...]
    provenance: tuple[str, ...] = ()
    script: Script | None = None
    cycle: tuple[int, ...] | None = None

    @property
    def block_counts(self) -> list[int] | None:
        if self.kind != "equ":
            return None
        return sorted(block_count(p) for p in self.generators)

    @property
    def consecutive(self) -> bool:
        bc = self.block_counts
        return bc is not None and all(b == bc[0] + i for i, b in enumerate(bc))

    def format(self) -> str:
        """Partition-set text (``n=`` header, one element per line) with comment metadata."""
        lines = [f"n={self.n}", f"# kind {self.kind}"]
        if self.block_counts is not None:
            lines.append("# block counts " + " ".join(map(str, self.block_counts)))
        lines += [f"# provenance {step}" for step in self.provenance]
        lines.append("# names " + " ".join(self.names))
        for g in self.generators:
            lines.append(g.format() if isinstance(g, Partition) else str(g))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "generators": {name: str(g) for name, g in zip(self.names, self.generators)},
            "block_counts": self.block_counts,
            "provenance": list(self.provenance),
        }


def check_consecutive(parts: Sequence[Partition]) -> bool:
    counts = sorted(block_count(p) for p in parts)
    return all(c == counts[0] + i for i, c in enumerate(counts))


__all__ = ["Checks", "EligibleSystem", "GeneratorSet", "ConstructionError", "UnsupportedSize",
           "check_consecutive"]
