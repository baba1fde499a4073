"""The two-row ladder construction of four generators for odd n = 2k + 1 >= 5.

Elements a_0..a_k are 0..k and b_0..b_{k-1} are k+1..2k.  alpha has the two
rows as blocks, beta the rungs {a_i, b_i}, gamma the slants {b_i, a_{i+1}},
and delta joins the two end rungs {a_0, b_0} and {a_k, b_{k-1}}.
"""

from __future__ import annotations

from ..partition import Partition, atom, join
from ..script import Join, Meet, Name, Script, ScriptBuilder
from .systems import ConstructionError, GeneratorSet

NAMES = ("alpha", "beta", "gamma", "delta")


def _k(n: int) -> int:
    if n < 5 or n % 2 == 0:
        raise ConstructionError(f"the ladder construction needs odd n >= 5, got {n}")
    return (n - 1) // 2


def a(k: int, i: int) -> int:
    return i


def b(k: int, i: int) -> int:
    return k + 1 + i


def element_names(n: int) -> list[str]:
    k = _k(n)
    return [f"a{i}" for i in range(k + 1)] + [f"b{i}" for i in range(k)]


def _join_all(n: int, pairs) -> Partition:
    out = Partition.from_labels(range(n))
    for x, y in pairs:
        out = join(out, atom(n, x, y))
    return out


def zadori_partitions(n: int) -> list[Partition]:
    k = _k(n)
    alpha = Partition.from_labels([0] * (k + 1) + [1] * k)
    beta = _join_all(n, [(a(k, i), b(k, i)) for i in range(k)])
    gamma = _join_all(n, [(b(k, i), a(k, i + 1)) for i in range(k)])
    delta = _join_all(n, [(a(k, 0), b(k, 0)), (a(k, k), b(k, k - 1))])
    return [alpha, beta, gamma, delta]


def _sequences(bld: ScriptBuilder, k: int, first: str, second: str, tag: str) -> dict[str, list[Name]]:
    """rho, rho', rho'' (or the duals with beta and gamma swapped)."""
    A, D = Name("alpha"), Name("delta")
    P, Q = Name(first), Name(second)
    s: dict[str, list[Name]] = {"": [], "'": [], "''": []}
    cur = bld.add(f"{tag}0", Meet(P, D))
    for i in range(k):
        s[""].append(cur)
        s["'"].append(bld.add(f"{tag}{i}'", Meet(Join(cur, Q), A)))
        s["''"].append(bld.add(f"{tag}{i}''", Meet(Join(s["'"][-1], P), Q)))
        if i + 1 < k:
            nxt = s["''"][-1]
            cur = bld.add(f"{tag}{i + 1}", Meet(Join(Meet(Join(nxt, P), A), nxt), P))
    return s


def _build(n: int) -> tuple[ScriptBuilder, dict, tuple[int, ...]]:
    k = _k(n)
    gens = zadori_partitions(n)
    bld = ScriptBuilder("equ", n, list(zip(NAMES, gens)), element_names(n))
    rho = _sequences(bld, k, "beta", "gamma", "rho")
    lam = _sequences(bld, k, "gamma", "beta", "lam")
    for i in range(k):
        j = k - 1 - i
        bld.add(f"a{i}b{i}", Meet(rho[""][i], lam["''"][j]), expect=True)
        bld.add(f"a{i + 1}b{i}", Meet(rho["''"][i], lam[""][j]), expect=True)
        bld.add(f"a{i}a{i + 1}", Meet(rho["'"][i], lam["'"][j]), expect=True)
    for i in range(k - 1):
        bld.add(f"b{i}b{i + 1}", Meet(Join(Name(f"a{i + 1}b{i}"), Name(f"a{i + 1}b{i + 1}")), Name("alpha")),
                expect=True)
    cycle = tuple(range(k + 1)) + tuple(b(k, i) for i in reversed(range(k)))
    return bld, {"rho": rho, "lam": lam}, cycle


def zadori_script(n: int) -> Script:
    bld, _, cycle = _build(n)
    return bld.build(cycle)


def zadori(n: int) -> GeneratorSet:
    _k(n)
    script = zadori_script(n)
    return GeneratorSet(n, "equ", tuple(zadori_partitions(n)), NAMES,
                        (f"ladder n={n}",), script, script.cycle)


def zadori_sequences(n: int) -> dict[str, list[Partition]]:
    """The right-going sequences rho, rho', rho'' and left-going lam, lam', lam''."""
    bld, seq, _ = _build(n)
    out = {}
    for side in ("rho", "lam"):
        for prime in ("", "'", "''"):
            out[side + prime] = [bld.value(ref) for ref in seq[side][prime]]
    return out


def check_identities(n: int) -> bool:
    """The meets of matching right- and left-going terms are the expected atoms."""
    k = _k(n)
    s = zadori_sequences(n)
    alpha = zadori_partitions(n)[0]
    for i in range(k):
        j = k - 1 - i
        if s["rho"][i] & s["lam''"][j] != atom(n, a(k, i), b(k, i)):
            return False
        if s["rho''"][i] & s["lam"][j] != atom(n, a(k, i + 1), b(k, i)):
            return False
        if s["rho'"][i] & s["lam'"][j] != atom(n, a(k, i), a(k, i + 1)):
            return False
    for i in range(k - 1):
        rung = atom(n, a(k, i + 1), b(k, i)) | atom(n, a(k, i + 1), b(k, i + 1))
        if rung & alpha != atom(n, b(k, i), b(k, i + 1)):
            return False
    return True
