"""Eligible systems, the two-point extension step and the consecutive-count constructor."""

from __future__ import annotations

from functools import lru_cache

from ..closure import verify_generates_equ
from ..partition import Partition, atom, embed, is_complementary, join, meet
from ..script import (Join, Literal, Meet, Name, Script, ScriptBuilder, Step,
                      cycle_hint_steps, load_fixture)
from .systems import Checks, ConstructionError, EligibleSystem, GeneratorSet, UnsupportedSize

GENERATOR_NAMES = ("alpha", "beta", "gamma", "delta")


def _from_fixture(name: str, u: int, v: int, label: str) -> EligibleSystem:
    script = load_fixture(name)
    gens = [expr.value for _, expr in script.bindings]
    return EligibleSystem(script.n, *gens, u=u, v=v, provenance=(label,),
                          script=script, cycle=script.cycle)


@lru_cache(maxsize=None)
def base6() -> EligibleSystem:
    """The six-element system with block counts 2, 3, 4, 5 and (u, v) = (3, 5)."""
    return _from_fixture("six.script", 3, 5, "base6")


@lru_cache(maxsize=None)
def base9() -> EligibleSystem:
    """The nine-element system with block counts 3, 4, 5, 6 and (u, v) = (0, 3)."""
    return _from_fixture("nine.script", 0, 3, "base9")


def complementarity(es: EligibleSystem) -> dict[str, bool]:
    uv = atom(es.n, es.u, es.v)
    return {
        "alpha,delta": is_complementary(es.alpha, es.delta),
        "beta,gamma+uv": is_complementary(es.beta, join(es.gamma, uv)),
        "beta+uv,gamma": is_complementary(join(es.beta, uv), es.gamma),
    }


def blocks_disjoint(es: EligibleSystem) -> bool:
    """The beta-block of u and the gamma-block of v share no element."""
    return not (set(es.beta.block_of(es.u)) & set(es.gamma.block_of(es.v)))


def _rename(expr, mapping: dict[str, str]):
    if isinstance(expr, Name):
        return Name(mapping.get(expr.id, expr.id))
    if isinstance(expr, (Meet, Join)):
        return type(expr)(_rename(expr.left, mapping), _rename(expr.right, mapping))
    if hasattr(expr, "arg"):
        return type(expr)(_rename(expr.arg, mapping))
    return expr


def _embed_expr(expr, n: int):
    if isinstance(expr, Literal):
        return Literal(embed(expr.value, n))
    return expr


def extend_step(es: EligibleSystem) -> EligibleSystem:
    """Add two new elements u' = n, v' = n + 1; every block count grows by one.

    The returned system carries a derivation of its own cycle atoms: the old
    derivation is replayed inside the copy of the old set cut out by
    kappa = (beta' + gamma') * (alpha' + delta' * (beta' + gamma')), and the
    atoms touching u' and v' are then derived explicitly.
    """
    if es.checked.complementarity_ok is False:
        raise ConstructionError("input system failed the complementarity check")
    n, u, v = es.n, es.u, es.v
    m = n + 2
    u2, v2 = n, n + 1
    alpha = join(embed(es.alpha, m), atom(m, u, u2))
    beta = join(embed(es.beta, m), atom(m, u, v2))
    gamma = join(embed(es.gamma, m), atom(m, v, v2))
    delta = join(embed(es.delta, m), atom(m, u2, v2))
    out = EligibleSystem(m, alpha, beta, gamma, delta, u=u2, v=v2,
                         checked=Checks(complementarity_ok=es.checked.complementarity_ok),
                         provenance=es.provenance + (f"extend {n}->{m}",))
    if es.script is None or es.cycle is None:
        return out
    script, cycle = _extension_script(es, out)
    return EligibleSystem(m, alpha, beta, gamma, delta, u=u2, v=v2, checked=out.checked,
                          provenance=out.provenance, script=script, cycle=cycle)


def _extension_script(es: EligibleSystem, new: EligibleSystem) -> tuple[Script, tuple[int, ...]]:
    n, m, u, v = es.n, new.n, es.u, es.v
    u2, v2 = new.u, new.v
    tag = f"n{m}."
    b = ScriptBuilder("equ", m, list(zip(GENERATOR_NAMES, new.generators)))
    A, B, C, D = (Name(g) for g in GENERATOR_NAMES)
    bc = b.add(tag + "bc", Join(B, C))
    kappa = b.add(tag + "kappa", Meet(bc, Join(A, Meet(D, bc))), expect=True)
    mapping = {}
    for g in GENERATOR_NAMES:
        mapping[g] = tag + g
        b.add(tag + g, Meet(kappa, Name(g)))
    for st in es.script.steps:
        b.add(st.name, _rename(st.expr, mapping))
        if st.expect is not None:
            b.steps[-1] = Step(st.name, b.steps[-1].expr, _embed_expr(st.expect, m))
    old = list(es.cycle)
    r = tag + "r"
    uv = b.route(old, u, v, r)
    vv2 = b.add(tag + "vv'", Meet(Join(uv, B), C), expect=True)
    v2u = b.add(tag + "v'u", Meet(Join(uv, vv2), B), expect=True)
    v2u2 = b.add(tag + "v'u'", Meet(Join(v2u, A), D), expect=True)
    b.add(tag + "u'u", Meet(A, Join(v2u2, v2u)), expect=True)
    pos = old.index(u)
    y = old[(pos + 1) % len(old)]
    if y != v:
        uy = b.need(atom(m, u, y))
        vy = b.route(old, v, y, r)
        b.add(tag + "v'y", Meet(Join(v2u, uy), Join(vv2, vy)), expect=True)
    cycle = tuple(old[:pos + 1] + [u2, v2] + old[pos + 1:])
    return b.build(cycle), cycle


def eligible_system(n: int) -> EligibleSystem:
    """The eligible system on n elements, built as in :func:`construct_consecutive`."""
    if n == 6 or (n >= 8 and n % 2 == 0):
        es = base6()
    elif n >= 9:
        es = base9()
    else:
        raise UnsupportedSize(
            f"n={n} is not supported: the construction covers n = 6 and n >= 8"
            + (" (for n = 7 use the exhaustive search)" if n == 7 else ""))
    es = es.with_checks(complementarity_ok=all(complementarity(es).values()))
    while es.n < n:
        es = extend_step(es)
    return es


def construct_consecutive(n: int) -> GeneratorSet:
    """Four generators of the partition lattice on n elements with consecutive block counts.

    Supported for n = 6 and every n >= 8: even sizes grow from the six-element
    system, odd ones from the nine-element system, two elements at a time.
    """
    return eligible_system(n).generator_set()


def cycle_hints(gs) -> list[tuple[str, str, str, str]]:
    """Engine hints that derive the atoms (i, i+1 mod n) from the carried script."""
    if gs.script is None:
        return []
    return cycle_hint_steps(gs.script, gs.cycle, range(gs.n))


def check_eligible(es: EligibleSystem, mode: str = "complementarity", **engine) -> EligibleSystem:
    """Set the complementarity flag, and with mode full/certificate the generation flag."""
    comp = all(complementarity(es).values())
    es = es.with_checks(complementarity_ok=comp)
    if mode == "complementarity":
        return es
    if mode not in ("full", "certificate"):
        raise ConstructionError(f"unknown mode {mode!r}")
    hints = cycle_hints(es) if mode == "certificate" else ()
    cert = verify_generates_equ(es.generators, mode, names=es.names, hints=hints, **engine)
    return es.with_checks(generation_ok=cert.verdict, generation_mode=mode)


def kappa(es: EligibleSystem) -> Partition:
    """(beta + gamma) * (alpha + delta * (beta + gamma)) for an extended system."""
    bc = join(es.beta, es.gamma)
    return meet(bc, join(es.alpha, meet(es.delta, bc)))


__all__ = ["base6", "base9", "extend_step", "construct_consecutive", "check_eligible",
           "complementarity", "blocks_disjoint", "eligible_system", "cycle_hints", "kappa"]
