"""Generating systems of the quasiorder lattice on 19 elements.

Both systems live on the two-row ladder (a_0..a_9, b_0..b_8).  The six-element
system orients some ladder edges and adds the inverses of the two oriented
relations; the four-element one keeps the ladder equivalences and makes the
extra delta edge a_1 -> a_2 one-way.
"""

from __future__ import annotations

from ..quasiorder import Quasiorder, equ_to_quo, inverse, join, qu
from ..script import Script, cycle_hint_steps, load_fixture
from .systems import GeneratorSet
from .zadori import element_names, zadori_partitions, zadori_script

N = 19
K = 9
SIX_NAMES = ("alpha", "alpha_inv", "beta", "beta_inv", "gamma", "delta")


def _a(i: int) -> int:
    return i


def _b(i: int) -> int:
    return K + 1 + i


def mc95_generators() -> tuple[Quasiorder, ...]:
    """Six quasiorders: alpha, its inverse, beta, its inverse, gamma, delta.

    alpha: along each row every odd-indexed element points to both of its
    neighbours (a_1 -> a_0, a_1 -> a_2, b_1 -> b_0, ...).  beta: rungs point a_{2i} -> b_{2i} and
    b_{2i+1} -> a_{2i+1}.  gamma: the undirected slants {b_i, a_{i+1}}.
    delta: the undirected rung {a_0, b_0}.
    """
    alpha_pairs = []
    for i in range(K):
        odd, even = (i, i + 1) if i % 2 else (i + 1, i)
        alpha_pairs.append((_a(odd), _a(even)))
    for i in range(K - 1):
        odd, even = (i, i + 1) if i % 2 else (i + 1, i)
        alpha_pairs.append((_b(odd), _b(even)))
    beta_pairs = [(_a(i), _b(i)) if i % 2 == 0 else (_b(i), _a(i)) for i in range(K)]
    gamma_pairs = []
    for i in range(K):
        gamma_pairs += [(_b(i), _a(i + 1)), (_a(i + 1), _b(i))]
    alpha = Quasiorder.from_pairs(N, alpha_pairs)
    beta = Quasiorder.from_pairs(N, beta_pairs)
    gamma = Quasiorder.from_pairs(N, gamma_pairs)
    delta = Quasiorder.from_pairs(N, [(_a(0), _b(0)), (_b(0), _a(0))])
    return (alpha, inverse(alpha), beta, inverse(beta), gamma, delta)


def mc95_system() -> GeneratorSet:
    """The six oriented-ladder quasiorders with their derivation script."""
    gens = mc95_generators()
    script = load_fixture("quo19.script")
    return GeneratorSet(N, "quo", gens, SIX_NAMES, ("oriented ladder n=19",), script, script.cycle)


def quo_four_gen(n: int = N) -> GeneratorSet:
    """The ladder equivalences with delta widened by the one-way pair (a_1, a_2)."""
    alpha, beta, gamma, delta = (equ_to_quo(p) for p in zadori_partitions(n))
    delta = join(delta, qu(n, 1, 2))
    script = zadori_script(n)
    return GeneratorSet(n, "quo", (alpha, beta, gamma, delta), ("alpha", "beta", "gamma", "delta"),
                        (f"ladder n={n} with one-way delta edge",), script, script.cycle)


def quo_cycle_hints(gs: GeneratorSet) -> list[tuple[str, str, str, str]]:
    """Hints deriving the atoms around 0, 1, ..., n-1.

    For the four-generator system the carried script is an equivalence-lattice
    derivation over the same names, so the hints reach the symmetric atoms.
    """
    return cycle_hint_steps(gs.script, gs.cycle, range(gs.n))


def mc95_script() -> Script:
    return load_fixture("quo19.script")


__all__ = ["mc95_system", "quo_four_gen", "quo_cycle_hints", "mc95_script", "element_names"]
