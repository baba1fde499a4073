"""Concrete generating systems."""

from .eligible import (base6, base9, blocks_disjoint, check_eligible, complementarity,
                       construct_consecutive, cycle_hints, eligible_system, extend_step, kappa)
from .quo import mc95_generators, mc95_script, mc95_system, quo_cycle_hints, quo_four_gen
from .search import SearchReport, canonical_form, search_consecutive
from .systems import (Checks, ConstructionError, EligibleSystem, GeneratorSet, UnsupportedSize,
                      check_consecutive)
from .zadori import check_identities, zadori, zadori_partitions, zadori_script, zadori_sequences

__all__ = [
    "base6", "base9", "blocks_disjoint", "check_eligible", "complementarity",
    "construct_consecutive", "cycle_hints", "eligible_system", "extend_step", "kappa",
    "mc95_generators", "mc95_script", "mc95_system", "quo_cycle_hints", "quo_four_gen",
    "SearchReport", "canonical_form", "search_consecutive",
    "Checks", "ConstructionError", "EligibleSystem", "GeneratorSet", "UnsupportedSize",
    "check_consecutive",
    "check_identities", "zadori", "zadori_partitions", "zadori_script", "zadori_sequences",
]
