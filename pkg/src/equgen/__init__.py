"""Four-element generating sets of finite partition (equivalence) lattices.

Subpackages and modules:

* :mod:`equgen.partition` / :mod:`equgen.quasiorder` -- lattice elements
* :mod:`equgen.closure` -- generated sublattices and generation certificates
* :mod:`equgen.constructions` -- the concrete generating systems
* :mod:`equgen.script` -- checked derivation scripts
"""

from .partition import Partition, bell, parse_partition
from .quasiorder import Quasiorder

__version__ = "0.1.0"

__all__ = ["Partition", "Quasiorder", "bell", "parse_partition", "__version__"]
