"""Exact-arithmetic relative Lie algebra cohomology engine.

Subpackages by topic: ``linalg`` (exact rational sparse linear algebra),
``lie`` (structure-constant Lie algebras, triples, modules), ``cochains``
(alternating-form complexes, cup products, cohomology rings), ``spectral``
(filtered complex, page computation, edge maps, product decompositions),
``rootdata``/``bk`` (root systems, Weyl groups, deformed flag-variety
products), ``cli`` (command line frontend).
"""

from .linalg import (
    Q,
    RationalMatrix,
    SubspaceHandle,
    Subquotient,
    kernel_basis,
    induced_map,
    subspace_ops,
)
from .lie import LieAlgebra, LieModule, ModulePairing, Triple, build_triple
from .cochains import Cochain, RelativeComplex, CohomologyRing, cohomology_ring
from .spectral import SpectralSequence
from .rootdata import RootDatum
from .bk import ParabolicDatum, BKInstance, build_bk_instance

__all__ = [
    "Q",
    "RationalMatrix",
    "SubspaceHandle",
    "Subquotient",
    "kernel_basis",
    "induced_map",
    "subspace_ops",
    "LieAlgebra",
    "LieModule",
    "ModulePairing",
    "Triple",
    "build_triple",
    "Cochain",
    "RelativeComplex",
    "CohomologyRing",
    "cohomology_ring",
    "SpectralSequence",
    "RootDatum",
    "ParabolicDatum",
    "BKInstance",
    "build_bk_instance",
]
