"""Homological invariants of finitely presented A-infinity modules over F2.

Borel, co-Borel, twisted Borel and Tate complexes built from truncated bar and
cobar constructions, plus the tree combinatorics behind the A-infinity
relations.
"""

from .ainf import (
    AInfAlgebra,
    AInfBimodule,
    AInfCoalgebra,
    AInfComodule,
    AInfModule,
    Basis,
    PresentationError,
    cyclic_group,
    dualize_algebra,
    exterior_algebra_rank1,
    group_algebra,
    module_to_comodule,
    nonassociative_magma,
    trivial_module,
    verify_algebra_relations,
    verify_bimodule_relations,
    verify_coalgebra_relations,
    verify_comodule_relations,
    verify_module_relations,
)
from .bar import TruncationPolicy, bar_complex, borel, cobar_complex, coborel
from .f2 import ChainComplex, ChainMap, SparseF2Matrix, TrustedRange, cone, exactness_check, homology_dims
from .presentation import dump_structure, parse_presentation
from .tate import dualizing_bimodule, norm_map, tate_complex, twisted_borel, verify_norm
from .trees import Tree, enumerate_trees, strata, wall_adjacency

__all__ = [
    "AInfAlgebra", "AInfBimodule", "AInfCoalgebra", "AInfComodule", "AInfModule", "Basis",
    "ChainComplex", "ChainMap", "PresentationError", "SparseF2Matrix", "Tree", "TruncationPolicy",
    "TrustedRange", "bar_complex", "borel", "cobar_complex", "coborel", "cone", "cyclic_group",
    "dualize_algebra", "dualizing_bimodule", "dump_structure", "enumerate_trees", "exactness_check",
    "exterior_algebra_rank1", "group_algebra", "homology_dims", "module_to_comodule",
    "nonassociative_magma", "norm_map", "parse_presentation", "strata", "tate_complex",
    "trivial_module", "twisted_borel", "verify_algebra_relations", "verify_bimodule_relations",
    "verify_coalgebra_relations", "verify_comodule_relations", "verify_module_relations",
    "verify_norm", "wall_adjacency",
]
