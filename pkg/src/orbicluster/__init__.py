"""Generalized cluster algebras, Teichmüller spaces of orbifolds and their spines.

Modules:

* ``ring``: exact arithmetic in cyclotomic fields.
* ``laurent``: Laurent polynomials with exact division.
* ``cluster``: seeds, standard and generalized mutation, sweeps.
* ``lambda_lengths``: decorated lambda-lengths and the orbifold Ptolemy relation.
* ``fatgraph``: spines with pending edges, validation and the shear bracket.
* ``geodesics``: matrix words along closed paths and their traces.
* ``mcg``: flips, pending flips and spiral inversion with path transport.
* ``cli``: command-line drivers.
"""

from .ring import CyclotomicField, FieldElem, omega
from .laurent import InexactDivisionError, LaurentPoly, exact_divide, positivity_report
from .cluster import (ExchangeMatrix, GenSeed, check_laurent, finite_type_probe, generalized_mutate,
                      make_seed, matrix_mutate, mutate, positivity_search, rank2_cycle_check,
                      standard_mutate)
from .fatgraph import LIBRARY, Spine, build_spine, poisson_matrix, poisson_report, validate
from .geodesics import PathWord, evaluate_word, geodesic_function, generator
from .mcg import (MoveRecord, check_move_invariance, flip_inner, flip_pending, invert_spiral,
                  pending_flip_via_hole, transport_path)

__all__ = [
    "CyclotomicField", "FieldElem", "omega",
    "InexactDivisionError", "LaurentPoly", "exact_divide", "positivity_report",
    "ExchangeMatrix", "GenSeed", "check_laurent", "finite_type_probe", "generalized_mutate",
    "make_seed", "matrix_mutate", "mutate", "positivity_search", "rank2_cycle_check",
    "standard_mutate",
    "LIBRARY", "Spine", "build_spine", "poisson_matrix", "poisson_report", "validate",
    "PathWord", "evaluate_word", "geodesic_function", "generator",
    "MoveRecord", "check_move_invariance", "flip_inner", "flip_pending", "invert_spiral",
    "pending_flip_via_hole", "transport_path",
]

__version__ = "0.1.0"
