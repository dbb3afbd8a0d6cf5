"""
dualalpha: weighted alpha complexes in any ambient dimension, one dual QP per candidate simplex.
"""
from .builder import betti_pipeline, build_alpha, check_witnesses
from .cech import CechGraph, WeightedPoints, build_cech_graph, neighbors
from .complex import FilteredComplex, boundary_matrix, lazy_candidates, skeleton, sublevel
from .dual_qp import DualProblem, DualSolution, DualStatus, solve_dual
from .homology import betti, rank_fp, stirling_reference
from .models.request import BuildParams, Tolerances

__version__ = "0.1.0"

__all__ = [
    "BuildParams",
    "CechGraph",
    "DualProblem",
    "DualSolution",
    "DualStatus",
    "FilteredComplex",
    "Tolerances",
    "WeightedPoints",
    "betti",
    "betti_pipeline",
    "boundary_matrix",
    "build_alpha",
    "build_cech_graph",
    "check_witnesses",
    "lazy_candidates",
    "neighbors",
    "rank_fp",
    "skeleton",
    "solve_dual",
    "stirling_reference",
    "sublevel",
]
