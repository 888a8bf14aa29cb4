"""Balanced minimum evolution polytopes in exact arithmetic."""

from .coords import (NotAVertex, PauplinVector, VertexVector, inner_product, rescale, tree_from_vertex_vector,
                     unscale, vertex_vector)
from .dissimilarity import DissimilarityMatrix, parse_dissimilarity, random_instances
from .inequalities import (LinearConstraint, caterpillar_inequality, cyclic_ordering_inequality,
                           family_constraints, intersecting_cherry_inequality)
from .solver import (BnBConfig, SolveResult, branch_and_bound, brute_force_bme, lp_solve,
                     nni_local_search)
from .trees import BinaryTree, enumerate_constrained_trees, enumerate_trees, parse_newick

__version__ = "0.1.0"

__all__ = [
    "BinaryTree", "BnBConfig", "DissimilarityMatrix", "LinearConstraint", "NotAVertex", "PauplinVector",
    "SolveResult", "VertexVector", "branch_and_bound", "brute_force_bme", "caterpillar_inequality",
    "cyclic_ordering_inequality", "enumerate_constrained_trees", "enumerate_trees", "family_constraints",
    "inner_product", "intersecting_cherry_inequality", "lp_solve", "nni_local_search", "parse_dissimilarity",
    "parse_newick", "random_instances", "rescale", "tree_from_vertex_vector", "unscale", "vertex_vector",
]
