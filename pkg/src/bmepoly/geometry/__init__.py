"""Exact polytope computations: hulls, faces and combinatorial equivalence."""

from .hull import (
    AffineFrame,
    BudgetExceeded,
    DoubleDescription,
    HPolytope,
    VPolytope,
    hull_facets,
    normalize,
    vertex_enumeration,
)
from .linalg import affine_dimension, rank
from .polytope import (
    CladeScanReport,
    Equivalence,
    IncidenceStructure,
    birkhoff_vertices,
    bme_dimension,
    clade_face_dimension,
    combinatorially_equivalent,
    euler_characteristic,
    f_vector,
    faces_by_closure,
    faces_by_intersection,
    no_clade_facet_scan,
    polytope,
    simplex_vertices,
    vertex_facet_incidence,
)

__all__ = [
    "AffineFrame", "BudgetExceeded", "CladeScanReport", "DoubleDescription", "Equivalence",
    "HPolytope", "IncidenceStructure", "VPolytope", "affine_dimension", "birkhoff_vertices",
    "bme_dimension", "clade_face_dimension", "combinatorially_equivalent",
    "euler_characteristic", "f_vector", "faces_by_closure", "faces_by_intersection",
    "hull_facets", "no_clade_facet_scan", "normalize", "polytope", "rank",
    "simplex_vertices", "vertex_enumeration", "vertex_facet_incidence",
]
