"""Combinatorics of polytopes given by vertices and facets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .hull import BudgetExceeded, HPolytope, VPolytope, hull_facets
from .linalg import affine_dimension, dot


@dataclass(frozen=True)
class IncidenceStructure:
    """Boolean vertex-by-facet matrix: ``matrix[v][f]`` iff vertex v lies on facet f."""

    matrix: tuple[tuple[bool, ...], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.matrix)

    @property
    def num_facets(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def facet_sets(self) -> list[frozenset[int]]:
        return [frozenset(v for v, row in enumerate(self.matrix) if row[f])
                for f in range(self.num_facets)]

    def vertex_sets(self) -> list[frozenset[int]]:
        return [frozenset(f for f, x in enumerate(row) if x) for row in self.matrix]

    def to_json(self) -> dict:
        return {"vertices": self.num_vertices, "facets": self.num_facets,
                "matrix": [[int(x) for x in row] for row in self.matrix]}


def vertex_facet_incidence(v: VPolytope, h: HPolytope) -> IncidenceStructure:
    if v.ambient_dim != h.ambient_dim:
        raise ValueError("vertex and facet descriptions live in different spaces")
    return IncidenceStructure(tuple(
        tuple(dot(a, p) == b for a, b in h.inequalities) for p in v.vertices))


def polytope(points: Sequence[Sequence]) -> tuple[VPolytope, HPolytope]:
    vp = VPolytope(list(points))
    return vp, hull_facets(vp)


# ---------------------------------------------------------------------------
# Face lattice
# ---------------------------------------------------------------------------

def faces_by_intersection(incidence: IncidenceStructure) -> set[frozenset[int]]:
    """All nonempty proper faces, as vertex sets, closed under facet intersection."""
    facets = [f for f in incidence.facet_sets()]
    faces = set(facets)
    frontier = list(faces)
    while frontier:
        nxt = []
        for face in frontier:
            for facet in facets:
                meet = face & facet
                if meet and meet not in faces:
                    faces.add(meet)
                    nxt.append(meet)
        frontier = nxt
    return faces


def faces_by_closure(incidence: IncidenceStructure) -> set[frozenset[int]]:
    """Nonempty proper faces found by testing every vertex subset for closure.

    A vertex set S is a face iff it equals the set of vertices lying on every
    facet that contains S.  Exponential in the vertex count.
    """
    nv = incidence.num_vertices
    if nv > 20:
        raise BudgetExceeded(f"{nv} vertices is too many for subset enumeration")
    on = [0] * incidence.num_facets
    for vi, row in enumerate(incidence.matrix):
        for f, x in enumerate(row):
            if x:
                on[f] |= 1 << vi
    full = (1 << nv) - 1
    faces = set()
    for mask in range(1, full):
        closure = full
        for m in on:
            if m & mask == mask:
                closure &= m
        if closure == mask:
            faces.add(frozenset(i for i in range(nv) if mask >> i & 1))
    return faces


def f_vector(v: VPolytope, h: HPolytope | None = None, method: str = "intersection") -> tuple[int, ...]:
    """Face counts by dimension 0 .. d-1."""
    if h is None:
        h = hull_facets(v)
    inc = vertex_facet_incidence(v, h)
    faces = faces_by_closure(inc) if method == "closure" else faces_by_intersection(inc)
    d = h.dim if h.dim is not None else affine_dimension(v.vertices)
    counts = [0] * d
    for face in faces:
        k = affine_dimension([v.vertices[i] for i in face])
        counts[k] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# Combinatorial equivalence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    vertex_map: dict[int, int] | None = None
    facet_map: dict[int, int] | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def _fingerprints(inc: IncidenceStructure) -> list[tuple]:
    fsets = inc.facet_sets()
    return [tuple(sorted(len(fsets[f]) for f in vf)) for vf in inc.vertex_sets()]


def combinatorially_equivalent(p: tuple[VPolytope, HPolytope] | IncidenceStructure,
                               q: tuple[VPolytope, HPolytope] | IncidenceStructure,
                               max_nodes: int = 1_000_000) -> Equivalence:
    """Search for a vertex bijection that maps facets onto facets.

    Vertices are matched only to vertices with the same facet-valence
    fingerprint (the sorted sizes of the facets through them).
    """
    ip = p if isinstance(p, IncidenceStructure) else vertex_facet_incidence(*p)
    iq = q if isinstance(q, IncidenceStructure) else vertex_facet_incidence(*q)
    if ip.num_vertices != iq.num_vertices or ip.num_facets != iq.num_facets:
        return Equivalence(False)
    fp, fq = _fingerprints(ip), _fingerprints(iq)
    if sorted(fp) != sorted(fq):
        return Equivalence(False)
    pf, qf = ip.facet_sets(), iq.facet_sets()
    q_index = {s: k for k, s in enumerate(qf)}
    if len(q_index) != len(qf):
        raise ValueError("duplicate facets in the second polytope")
    nv = ip.num_vertices
    order = sorted(range(nv), key=lambda i: (sum(fp[i] == x for x in fp), i))
    mapping: dict[int, int] = {}
    used: set[int] = set()
    nodes = 0

    def consistent() -> bool:
        # each facet of p must still have a same-size image candidate in q that
        # contains its mapped vertices and none of the other mapped vertices
        for s in pf:
            img = {mapping[i] for i in s if i in mapping}
            out = {mapping[i] for i in mapping if i not in s}
            if not any(len(t) == len(s) and img <= t and not (out & t) for t in qf):
                return False
        return True

    def search(k: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"equivalence search exceeded {max_nodes} nodes")
        if k == nv:
            return all(frozenset(mapping[i] for i in s) in q_index for s in pf)
        src = order[k]
        for dst in range(nv):
            if dst in used or fq[dst] != fp[src]:
                continue
            mapping[src] = dst
            used.add(dst)
            if consistent() and search(k + 1):
                return True
            del mapping[src]
            used.discard(dst)
        return False

    if not search(0):
        return Equivalence(False)
    fmap = {k: q_index[frozenset(mapping[i] for i in s)] for k, s in enumerate(pf)}
    return Equivalence(True, dict(mapping), fmap)


# ---------------------------------------------------------------------------
# Reference polytopes
# ---------------------------------------------------------------------------

def birkhoff_vertices(k: int) -> VPolytope:
    """The k! permutation matrices of order k, flattened row by row."""
    if not 2 <= k <= 5:
        raise ValueError(f"Birkhoff order {k} outside 2..5")
    verts = []
    for perm in itertools.permutations(range(k)):
        verts.append(tuple(Fraction(int(perm[r] == c)) for r in range(k) for c in range(k)))
    return VPolytope(verts)


def simplex_vertices(d: int) -> VPolytope:
    """Standard d-simplex: the unit vectors of R^(d+1)."""
    if d < 0:
        raise ValueError("simplex dimension must be nonnegative")
    return VPolytope([tuple(Fraction(int(i == j)) for j in range(d + 1)) for i in range(d + 1)])


# ---------------------------------------------------------------------------
# Clade faces
# ---------------------------------------------------------------------------

def bme_dimension(n: int) -> int:
    return comb(n, 2) - n if n >= 3 else 0


def clade_face_dimension(n: int, k: int, y: int) -> int:
    """Dimension of the face of P_n fixed by k disjoint clades holding y leaves.

    Such a face is a copy of P_m with m = n - y + k.
    """
    if k < 1 or y < 2 * k or y > n:
        raise ValueError(f"need k >= 1 clades on 2k <= y <= n leaves, got k={k}, y={y}, n={n}")
    m = n - y + k
    if m < 3:
        raise ValueError(f"clade face reduces to {m} pseudo-leaves; need at least 3")
    return bme_dimension(m)


@dataclass
class CladeScanReport:
    n_max: int
    checked: int
    hits: list[tuple[int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.hits


def no_clade_facet_scan(n_max: int, n_min: int = 4) -> CladeScanReport:
    """Check every admissible (n, k, y) for a clade face of facet dimension."""
    checked = 0
    hits = []
    for n in range(n_min, n_max + 1):
        facet_dim = bme_dimension(n) - 1
        for k in range(1, n // 2 + 1):
            for y in range(2 * k, n + 1):
                if n - y + k < 3:
                    continue
                checked += 1
                if clade_face_dimension(n, k, y) == facet_dim:
                    hits.append((n, k, y))
    return CladeScanReport(n_max, checked, hits)


def euler_characteristic(fv: Sequence[int]) -> int:
    return sum((-1) ** i * f for i, f in enumerate(fv))


def num_birkhoff_vertices(k: int) -> int:
    return factorial(k)
