import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from bmepoly.coords import vertex_vector
from bmepoly.geometry import (AffineFrame, BudgetExceeded, DoubleDescription, VPolytope,
                              affine_dimension, birkhoff_vertices, bme_dimension, clade_face_dimension,
                              combinatorially_equivalent, euler_characteristic, f_vector, faces_by_closure,
                              faces_by_intersection, hull_facets, no_clade_facet_scan, normalize, polytope,
                              simplex_vertices, vertex_enumeration, vertex_facet_incidence)
from bmepoly.geometry.io import FormatError, read_h, read_v, write_h, write_v
from bmepoly.geometry.linalg import dot, int_rank, inverse, nullspace, rank, rref, solve
from bmepoly.trees import enumerate_constrained_trees, enumerate_trees

P = {n: [vertex_vector(t).x for t in enumerate_trees(n)] for n in (4, 5, 6)}
CUBE = [tuple(p) for p in itertools.product((0, 1), repeat=3)]

points3 = st.lists(st.tuples(*[st.integers(-4, 4)] * 3), min_size=4, max_size=10, unique=True)


# -- linear algebra -----------------------------------------------------------

def test_rref_and_rank():
    m = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    red, piv = rref(m)
    assert piv == [0, 1] and rank(m) == 2 == int_rank(m)
    assert red[0] == [1, 0, 1]
    for v in nullspace(m):
        assert all(dot(r, v) == 0 for r in m)
    assert solve(m, [6, 12, 2]) is not None
    assert solve(m, [6, 13, 2]) is None
    inv = inverse([[2, 1], [1, 1]])
    assert inv == [[1, -1], [-1, 2]]
    with pytest.raises(ValueError):
        inverse([[1, 2], [2, 4]])


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=6))
def test_int_rank_matches_rational_rank(rows):
    assert int_rank(rows) == rank(rows)


@pytest.mark.parametrize("n,dim", [(4, 2), (5, 5), (6, 9)])
def test_bme_dimensions(n, dim):
    assert affine_dimension(P[n]) == dim == bme_dimension(n)


@given(points3, st.randoms(use_true_random=False), st.tuples(*[st.integers(-9, 9)] * 3))
def test_affine_dimension_invariance(pts, rnd, shift):
    d = affine_dimension(pts)
    shuffled = list(pts)
    rnd.shuffle(shuffled)
    assert affine_dimension(shuffled) == d
    assert affine_dimension([tuple(a + b for a, b in zip(p, shift)) for p in pts]) == d


def test_affine_dimension_edge_cases():
    assert affine_dimension([(1, 2, 3)]) == 0
    with pytest.raises(ValueError):
        affine_dimension([])


# -- hulls --------------------------------------------------------------------

def test_known_facet_counts():
    assert len(hull_facets(P[4])) == 3
    assert len(hull_facets(P[5])) == 52
    assert len(hull_facets(birkhoff_vertices(3))) == 9
    assert len(hull_facets(simplex_vertices(4))) == 5
    assert len(hull_facets(CUBE)) == 6


def test_facets_sorted_and_normalized():
    h = hull_facets(P[5])
    keys = [(tuple(int(x) for x in a), int(b)) for a, b in h.inequalities]
    assert keys == sorted(keys)
    for a, b in keys:
        assert normalize(a, b) == (a, b)


def test_adjacency_tests_agree():
    for pts in (P[5], birkhoff_vertices(3).vertices, CUBE):
        a = hull_facets(pts, adjacency="combinatorial")
        b = hull_facets(pts, adjacency="algebraic")
        assert a.inequalities == b.inequalities


def check_hull(pts, h):
    d = affine_dimension(pts)
    assert h.dim == d
    for (a, b), on in zip(h.inequalities, h.facet_vertices):
        vals = [dot(a, p) for p in pts]
        assert all(v <= b for v in vals)
        tight = [p for p, v in zip(pts, vals) if v == b]
        assert {i for i, v in enumerate(vals) if v == b} == set(on)
        assert affine_dimension(tight) == d - 1
    for a, b in h.equalities:
        assert all(dot(a, p) == b for p in pts)


@settings(max_examples=60)
@given(points3)
def test_random_hulls(pts):
    assume(affine_dimension(pts) >= 1)
    h = hull_facets(pts)
    check_hull(pts, h)
    verts = vertex_enumeration(h)
    assert set(verts) <= {tuple(Fraction(x) for x in p) for p in pts}
    assert hull_facets(verts).inequalities == h.inequalities


@pytest.mark.parametrize("pts", [P[4], P[5], birkhoff_vertices(3).vertices, simplex_vertices(4).vertices],
                         ids=["P4", "P5", "B3", "simplex4"])
def test_vertex_recovery(pts):
    h = hull_facets(pts)
    check_hull(pts, h)
    assert vertex_enumeration(h) == sorted(tuple(Fraction(x) for x in p) for p in pts)


def test_interior_points_dropped():
    pts = CUBE + [(Fraction(1, 2),) * 3, (0, Fraction(1, 2), 0)]
    assert sorted(vertex_enumeration(hull_facets(pts))) == sorted(tuple(map(Fraction, p)) for p in CUBE)


def test_checkpoint_resume(tmp_path):
    ck = str(tmp_path / "dd.json")
    full = hull_facets(P[5])
    with pytest.raises(BudgetExceeded) as info:
        hull_facets(P[5], max_steps=40, checkpoint=ck, checkpoint_every=10)
    assert info.value.state["next"] < len(P[5])
    saved = json.loads(open(ck).read())
    assert saved["steps"] >= 40
    resumed = hull_facets(P[5], checkpoint=ck, resume=True)
    assert resumed.inequalities == full.inequalities
    # repeated small budgets also converge to the same answer
    ck2 = str(tmp_path / "dd2.json")
    for _ in range(1000):
        try:
            h = hull_facets(P[5], max_steps=25, checkpoint=ck2, resume=True)
            break
        except BudgetExceeded:
            continue
    assert h.inequalities == full.inequalities


def test_resume_rejects_other_points(tmp_path):
    ck = str(tmp_path / "dd.json")
    with pytest.raises(BudgetExceeded):
        hull_facets(P[5], max_steps=5, checkpoint=ck)
    with pytest.raises(ValueError):
        hull_facets(birkhoff_vertices(3), checkpoint=ck, resume=True)


def test_dd_state_round_trip():
    frame = AffineFrame(CUBE)
    from bmepoly.geometry.hull import homogenized_generators
    dd = DoubleDescription(homogenized_generators(frame, CUBE))
    clone = DoubleDescription.from_state(json.loads(json.dumps(dd.state())))
    dd.run()
    clone.run()
    assert sorted(dd.rays) == sorted(clone.rays)


# -- faces and f-vectors -------------------------------------------------------

def test_f_vectors():
    assert f_vector(VPolytope(P[4])) == (3, 3)
    assert f_vector(simplex_vertices(4)) == (5, 10, 10, 5)
    fv = f_vector(VPolytope(P[5]))
    assert fv[0] == 15 and fv[-1] == 52
    assert fv == f_vector(VPolytope(P[5]), method="closure")
    assert f_vector(VPolytope(CUBE)) == (8, 12, 6)
    assert f_vector(birkhoff_vertices(3)) == (6, 15, 18, 9)


@pytest.mark.parametrize("pts", [P[5], CUBE, birkhoff_vertices(3).vertices, simplex_vertices(4).vertices])
def test_euler_relation(pts):
    v, h = polytope(pts)
    fv = f_vector(v, h)
    assert euler_characteristic(fv) == 1 - (-1) ** h.dim


def test_face_methods_agree():
    for pts in (P[4], P[5], CUBE, birkhoff_vertices(3).vertices):
        inc = vertex_facet_incidence(*polytope(pts))
        assert faces_by_intersection(inc) == faces_by_closure(inc)


def test_incidence_examples():
    v, h = polytope(P[5])
    inc = vertex_facet_incidence(v, h)
    sizes = sorted(len(s) for s in inc.facet_sets())
    assert sizes.count(6) == 40 and sizes.count(5) == 12
    inc = vertex_facet_incidence(*polytope(simplex_vertices(4).vertices))
    assert all(sum(row) == 4 for row in inc.matrix)
    inc = vertex_facet_incidence(*polytope(birkhoff_vertices(3).vertices))
    assert all(sum(row) == 6 for row in inc.matrix)
    assert inc.to_json()["facets"] == 9


def test_clade_face_triangle():
    pts = [vertex_vector(t).x for t in enumerate_constrained_trees(5, [(1, 2)])]
    assert len(pts) == 3 and affine_dimension(pts) == 2
    assert f_vector(VPolytope(pts)) == (3, 3)


# -- equivalence ----------------------------------------------------------------

def test_equivalences():
    b3 = polytope(birkhoff_vertices(3).vertices)
    s4 = polytope(simplex_vertices(4).vertices)
    cube = polytope(CUBE)
    assert combinatorially_equivalent(b3, b3)
    assert not combinatorially_equivalent(b3, s4)
    assert not combinatorially_equivalent(s4, b3)
    prism = polytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert not combinatorially_equivalent(prism, cube)
    sheared = polytope([(x + y, y, z + 2 * x) for x, y, z in CUBE])
    eq = combinatorially_equivalent(cube, sheared)
    assert eq and len(eq.vertex_map) == 8 and len(eq.facet_map) == 6


def test_equivalence_witness_preserves_incidence():
    b3 = polytope(birkhoff_vertices(3).vertices)
    pts = [p[::-1] for p in birkhoff_vertices(3).vertices][::-1]
    other = polytope(pts)
    eq = combinatorially_equivalent(b3, other)
    assert eq
    ip, iq = vertex_facet_incidence(*b3), vertex_facet_incidence(*other)
    for v, f in itertools.product(range(6), range(9)):
        assert ip.matrix[v][f] == iq.matrix[eq.vertex_map[v]][eq.facet_map[f]]


def test_equivalence_budget():
    cube = polytope(CUBE)
    with pytest.raises(BudgetExceeded):
        combinatorially_equivalent(cube, cube, max_nodes=1)


# -- reference polytopes and clade faces -----------------------------------------

def test_birkhoff():
    assert len(birkhoff_vertices(3).vertices) == 6
    assert affine_dimension(birkhoff_vertices(3).vertices) == 4
    assert affine_dimension(birkhoff_vertices(2).vertices) == 1
    assert affine_dimension(birkhoff_vertices(4).vertices) == 9
    with pytest.raises(ValueError):
        birkhoff_vertices(6)


def test_clade_faces():
    assert clade_face_dimension(5, 1, 2) == 2
    assert clade_face_dimension(5, 1, 2) != bme_dimension(5) - 1
    with pytest.raises(ValueError):
        clade_face_dimension(5, 2, 3)
    with pytest.raises(ValueError):
        clade_face_dimension(5, 1, 5)
    assert no_clade_facet_scan(50).ok


@pytest.mark.parametrize("n,fixed", [(5, [(1, 2)]), (6, [(1, 2)]), (6, [(1, 2), (3, 4)]), (7, [(1, 2), (3, 4), (5, 6)])])
def test_clade_face_dimension_matches_vertices(n, fixed):
    pts = [vertex_vector(t).x for t in enumerate_constrained_trees(n, fixed)]
    assert affine_dimension(pts) == clade_face_dimension(n, len(fixed), 2 * len(fixed))


# -- file formats ------------------------------------------------------------------

def test_io_round_trip():
    h = hull_facets(P[5])
    back = read_h(write_h(h))
    assert back.inequalities == h.inequalities and back.equalities == h.equalities
    v = VPolytope(P[4])
    assert read_v(write_v(v)).vertices == v.vertices
    assert "linearity 5" in write_h(h)


@pytest.mark.parametrize("text", ["V-representation\n1 3 rational\n1 0 0\nend",
                                  "H-representation\nbegin\n1 3 rational\n1 0\nend",
                                  "H-representation\nbegin\n2 3 rational\n1 0 0\nend",
                                  "H-representation\nbegin\n1 3 rational\n1 x 0\nend"])
def test_io_errors(text):
    with pytest.raises(FormatError):
        (read_v if text.startswith("V") else read_h)(text)
