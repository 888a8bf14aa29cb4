"""Acceptance criteria 1-12, each timed against its budget.

Every test records a one-line PASS/FAIL verdict; the lines are printed in
the terminal summary (see conftest.py) and also to stdout with ``-s``.
"""

import time
from fractions import Fraction
from math import comb


from bmepoly.coords import row_sums, scale_factor, vertex_vector
from bmepoly.dissimilarity import random_instances
from bmepoly.geometry import (AffineFrame, affine_dimension, birkhoff_vertices, combinatorially_equivalent,
                              hull_facets, no_clade_facet_scan, polytope, simplex_vertices)
from bmepoly.inequalities import (apply_matrix, caterpillar_inequality, caterpillar_projection_matrix,
                                  caterpillar_subface_123, classify_facets, cyclic_ordering_inequality,
                                  family_constraints, intersecting_cherry_inequality, tight_vertices,
                                  vertex_table)
from bmepoly.solver import branch_and_bound, brute_force_bme, build_relaxation, lp_solve, tree_value
from bmepoly.trees import enumerate_trees
from bmepoly.verify import facet_polytope


RESULTS: list[str] = []

REFERENCE_A = [
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, Fraction(1, 2), 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, Fraction(1, 2), 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, Fraction(1, 2)],
]


def criterion(number, budget, check):
    """Run ``check`` (returning a list of failure messages), record and assert the verdict."""
    t0 = time.perf_counter()
    problems = check()
    elapsed = time.perf_counter() - t0
    if elapsed >= budget:
        problems.append(f"took {elapsed:.1f}s, budget {budget}s")
    verdict = "PASS" if not problems else "FAIL"
    line = f"criterion {number:2d}: {verdict} ({elapsed:.2f}s / {budget}s)"
    if problems:
        line += " - " + "; ".join(problems[:3])
    RESULTS.append(line)
    print(line)
    assert not problems, line


def test_criterion_01_tree_counts():
    def check():
        want = {3: 1, 4: 3, 5: 15, 6: 105, 7: 945, 8: 10395}
        return [f"n={n}: {len(enumerate_trees(n))} trees, want {w}"
                for n, w in want.items() if len(enumerate_trees(n)) != w]
    criterion(1, 5, check)


def test_criterion_02_dimensions():
    def check():
        out = []
        for n, want in {4: 2, 5: 5, 6: 9}.items():
            got = affine_dimension([vertex_vector(t).x for t in enumerate_trees(n)])
            if got != want or want != comb(n, 2) - n:
                out.append(f"n={n}: dim {got}, want {want}")
        return out
    criterion(2, 10, check)


def test_criterion_03_hulls():
    def check():
        out = []
        p4 = [vertex_vector(t).x for t in enumerate_trees(4)]
        if len(hull_facets(p4)) != 3:
            out.append("P_4 facet count")
        p5 = [vertex_vector(t).x for t in enumerate_trees(5)]
        h = hull_facets(p5)
        if len(h) != 52:
            out.append(f"P_5 has {len(h)} facets")
        cls = classify_facets(h, AffineFrame(p5), family_constraints(5, "all"))
        if cls.counts != {"caterpillar": 10, "cherry": 30, "cyclic": 12}:
            out.append(f"classification {cls.counts}")
        if cls.unmatched or any(len(m) != 1 for m in cls.matches):
            out.append("some facet matches no family constraint or several")
        return out
    criterion(3, 60, check)


def test_criterion_04_tight_counts():
    def check():
        out = []
        want = {(5, "caterpillar"): 6, (6, "caterpillar"): 24, (5, "cherry"): 6, (6, "cherry"): 30,
                (5, "cyclic"): 5}
        for n in (5, 6):
            table = vertex_table(n)
            for k in family_constraints(n, "all"):
                got = len(tight_vertices(k, table).tight_vertices)
                if got != want[n, k.tag.family]:
                    out.append(f"{k.tag} n={n}: {got} tight")
        return out
    criterion(4, 60, check)


def test_criterion_05_facet_rank():
    def check():
        out = []
        for n in (5, 6):
            table = vertex_table(n)
            for k in family_constraints(n, "all"):
                dim = tight_vertices(k, table).affine_dim
                if dim != comb(n, 2) - n - 1:
                    out.append(f"{k.tag} n={n}: dim {dim}")
        return out
    criterion(5, 300, check)


def test_criterion_06_validity():
    def check():
        out = []
        for n in range(4, 8):
            xs = [vertex_vector(t).x for t in enumerate_trees(n)]
            for k in family_constraints(n, "all"):
                bad = sum(not k.holds(x) for x in xs)
                if bad:
                    out.append(f"{k.tag} n={n} violated by {bad} vertices")
        return out
    criterion(6, 300, check)


def test_criterion_07_birkhoff():
    def check():
        out = []
        b3 = polytope(birkhoff_vertices(3).vertices)
        if len(b3[1]) != 9:
            out.append(f"B(3) has {len(b3[1])} facets")
        if not combinatorially_equivalent(facet_polytope(caterpillar_inequality(1, 2, 5)), b3):
            out.append("caterpillar facet not equivalent to B(3)")
        if not combinatorially_equivalent(facet_polytope(intersecting_cherry_inequality(1, 2, 3, 5)), b3):
            out.append("cherry facet not equivalent to B(3)")
        simplex = polytope(simplex_vertices(4).vertices)
        if not combinatorially_equivalent(facet_polytope(cyclic_ordering_inequality((1, 2, 3, 4, 5))), simplex):
            out.append("cyclic facet not equivalent to the 4-simplex")
        return out
    criterion(7, 30, check)


def test_criterion_08_clade_faces():
    def check():
        rep = no_clade_facet_scan(50)
        return [f"facet-dimensional clade faces at {rep.hits[:3]}"] if rep.hits else []
    criterion(8, 1, check)


def test_criterion_09_projection():
    def check():
        out = []
        A = caterpillar_projection_matrix(5)
        if A != [[Fraction(x) for x in row] for row in REFERENCE_A]:
            out.append("matrix differs from the reference one")
        face = caterpillar_subface_123(5)
        images = [apply_matrix(A, vertex_vector(t).x) for t in face]
        target = {tuple(Fraction(x) for x in vertex_vector(t).x)
                  for t in enumerate_trees(4) if t.path_internal_nodes(1, 2) == 2}
        if len(set(images)) != len(face) or set(images) != target:
            out.append("projection is not a bijection onto the caterpillar-edge vertices of P_4")
        return out
    criterion(9, 1, check)


def test_criterion_10_solver_oracle():
    def check():
        out = []
        for n in (5, 6, 7):
            for idx, d in enumerate(random_instances(n, 50)):
                bf, bb = brute_force_bme(d), branch_and_bound(d)
                if bb.best_value != bf.best_value or tree_value(bb.best_tree, d) != bf.best_value:
                    out.append(f"n={n} instance {idx}: {bb.best_value} vs {bf.best_value}")
        return out
    criterion(10, 600, check)


def test_criterion_11_n5_relaxation_exact():
    def check():
        out = []
        for idx, d in enumerate(random_instances(5, 100)):
            lp = lp_solve(build_relaxation(d, family_constraints(5, "all")))
            bf = brute_force_bme(d)
            if lp.value != bf.best_value:
                out.append(f"instance {idx}: LP {lp.value} vs {bf.best_value}")
        return out
    criterion(11, 120, check)


def test_criterion_12_row_sums():
    def check():
        out = []
        for n in range(3, 8):
            for t in enumerate_trees(n):
                if row_sums(vertex_vector(t).x, n) != [scale_factor(n)] * n:
                    out.append(f"{t.newick()}")
        return out
    criterion(12, 60, check)
