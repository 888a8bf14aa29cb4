from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bmepoly.coords import (NotAVertex, PauplinVector, VertexVector, inner_product, rescale, row_sums,
                            scale_factor, tree_from_vertex_vector, unscale, vertex_vector,
                            vertices_from_text, vertices_to_json, vertices_to_text)
from bmepoly.dissimilarity import DissimilarityMatrix
from bmepoly.trees import caterpillar, enumerate_trees, num_pairs, pair_rank, pairs, parse_newick

TREES = {n: enumerate_trees(n) for n in range(3, 8)}


def trees(n_min=4, n_max=7):
    return st.integers(n_min, n_max).flatmap(lambda n: st.sampled_from(TREES[n]))


def test_n4_example():
    v = vertex_vector(parse_newick("((1,2),(3,4));"))
    assert v.x == (2, 1, 1, 1, 1, 2)
    assert unscale(v).c == tuple(Fraction(k, 4) for k in (2, 1, 1, 1, 1, 2))


def test_n5_caterpillar_example():
    v = vertex_vector(caterpillar([1, 2, 3, 4, 5]))
    want = {(1, 2): 4, (4, 5): 4, (1, 3): 2, (2, 3): 2, (3, 4): 2, (3, 5): 2,
            (1, 4): 1, (1, 5): 1, (2, 4): 1, (2, 5): 1}
    assert all(v.entry(i, j) == x for (i, j), x in want.items())
    assert row_sums(v.x, 5) == [8] * 5
    assert unscale(v)[pair_rank(1, 2, 5)] == Fraction(1, 2)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_injective(n):
    vecs = [vertex_vector(t).x for t in TREES[n]]
    assert len(set(vecs)) == len(vecs)


@given(trees(3, 7))
def test_entries_are_powers_of_two(t):
    n = t.n
    v = vertex_vector(t)
    for (i, j), x in zip(pairs(n), v.x):
        assert x == 2 ** (n - 2 - t.path_internal_nodes(i, j))
        assert 1 <= x <= max(1, 2 ** (n - 3))
        assert (x == 2 ** (n - 3)) == (n > 3 and t.has_cherry(i, j)) or n == 3


@given(trees(3, 7))
def test_row_sums_and_total(t):
    n = t.n
    x = vertex_vector(t).x
    assert row_sums(x, n) == [scale_factor(n)] * n
    assert sum(x) * 2 == n * 2 ** (n - 2)


@given(trees(3, 7))
def test_unscale_round_trip(t):
    v = vertex_vector(t)
    c = unscale(v)
    assert isinstance(c, PauplinVector)
    assert all(0 < e <= Fraction(1, 2) for e in c.c) or t.n == 3
    assert rescale(c) == v


@given(trees(3, 7))
def test_tree_recovery(t):
    assert tree_from_vertex_vector(vertex_vector(t)) == t
    assert tree_from_vertex_vector(list(vertex_vector(t).x), t.n) == t


@pytest.mark.parametrize("x", [(2, 2, 1, 1, 1, 1), (1, 1, 1, 1, 1, 1), (3, 1, 1, 1, 1, 3),
                               (2, 1, 1, 1, 1, Fraction(5, 2)), (4, 1, 1, 1, 1, 2)])
def test_not_a_vertex(x):
    with pytest.raises(NotAVertex):
        tree_from_vertex_vector(x, 4)


@given(trees(5, 6), st.data())
def test_perturbed_vertex_rejected(t, data):
    x = list(vertex_vector(t).x)
    k = data.draw(st.integers(0, len(x) - 1))
    x[k] = data.draw(st.sampled_from([x[k] * 2, Fraction(x[k], 2), x[k] + Fraction(1, 3)]))
    with pytest.raises(NotAVertex):
        tree_from_vertex_vector(x, t.n)


def test_inner_product_examples():
    t4 = parse_newick("((1,2),(3,4));")
    assert inner_product(vertex_vector(t4), DissimilarityMatrix(4, (1,) * 6)) == 8
    assert inner_product(vertex_vector(t4), DissimilarityMatrix(4, (0,) * 6)) == 0
    t5 = caterpillar([1, 2, 3, 4, 5])
    ind = [0] * 10
    ind[pair_rank(1, 2, 5)] = 1
    assert inner_product(vertex_vector(t5), DissimilarityMatrix(5, tuple(ind))) == 4
    assert inner_product(unscale(vertex_vector(t4)), DissimilarityMatrix(4, (1,) * 6)) == 2
    with pytest.raises(ValueError):
        inner_product(vertex_vector(t4), DissimilarityMatrix(5, (1,) * 10))


def test_vertex_vector_length_checked():
    with pytest.raises(ValueError):
        VertexVector(4, (1, 2, 3))


def test_text_and_json_round_trip():
    vs = [vertex_vector(t) for t in TREES[5]]
    text = vertices_to_text(vs, 5)
    assert text.splitlines()[0] == "n=5"
    assert vertices_from_text(text) == vs
    js = vertices_to_json(TREES[4])
    assert '"x_1_2"' in js and len(TREES[4]) == 3
    assert num_pairs(5) == len(text.splitlines()[1].split())
