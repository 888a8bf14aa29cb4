from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bmepoly.dissimilarity import (DissimilarityError, DissimilarityMatrix, parse_dissimilarity,
                                   random_instances)


def test_upper_triangle_and_square_agree():
    tri = parse_dissimilarity("4\n1 2 3\n4 5\n6\n")
    sq = parse_dissimilarity("4\n0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 6 0\n")
    assert tri == sq
    assert tri[1, 4] == 3 and tri[4, 1] == 3 and tri[2, 2] == 0


def test_exact_number_parsing():
    d = parse_dissimilarity("# comment\n3\n0.1 1/3 2 # trailing\n")
    assert d.values == (Fraction(1, 10), Fraction(1, 3), Fraction(2))


@pytest.mark.parametrize("text", ["", "x\n1 2 3", "2\n1", "3\n1 2", "3\n1 2 -1", "3\n1 2 a",
                                  "3\n0 1 2\n1 0 3\n2 4 0\n", "3\n1 1 2\n1 0 3\n2 3 0\n", "3\n1 2 1/0"])
def test_malformed(text):
    with pytest.raises(DissimilarityError):
        parse_dissimilarity(text)


def test_random_instances_reproducible():
    a = random_instances(6, 5, seed=7)
    assert a == random_instances(6, 5, seed=7)
    assert a != random_instances(6, 5, seed=8)
    assert all(v > 0 for d in a for v in d.values)


@given(st.integers(3, 7), st.integers(0, 10 ** 6))
def test_text_round_trip(n, seed):
    d = random_instances(n, 1, seed)[0]
    assert parse_dissimilarity(d.to_text()) == d
    assert DissimilarityMatrix.from_square(d.square()) == d
