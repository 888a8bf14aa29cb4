import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bmepoly.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, IterationLimit, solve_lp


def brute_force_box_lp(c, A, b, lo, hi):
    """Optimum over a 2-d box with extra cuts, by checking all candidate vertices."""
    rows = [(list(a), Fraction(bb)) for a, bb in zip(A, b)]
    rows += [([1, 0], hi[0]), ([-1, 0], -lo[0]), ([0, 1], hi[1]), ([0, -1], -lo[1])]
    best = None
    for (a1, b1), (a2, b2) in itertools.combinations(rows, 2):
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if det == 0:
            continue
        x = (Fraction(b1 * a2[1] - b2 * a1[1], det), Fraction(a1[0] * b2 - a2[0] * b1, det))
        if all(a[0] * x[0] + a[1] * x[1] <= bb for a, bb in rows):
            v = c[0] * x[0] + c[1] * x[1]
            best = v if best is None or v < best else best
    return best


def test_small_lp():
    res = solve_lp([-1, -1], [[1, 2], [3, 1]], [4, 6])
    assert res.status == OPTIMAL
    assert res.value == Fraction(-14, 5)
    assert res.x == (Fraction(8, 5), Fraction(6, 5))
    assert res.tight_ub == [0, 1]


def test_equalities_and_bounds():
    res = solve_lp([1, 2, 3], A_eq=[[1, 1, 1]], b_eq=[6], lower=[1, 1, 1], upper=[None, 2, 2])
    assert res.status == OPTIMAL and res.x == (4, 1, 1) and res.value == 9


def test_infeasible_and_unbounded():
    assert solve_lp([1], [[1]], [-1]).status == INFEASIBLE
    assert solve_lp([1, 1], A_eq=[[1, 1]], b_eq=[5], upper=[2, 2]).status == INFEASIBLE
    assert solve_lp([1], lower=[3], upper=[2]).status == INFEASIBLE
    assert solve_lp([-1, 0], [[0, 1]], [1]).status == UNBOUNDED


def test_redundant_equalities():
    res = solve_lp([1, 1], A_eq=[[1, 1], [2, 2]], b_eq=[3, 6])
    assert res.status == OPTIMAL and res.value == 3


def test_degenerate_cycling_example():
    # classic instance that cycles under the largest-coefficient rule
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    res = solve_lp(c, A, [0, 0, 1])
    assert res.status == OPTIMAL and res.value == Fraction(-1, 20)


def test_iteration_limit():
    with pytest.raises(IterationLimit):
        solve_lp([-1, -1], [[1, 2], [3, 1]], [4, 6], max_iter=0)


@settings(max_examples=80)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
       st.lists(st.tuples(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.integers(-3, 12)), max_size=4))
def test_random_2d_against_enumeration(c, cuts):
    A = [a for a, _ in cuts]
    b = [bb for _, bb in cuts]
    lo, hi = [Fraction(0), Fraction(-2)], [Fraction(5), Fraction(3)]
    res = solve_lp(c, A, b, lower=lo, upper=hi)
    want = brute_force_box_lp(c, A, b, lo, hi)
    if want is None:
        assert res.status == INFEASIBLE
    else:
        assert res.status == OPTIMAL and res.value == want
        assert all(sum(p * q for p, q in zip(a, res.x)) <= bb for a, bb in zip(A, b))
