"""Solvers for the BME problem: pick the tree t minimizing d . x(t).

Values are reported in scaled coordinates (``d . x``) and in Pauplin
coordinates (``d . c = d . x / 2**(n-2)``).
"""

from __future__ import annotations

import heapq
import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .coords import NotAVertex, inner_product, row_sum_equalities, scale_factor, tree_from_vertex_vector, vertex_vector
from .dissimilarity import DissimilarityMatrix
from .geometry.linalg import solve
from .inequalities import LinearConstraint, Tag, family_constraints
from .lp import INFEASIBLE, OPTIMAL, solve_lp
from .trees import (BinaryTree, caterpillar, enumerate_constrained_trees, enumerate_trees,
                    num_pairs, pair_rank, pairs)

log = logging.getLogger(__name__)

OPTIMAL_STATUS = "Optimal"
LOCAL_OPTIMUM = "LocalOptimum"
INCUMBENT = "Incumbent"

BRUTE_FORCE_CAP = 10


class SolverError(ValueError):
    pass


@dataclass
class SolveResult:
    best_tree: BinaryTree
    best_value: Fraction
    status: str
    stats: dict = field(default_factory=dict)
    lower_bound: Fraction | None = None

    @property
    def n(self) -> int:
        return self.best_tree.n

    @property
    def pauplin_value(self) -> Fraction:
        return self.best_value / scale_factor(self.n)

    def to_json(self) -> dict:
        out = {
            "tree": self.best_tree.newick(),
            "value_scaled": str(self.best_value),
            "value_pauplin": str(self.pauplin_value),
            "status": self.status,
            "stats": self.stats,
        }
        if self.lower_bound is not None:
            out["lower_bound_scaled"] = str(self.lower_bound)
        return out


def tree_value(t: BinaryTree, d: DissimilarityMatrix) -> Fraction:
    return inner_product(vertex_vector(t), d)


def objective_is_constant(d: DissimilarityMatrix) -> bool:
    """True when every tree has the same value.

    That happens exactly when d_ij = a_i + a_j for some a, because the
    vertex coordinates around each leaf always sum to 2**(n-2).
    """
    rows = [[1 if leaf in p else 0 for leaf in range(1, d.n + 1)] for p in pairs(d.n)]
    return solve(rows, list(d.values)) is not None


def smallest_key_tree(n: int) -> BinaryTree:
    """The tree with the smallest canonical key: the caterpillar 2,3,...,n-1 | 1,n."""
    return caterpillar([2, 3, *range(4, n), 1, n])


def _better(value: Fraction, tree: BinaryTree, best: tuple[Fraction, BinaryTree] | None) -> bool:
    return best is None or (value, tree.key) < (best[0], best[1].key)


def _check_n(d: DissimilarityMatrix, t: BinaryTree) -> None:
    if t.n != d.n:
        raise SolverError(f"tree has {t.n} leaves but the matrix has {d.n} taxa")


# ---------------------------------------------------------------------------
# Brute force and local search
# ---------------------------------------------------------------------------

def best_of(trees: Iterable[BinaryTree], d: DissimilarityMatrix) -> tuple[Fraction, BinaryTree] | None:
    best = None
    for t in trees:
        v = tree_value(t, d)
        if _better(v, t, best):
            best = (v, t)
    return best


def brute_force_bme(d: DissimilarityMatrix, cap: int = BRUTE_FORCE_CAP) -> SolveResult:
    """Evaluate every tree; ties go to the smallest canonical key."""
    if d.n > cap:
        raise SolverError(f"brute force is capped at n={cap} "
                          f"(n={d.n} has too many trees); use branch_and_bound")
    start = time.perf_counter()
    trees = enumerate_trees(d.n, cap=max(cap, d.n))
    value, tree = best_of(trees, d)
    stats = {"trees_evaluated": len(trees), "wall_time": time.perf_counter() - start}
    if objective_is_constant(d):
        stats["objective_constant"] = True
    return SolveResult(tree, value, OPTIMAL_STATUS, stats)


def nni_local_search(d: DissimilarityMatrix, start: BinaryTree) -> SolveResult:
    """Steepest descent over NNI moves; ties between moves go to the smallest key."""
    _check_n(d, start)
    t0 = time.perf_counter()
    current, value = start, tree_value(start, d)
    steps = 0
    trajectory = [value]
    while True:
        best = None
        for u in current.nni_neighbors():
            v = tree_value(u, d)
            if v < value and _better(v, u, best):
                best = (v, u)
        if best is None:
            break
        value, current = best
        trajectory.append(value)
        steps += 1
    stats = {"steps": steps, "trajectory": [str(v) for v in trajectory],
             "wall_time": time.perf_counter() - t0}
    return SolveResult(current, value, LOCAL_OPTIMUM, stats)


# ---------------------------------------------------------------------------
# LP relaxation
# ---------------------------------------------------------------------------

@dataclass
class RelaxationLP:
    """Minimize ``objective . x`` over the relaxation.

    Single-variable constraints (caterpillar ``x_ab >= 1`` and branching
    fixes) act as bounds; everything else becomes a tableau row.
    """

    n: int
    objective: tuple[Fraction, ...]
    equalities: list[LinearConstraint]
    inequalities: list[LinearConstraint]
    lower: list[Fraction]
    upper: list[Fraction]
    branching_fixes: list[LinearConstraint] = field(default_factory=list)

    def with_fixes(self, fixes: Iterable[LinearConstraint]) -> "RelaxationLP":
        return RelaxationLP(self.n, self.objective, self.equalities, self.inequalities,
                            self.lower, self.upper, self.branching_fixes + list(fixes))


@dataclass
class LPSolution:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None
    tight: list[LinearConstraint] = field(default_factory=list)
    iterations: int = 0
    rounds: int = 1


def row_sum_constraints(n: int) -> list[LinearConstraint]:
    out = []
    for leaf, (coeffs, rhs) in enumerate(row_sum_equalities(n), start=1):
        out.append(LinearConstraint(n, tuple((k, c) for k, c in enumerate(coeffs) if c), "=", rhs,
                                    Tag("rowsum", (leaf,))))
    return out


def build_relaxation(d: DissimilarityMatrix, constraints: Sequence[LinearConstraint] | None = None
                     ) -> RelaxationLP:
    """Row-sum equalities, box bounds 1 <= x <= 2**(n-3), and the given constraints.

    By default the constraints are all caterpillar and intersecting-cherry
    inequalities, plus the cyclic-ordering ones when n = 5.
    """
    n = d.n
    if n < 4:
        raise SolverError("the relaxation needs n >= 4")
    if constraints is None:
        constraints = family_constraints(n, "all")
    m = num_pairs(n)
    return RelaxationLP(n, tuple(d.values), row_sum_constraints(n), list(constraints),
                        [Fraction(1)] * m, [Fraction(2 ** (n - 3))] * m)


def cherry_fix(a: int, b: int, n: int) -> LinearConstraint:
    return LinearConstraint.from_pairs(n, {(min(a, b), max(a, b)): 1}, "=", 2 ** (n - 3),
                                       Tag("fix-cherry", (a, b)))


def not_cherry_fix(a: int, b: int, n: int) -> LinearConstraint:
    return LinearConstraint.from_pairs(n, {(min(a, b), max(a, b)): 1}, "<=", 2 ** (n - 4),
                                       Tag("fix-not-cherry", (a, b)))


def _split_bounds(lp: RelaxationLP, rows: Sequence[LinearConstraint]):
    lo, hi = list(lp.lower), list(lp.upper)
    multi = []
    for k in list(rows) + lp.branching_fixes:
        if len(k.coeffs) != 1:
            multi.append(k)
            continue
        (idx, c), = k.coeffs
        bound = k.rhs / c
        rel = k.relation
        if c < 0 and rel != "=":
            rel = "<=" if rel == ">=" else ">="
        if rel in (">=", "="):
            lo[idx] = max(lo[idx], bound)
        if rel in ("<=", "="):
            hi[idx] = min(hi[idx], bound)
    return lo, hi, multi


def _solve_rows(lp: RelaxationLP, rows: Sequence[LinearConstraint], max_iter: int | None):
    lo, hi, multi = _split_bounds(lp, rows)
    A_ub, b_ub = [], []
    A_eq, b_eq = [], []
    for k in multi:
        if k.relation == "=":
            A_eq.append(k.dense())
            b_eq.append(k.rhs)
        else:
            a, b = k.as_le()
            A_ub.append(a)
            b_ub.append(b)
    for k in lp.equalities:
        A_eq.append(k.dense())
        b_eq.append(k.rhs)
    return solve_lp(lp.objective, A_ub, b_ub, A_eq, b_eq, lo, hi, max_iter=max_iter)


def _tight_set(lp: RelaxationLP, x: Sequence[Fraction]) -> list[LinearConstraint]:
    return [k for k in lp.inequalities + lp.branching_fixes if k.is_tight(x)]


def lp_solve(lp: RelaxationLP, lazy: bool = False, max_iter: int | None = None) -> LPSolution:
    """Exact optimum of the relaxation.

    With ``lazy`` the multi-variable inequalities start out absent; after
    each solve the most violated one is added (first in list order on ties)
    until the point satisfies them all.
    """
    if not lazy:
        res = _solve_rows(lp, lp.inequalities, max_iter)
        if res.status != OPTIMAL:
            return LPSolution(res.status, iterations=res.iterations)
        return LPSolution(OPTIMAL, res.value, res.x, _tight_set(lp, res.x), res.iterations)

    singles = [k for k in lp.inequalities if len(k.coeffs) == 1]
    pool = [k for k in lp.inequalities if len(k.coeffs) != 1]
    active: list[LinearConstraint] = list(singles)
    total = 0
    rounds = 0
    while True:
        rounds += 1
        res = _solve_rows(lp, active, max_iter)
        total += res.iterations
        if res.status != OPTIMAL:
            return LPSolution(res.status, iterations=total, rounds=rounds)
        worst, worst_slack = None, Fraction(0)
        for k in pool:
            s = k.slack(res.x)
            if s < worst_slack:
                worst, worst_slack = k, s
        if worst is None:
            return LPSolution(OPTIMAL, res.value, res.x, _tight_set(lp, res.x), total, rounds)
        active.append(worst)
        pool.remove(worst)


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------

@dataclass
class BnBConfig:
    max_nodes: int | None = None
    time_limit: float | None = None
    small_n: int = 6
    lazy: bool = False
    warm_start: bool = False
    constraints: Sequence[LinearConstraint] | None = None


@dataclass(frozen=True)
class Node:
    cherries: frozenset[tuple[int, int]]
    forbidden: frozenset[tuple[int, int]]

    def fixes(self, n: int) -> list[LinearConstraint]:
        return ([cherry_fix(a, b, n) for a, b in sorted(self.cherries)]
                + [not_cherry_fix(a, b, n) for a, b in sorted(self.forbidden)])


def node_trees(n: int, node: Node) -> list[BinaryTree]:
    """Trees with every fixed cherry and none of the forbidden ones."""
    trees = enumerate_constrained_trees(n, node.cherries)
    return [t for t in trees if not any(t.has_cherry(a, b) for a, b in node.forbidden)]


def log2_fractionality(x: Fraction) -> Fraction:
    """Distance from x (>= 1) to the nearest power of two on either side."""
    lo = 1
    while lo * 2 <= x:
        lo *= 2
    if x == lo:
        return Fraction(0)
    return min(x - lo, 2 * lo - x)


def choose_branch_pair(x: Sequence[Fraction], n: int, node: Node) -> tuple[int, int] | None:
    """Pair whose coordinate is furthest from a power of two.

    Only pairs that are still free and could be a cherry are considered;
    ties go to the lowest pair rank.  When every candidate sits on a power
    of two, the candidate with the largest coordinate is taken.
    """
    used = {leaf for p in node.cherries for leaf in p}
    cands = [p for p in pairs(n)
             if p not in node.cherries and p not in node.forbidden and not used.intersection(p)]
    if not cands:
        return None
    scored = [(log2_fractionality(x[pair_rank(*p, n)]), -pair_rank(*p, n), p) for p in cands]
    best = max(scored)
    if best[0] > 0:
        return best[2]
    return max((x[pair_rank(*p, n)], -pair_rank(*p, n), p) for p in cands)[2]


def branch_and_bound(d: DissimilarityMatrix, config: BnBConfig | None = None) -> SolveResult:
    """Exact BME tree by LP-based branch and bound.

    Each node solves the relaxation with its fixes.  A node is closed when
    its LP is infeasible, its bound reaches the incumbent, or its optimum is
    a tree vertex.  Otherwise a pair {a,b} is branched on: one child fixes
    x_ab = 2**(n-3) (a cherry), the other x_ab <= 2**(n-4).  Nodes with
    fixed cherries and at most ``small_n`` pseudo-leaves are finished by
    enumerating their trees.
    """
    config = config or BnBConfig()
    n = d.n
    if n < 4:
        raise SolverError("branch and bound needs n >= 4")
    t0 = time.perf_counter()
    base = build_relaxation(d, config.constraints)
    stats = {"nodes": 0, "lp_solves": 0, "lp_iterations": 0, "enumerated_nodes": 0,
             "trees_enumerated": 0, "vertex_nodes": 0, "pruned_bound": 0,
             "pruned_infeasible": 0, "branched": 0}
    if objective_is_constant(d):
        stats["objective_constant"] = True
        tree = smallest_key_tree(n)
        stats["wall_time"] = time.perf_counter() - t0
        return SolveResult(tree, tree_value(tree, d), OPTIMAL_STATUS, stats, lower_bound=tree_value(tree, d))

    best: tuple[Fraction, BinaryTree] | None = None
    if config.warm_start:
        first = enumerate_constrained_trees(n, [(1, 2)])[0]
        local = nni_local_search(d, first)
        best = (local.best_value, local.best_tree)
        stats["warm_start_value"] = str(local.best_value)

    counter = itertools.count()
    heap: list[tuple[Fraction, int, Node]] = [(Fraction(-1), next(counter), Node(frozenset(), frozenset()))]
    budget_hit = False
    while heap:
        if config.max_nodes is not None and stats["nodes"] >= config.max_nodes:
            budget_hit = True
            break
        if config.time_limit is not None and time.perf_counter() - t0 > config.time_limit:
            budget_hit = True
            break
        parent_bound, _, node = heapq.heappop(heap)
        if best is not None and parent_bound >= best[0]:
            stats["pruned_bound"] += 1
            continue
        stats["nodes"] += 1

        if node.cherries and n - len(node.cherries) <= config.small_n:
            trees = node_trees(n, node)
            stats["enumerated_nodes"] += 1
            stats["trees_enumerated"] += len(trees)
            found = best_of(trees, d)
            if found and _better(found[0], found[1], best):
                best = found
            continue

        sol = lp_solve(base.with_fixes(node.fixes(n)), lazy=config.lazy)
        stats["lp_solves"] += 1
        stats["lp_iterations"] += sol.iterations
        if sol.status == INFEASIBLE:
            stats["pruned_infeasible"] += 1
            continue
        if best is not None and sol.value >= best[0]:
            stats["pruned_bound"] += 1
            continue
        try:
            tree = tree_from_vertex_vector(sol.point, n)
        except NotAVertex:
            tree = None
        if tree is not None:
            stats["vertex_nodes"] += 1
            if _better(sol.value, tree, best):
                best = (sol.value, tree)
            continue
        pair = choose_branch_pair(sol.point, n, node)
        if pair is None:
            trees = node_trees(n, node)
            stats["enumerated_nodes"] += 1
            stats["trees_enumerated"] += len(trees)
            found = best_of(trees, d)
            if found and _better(found[0], found[1], best):
                best = found
            continue
        stats["branched"] += 1
        heapq.heappush(heap, (sol.value, next(counter), Node(node.cherries | {pair}, node.forbidden)))
        heapq.heappush(heap, (sol.value, next(counter), Node(node.cherries, node.forbidden | {pair})))

    stats["wall_time"] = time.perf_counter() - t0
    if budget_hit:
        if best is None:
            local = nni_local_search(d, enumerate_constrained_trees(n, [(1, 2)])[0])
            best = (local.best_value, local.best_tree)
        bound = min([b for b, _, _ in heap] + [best[0]])
        bound = max(bound, Fraction(0)) if bound < 0 else bound
        stats["open_nodes"] = len(heap)
        stats["gap"] = str(best[0] - bound)
        return SolveResult(best[1], best[0], INCUMBENT, stats, lower_bound=bound)
    assert best is not None
    return SolveResult(best[1], best[0], OPTIMAL_STATUS, stats, lower_bound=best[0])
