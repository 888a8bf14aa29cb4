"""BME vertex vectors of trees, in scaled integer and Pauplin coordinates.

A tree ``t`` on ``n`` leaves maps to ``x_ij = 2**(n - 2 - l_ij)`` where
``l_ij`` counts the internal nodes between leaves ``i`` and ``j``; dividing
by ``2**(n - 2)`` gives the Pauplin weights ``c_ij = 2**(-l_ij)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dissimilarity import DissimilarityMatrix
from .trees import BinaryTree, num_pairs, pair_rank, pairs, star_join


class NotAVertex(ValueError):
    """The vector is not the vertex vector of any binary tree."""


@dataclass(frozen=True)
class VertexVector:
    n: int
    x: tuple[int, ...]

    def __post_init__(self):
        if len(self.x) != num_pairs(self.n):
            raise ValueError(f"vertex vector for n={self.n} needs {num_pairs(self.n)} entries")

    def __iter__(self):
        return iter(self.x)

    def __len__(self):
        return len(self.x)

    def __getitem__(self, k):
        return self.x[k]

    def entry(self, i: int, j: int) -> int:
        return self.x[pair_rank(i, j, self.n)]


@dataclass(frozen=True)
class PauplinVector:
    n: int
    c: tuple[Fraction, ...]

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k]


def scale_factor(n: int) -> int:
    return 2 ** (n - 2)


def vertex_vector(t: BinaryTree) -> VertexVector:
    n = t.n
    x = []
    for i in range(1, n):
        dist = t.leaf_distances(i)
        x.extend(2 ** (n - 2 - dist[j - 1]) for j in range(i + 1, n + 1))
    return VertexVector(n, tuple(x))


def unscale(v: VertexVector) -> PauplinVector:
    s = scale_factor(v.n)
    return PauplinVector(v.n, tuple(Fraction(x, s) for x in v.x))


def rescale(c: PauplinVector) -> VertexVector:
    s = scale_factor(c.n)
    out = []
    for value in c.c:
        x = value * s
        if x.denominator != 1:
            raise ValueError(f"{value} does not rescale to an integer")
        out.append(int(x))
    return VertexVector(c.n, tuple(out))


def row_sums(v: Sequence, n: int) -> list:
    """Sum of coordinates x_ij over j != i, for each leaf i."""
    sums = [0] * n
    for (i, j), x in zip(pairs(n), v):
        sums[i - 1] += x
        sums[j - 1] += x
    return sums


def row_sum_equalities(n: int) -> list[tuple[tuple[int, ...], int]]:
    """The affine-hull identities sum_{j != i} x_ij = 2**(n-2), one per leaf."""
    out = []
    for leaf in range(1, n + 1):
        coeffs = tuple(1 if leaf in p else 0 for p in pairs(n))
        out.append((coeffs, scale_factor(n)))
    return out


def _log2_exact(x) -> int | None:
    x = Fraction(x)
    if x.denominator != 1 or x.numerator <= 0:
        return None
    k = x.numerator
    if k & (k - 1):
        return None
    return k.bit_length() - 1


def tree_from_vertex_vector(v: Sequence, n: int | None = None) -> BinaryTree:
    """Recover the tree whose vertex vector is ``v`` or raise :class:`NotAVertex`.

    Cherries (pairs at one internal node) are collapsed into pseudo-leaves
    one at a time; the result is checked by recomputing its vertex vector.
    """
    if isinstance(v, VertexVector):
        n = v.n
        values = list(v.x)
    else:
        values = list(v)
        if n is None:
            n = _n_from_length(len(values))
    if len(values) != num_pairs(n):
        raise NotAVertex(f"length {len(values)} does not match n={n}")

    dist: dict[tuple[object, object], int] = {}
    for (i, j), x in zip(pairs(n), values):
        e = _log2_exact(x)
        if e is None or not 0 <= e <= n - 3:
            raise NotAVertex(f"x_{i}{j} = {x} is not a power of two in [1, 2^{n - 3}]")
        dist[(i, j)] = dist[(j, i)] = n - 2 - e

    nodes: list[object] = list(range(1, n + 1))
    subtree: dict[object, object] = {i: i for i in nodes}
    while len(nodes) > 3:
        cherry = None
        for a_idx, a in enumerate(nodes):
            for b in nodes[a_idx + 1:]:
                if dist[(a, b)] == 1:
                    cherry = (a, b)
                    break
            if cherry:
                break
        if cherry is None:
            raise NotAVertex(f"no cherry among {len(nodes)} remaining pseudo-leaves")
        a, b = cherry
        merged = ("c", a, b)
        rest = [u for u in nodes if u != a and u != b]
        for u in rest:
            if dist[(a, u)] != dist[(b, u)]:
                raise NotAVertex(f"cherry members disagree on their distance to {u}")
            d = dist[(a, u)] - 1
            if d < 1:
                raise NotAVertex("inconsistent path lengths after collapsing a cherry")
            dist[(merged, u)] = dist[(u, merged)] = d
        subtree[merged] = (subtree.pop(a), subtree.pop(b))
        nodes = rest + [merged]
    for a_idx, a in enumerate(nodes):
        for b in nodes[a_idx + 1:]:
            if dist[(a, b)] != 1:
                raise NotAVertex("last three pseudo-leaves are not pairwise adjacent")
    tree = star_join([subtree[u] for u in nodes], {})
    if tuple(vertex_vector(tree).x) != tuple(Fraction(x) for x in values):
        raise NotAVertex("reconstructed tree does not reproduce the vector")
    return tree


def _n_from_length(length: int) -> int:
    n = 2
    while num_pairs(n) < length:
        n += 1
    if num_pairs(n) != length:
        raise NotAVertex(f"length {length} is not a binomial C(n,2)")
    return n


def inner_product(v, d) -> Fraction:
    """Exact sum over pairs of v_ij * d_ij."""
    dv = d.values if isinstance(d, DissimilarityMatrix) else tuple(d)
    vv = v.x if isinstance(v, VertexVector) else v.c if isinstance(v, PauplinVector) else tuple(v)
    if len(vv) != len(dv):
        raise ValueError(f"dimension mismatch: {len(vv)} coordinates vs {len(dv)} dissimilarities")
    return sum((Fraction(a) * b for a, b in zip(vv, dv)), Fraction(0))


def vertices_to_text(vectors: Iterable[VertexVector], n: int) -> str:
    lines = [f"n={n}"]
    lines += [" ".join(str(x) for x in v.x) for v in vectors]
    return "\n".join(lines) + "\n"


def vertices_from_text(text: str) -> list[VertexVector]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("vertex file must start with a 'n=<n>' header")
    n = int(lines[0][2:])
    return [VertexVector(n, tuple(int(t) for t in ln.split())) for ln in lines[1:]]


def vertices_to_json(trees: Sequence[BinaryTree]) -> str:
    n = trees[0].n if trees else 0
    labels = [f"x_{i}_{j}" for i, j in pairs(n)]
    rows = [{"tree": t.newick(), "x": dict(zip(labels, vertex_vector(t).x))} for t in trees]
    return json.dumps({"n": n, "pairs": labels, "vertices": rows}, indent=2)
