"""Unrooted leaf-labeled binary trees on the taxa ``1..n``.

Leaves are node ids ``0..n-1`` (leaf id ``i`` carries label ``i + 1``);
internal nodes are ``n..2n-3``.  Trees are immutable and compare by their
canonical Newick serialization, which roots the tree at leaf 1 and orders
siblings by their smallest leaf label.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Iterable, Iterator, Sequence

MAX_ENUMERATION_N = 10


class TreeError(ValueError):
    """Invalid tree structure or query."""


class NewickError(TreeError):
    """Malformed Newick text."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DegreeError(TreeError):
    """A node has a degree other than 1 or 3."""


class LabelError(TreeError):
    """Leaf labels are duplicated, missing or not integers in 1..n."""


# ---------------------------------------------------------------------------
# Pair indexing
# ---------------------------------------------------------------------------

def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pairs(n: int) -> list[tuple[int, int]]:
    """All leaf pairs ``(i, j)`` with ``i < j`` in lexicographic order."""
    return list(itertools.combinations(range(1, n + 1), 2))


def pair_rank(i: int, j: int, n: int) -> int:
    """Position of the pair {i, j} in the lexicographic order of pairs."""
    if i == j:
        raise TreeError("pair needs two distinct labels")
    if i > j:
        i, j = j, i
    if not 1 <= i < j <= n:
        raise TreeError(f"pair ({i}, {j}) out of range for n={n}")
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


def pair_from_rank(rank: int, n: int) -> tuple[int, int]:
    i = 1
    while rank >= n - i:
        rank -= n - i
        i += 1
    return i, i + 1 + rank


def double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def num_trees(n: int) -> int:
    """Number of unrooted binary trees on ``n`` labeled leaves, (2n-5)!!."""
    return double_factorial(2 * n - 5) if n >= 3 else 0


# ---------------------------------------------------------------------------
# The tree type
# ---------------------------------------------------------------------------

class BinaryTree:
    """An unrooted binary tree with leaves labeled ``1..n``."""

    __slots__ = ("n", "adj", "key", "_splits")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 3:
            raise TreeError("a binary tree needs at least 3 leaves")
        num_nodes = 2 * n - 2
        adj: list[list[int]] = [[] for _ in range(num_nodes)]
        count = 0
        for u, v in edges:
            if not (0 <= u < num_nodes and 0 <= v < num_nodes) or u == v:
                raise TreeError(f"bad edge ({u}, {v})")
            adj[u].append(v)
            adj[v].append(u)
            count += 1
        if count != 2 * n - 3:
            raise TreeError(f"expected {2 * n - 3} edges, got {count}")
        for node, nbrs in enumerate(adj):
            want = 1 if node < n else 3
            if len(nbrs) != want:
                raise DegreeError(f"node {node} has degree {len(nbrs)}, expected {want}")
        self.n = n
        self.adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        if len(self._reachable(0)) != num_nodes:
            raise TreeError("tree is not connected")
        self.key = self._canonical_key()
        self._splits: frozenset[frozenset[int]] | None = None

    @classmethod
    def from_graph(cls, edges: Iterable[tuple[object, object]], labels: dict) -> "BinaryTree":
        """Build from an edge list over arbitrary node names.

        ``labels`` maps each leaf node name to its integer label; every other
        node is internal.
        """
        edges = list(edges)
        values = sorted(labels.values())
        n = len(values)
        if values != list(range(1, n + 1)):
            raise LabelError(f"leaf labels must be exactly 1..{n}, got {values}")
        ids: dict[object, int] = {node: label - 1 for node, label in labels.items()}
        nxt = n
        for u, v in edges:
            for node in (u, v):
                if node not in ids:
                    ids[node] = nxt
                    nxt += 1
        if nxt != 2 * n - 2:
            raise DegreeError(f"{nxt - n} internal nodes for {n} leaves; expected {n - 2}")
        return cls(n, [(ids[u], ids[v]) for u, v in edges])

    @classmethod
    def from_json(cls, obj: dict) -> "BinaryTree":
        labels = {int(k): int(v) for k, v in obj["leaf_labels"].items()}
        return cls.from_graph([tuple(e) for e in obj["edges"]], labels)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges()],
            "leaf_labels": {str(i): i + 1 for i in range(self.n)},
        }

    # -- basic structure ----------------------------------------------------

    def _reachable(self, start: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adj) for v in nbrs if u < v]

    def internal_edges(self) -> list[tuple[int, int]]:
        n = self.n
        return [(u, v) for u, v in self.edges() if u >= n and v >= n]

    def is_leaf(self, node: int) -> bool:
        return node < self.n

    def _side(self, u: int, v: int) -> frozenset[int]:
        """Leaf labels on the ``v`` side of edge (u, v)."""
        seen = {u, v}
        stack = [v]
        out = []
        while stack:
            w = stack.pop()
            if w < self.n:
                out.append(w + 1)
            for x in self.adj[w]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return frozenset(out)

    # -- canonical form -----------------------------------------------------

    def _canonical_key(self) -> str:
        def walk(node: int, parent: int) -> tuple[int, str]:
            if node < self.n:
                return node + 1, str(node + 1)
            kids = sorted(walk(c, node) for c in self.adj[node] if c != parent)
            return kids[0][0], "(" + ",".join(s for _, s in kids) + ")"

        hub = self.adj[0][0]
        kids = sorted(walk(c, hub) for c in self.adj[hub] if c != 0)
        return "(1," + ",".join(s for _, s in kids) + ");"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryTree):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other: "BinaryTree") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"BinaryTree({self.key!r})"

    def __str__(self) -> str:
        return self.key

    def newick(self) -> str:
        return self.key

    # -- queries ------------------------------------------------------------

    def leaf_distances(self, label: int) -> list[int]:
        """Number of internal nodes on the path from ``label`` to every leaf.

        Entry ``j - 1`` is for leaf ``j``; the entry for ``label`` itself is 0.
        """
        n = self.n
        start = label - 1
        depth = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if v not in depth:
                    depth[v] = depth[u] + 1
                    queue.append(v)
        # a path with e edges between two leaves passes e - 1 internal nodes
        return [0 if j == start else depth[j] - 1 for j in range(n)]

    def path_internal_nodes(self, i: int, j: int) -> int:
        if i == j:
            raise TreeError("path needs two distinct leaves")
        self._check_label(i)
        self._check_label(j)
        return self.leaf_distances(i)[j - 1]

    def _check_label(self, label: int) -> None:
        if not 1 <= label <= self.n:
            raise LabelError(f"leaf {label} not in 1..{self.n}")

    def cherries(self) -> set[frozenset[int]]:
        """Leaf pairs sharing an internal neighbour.

        For ``n = 3`` every pair is returned.
        """
        n = self.n
        out = set()
        for u in range(n, 2 * n - 2):
            leaves = [v + 1 for v in self.adj[u] if v < n]
            for a, b in itertools.combinations(leaves, 2):
                out.add(frozenset((a, b)))
        return out

    def has_cherry(self, a: int, b: int) -> bool:
        return self.adj[a - 1][0] == self.adj[b - 1][0] and a != b

    def splits(self) -> frozenset[frozenset[int]]:
        """Leaf sets on both sides of every internal edge."""
        if self._splits is None:
            out = set()
            for u, v in self.internal_edges():
                out.add(self._side(u, v))
                out.add(self._side(v, u))
            self._splits = frozenset(out)
        return self._splits

    def displays_clade(self, clade: Iterable[int]) -> bool:
        clade = frozenset(clade)
        if not 2 <= len(clade) <= self.n - 2:
            raise TreeError(f"clade size {len(clade)} outside 2..{self.n - 2}")
        for label in clade:
            self._check_label(label)
        return clade in self.splits()

    def is_caterpillar(self) -> bool:
        return self.n <= 4 or len(self.cherries()) == 2

    def caterpillar_ends(self) -> tuple[frozenset[int], frozenset[int]]:
        if self.n < 4 or not self.is_caterpillar():
            raise TreeError("tree is not a caterpillar with two ends")
        a, b = sorted(self.cherries(), key=sorted)
        return a, b

    def coplanar_with_cycle(self, cycle: Sequence[int]) -> bool:
        """True iff every clade is a contiguous arc of the circular order."""
        if sorted(cycle) != list(range(1, self.n + 1)):
            raise LabelError(f"cycle {list(cycle)} is not a permutation of 1..{self.n}")
        return all(is_arc(side, cycle) for side in self.splits())

    def circular_order(self) -> list[int]:
        """Leaf labels read around one planar embedding."""
        out = []
        stack = [(0, -1)]
        while stack:
            node, parent = stack.pop()
            if node < self.n:
                out.append(node + 1)
            stack.extend((c, node) for c in reversed(self.adj[node]) if c != parent)
        return out

    def nni_neighbors(self) -> set["BinaryTree"]:
        out = set()
        for u, v in self.internal_edges():
            a, b = (x for x in self.adj[u] if x != v)
            c, d = (x for x in self.adj[v] if x != u)
            for swap in (c, d):
                edges = []
                for x, y in self.edges():
                    e = {x, y}
                    if e == {u, b}:
                        edges.append((u, swap))
                    elif e == {v, swap}:
                        edges.append((v, b))
                    else:
                        edges.append((x, y))
                out.add(BinaryTree(self.n, edges))
        return out


def is_arc(subset: frozenset[int], cycle: Sequence[int]) -> bool:
    """Whether ``subset`` occupies consecutive positions of the circular ``cycle``."""
    if not subset or len(subset) == len(cycle):
        return True
    starts = sum(
        1 for k in range(len(cycle))
        if cycle[k] in subset and cycle[k - 1] not in subset
    )
    return starts == 1


# ---------------------------------------------------------------------------
# Enumeration and construction
# ---------------------------------------------------------------------------

def _insertion_edge_lists(n: int) -> Iterator[list[tuple[int, int]]]:
    center = n
    start = [(0, center), (1, center), (2, center)]

    def grow(edges: list[tuple[int, int]], k: int) -> Iterator[list[tuple[int, int]]]:
        if k == n:
            yield edges
            return
        w = n + k - 2
        for idx, (u, v) in enumerate(edges):
            new = edges[:idx] + edges[idx + 1:] + [(u, w), (w, v), (w, k)]
            yield from grow(new, k + 1)

    yield from grow(start, 3)


def enumerate_trees(n: int, cap: int = MAX_ENUMERATION_N) -> list[BinaryTree]:
    """All (2n-5)!! binary trees on leaves 1..n, sorted by canonical key."""
    if n < 3 or n > cap:
        raise TreeError(f"n={n} outside the enumeration range 3..{cap}")
    return sorted(BinaryTree(n, edges) for edges in _insertion_edge_lists(n))


def caterpillar(order: Sequence[int]) -> BinaryTree:
    """Caterpillar whose leaves read ``order`` along the spine.

    ``order[0], order[1]`` form one cherry and ``order[-2], order[-1]`` the other.
    """
    n = len(order)
    if n < 3:
        raise TreeError("caterpillar needs at least 3 leaves")
    edges = [(("s", 0), ("l", order[0])), (("s", 0), ("l", order[1]))]
    for k in range(1, n - 2):
        edges.append((("s", k - 1), ("s", k)))
        edges.append((("s", k), ("l", order[k + 1])))
    edges.append((("s", n - 3), ("l", order[-1])))
    return BinaryTree.from_graph(edges, {("l", x): x for x in order})


def star_join(parts: Sequence[object], labels: dict) -> BinaryTree:
    """Tree from nested tuples; the top level may have 2 or 3 parts."""
    edges: list[tuple[object, object]] = []
    leaf_nodes: dict = {}
    counter = itertools.count()

    def build(part) -> object:
        if isinstance(part, tuple):
            node = ("i", next(counter))
            for child in part:
                edges.append((node, build(child)))
            return node
        node = ("l", part)
        leaf_nodes[node] = labels.get(part, part)
        return node

    if len(parts) == 2:
        a, b = (build(p) for p in parts)
        edges.append((a, b))
    else:
        build(tuple(parts))
    return BinaryTree.from_graph(edges, leaf_nodes)


def enumerate_constrained_trees(n: int, fixed_cherries: Iterable[Iterable[int]]) -> list[BinaryTree]:
    """All trees on 1..n displaying every cherry in ``fixed_cherries``.

    Each fixed cherry is collapsed to a pseudo-leaf, trees on the reduced
    leaf set are enumerated, and the pseudo-leaves are expanded again.
    """
    cherries = [tuple(sorted(set(c))) for c in fixed_cherries]
    seen: set[int] = set()
    for c in cherries:
        if len(c) != 2:
            raise TreeError(f"cherry {c} must have two distinct leaves")
        if seen.intersection(c):
            raise TreeError(f"cherries overlap at {sorted(seen.intersection(c))}; "
                            "intersecting cherries cannot share a tree")
        for label in c:
            if not 1 <= label <= n:
                raise LabelError(f"leaf {label} not in 1..{n}")
        seen.update(c)
    items: list[object] = [c for c in sorted(cherries)]
    items += [x for x in range(1, n + 1) if x not in seen]
    m = len(items)
    if m == 2:
        return [star_join(items, {})]
    out = []
    for small in enumerate_trees(m, cap=max(m, MAX_ENUMERATION_N)):
        edges = []
        for u, v in small.edges():
            edges.append((_expand_name(u, m, items), _expand_name(v, m, items)))
        labels = {}
        for idx, item in enumerate(items):
            if isinstance(item, tuple):
                for x in item:
                    edges.append((("p", idx), ("l", x)))
                    labels[("l", x)] = x
            else:
                labels[("p", idx)] = item
        out.append(BinaryTree.from_graph(edges, labels))
    return sorted(out)


def _expand_name(node: int, m: int, items: list) -> object:
    return ("p", node) if node < m else ("i", node)


def num_constrained_trees(n: int, k: int) -> int:
    """Trees displaying ``k`` fixed disjoint cherries."""
    m = n - k
    return 1 if m == 2 else num_trees(m)


# ---------------------------------------------------------------------------
# Newick
# ---------------------------------------------------------------------------

def parse_newick(text: str) -> BinaryTree:
    """Parse a Newick string with integer leaf labels.

    A rooted binary tree (bifurcating root) is unrooted by suppressing the
    root.  Branch lengths and internal node labels are discarded.
    """
    s = text.strip()
    pos = 0
    edges: list[tuple[int, int]] = []
    labels: dict[int, int] = {}
    counter = itertools.count()

    def skip_ws() -> None:
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def read_name() -> str:
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos] not in "(),:;" and not s[pos].isspace():
            pos += 1
        return s[start:pos]

    def skip_length() -> None:
        nonlocal pos
        skip_ws()
        if pos < len(s) and s[pos] == ":":
            pos += 1
            skip_ws()
            start = pos
            length = read_name()
            try:
                float(length)
            except ValueError:
                raise NewickError(f"bad branch length {length!r}", start) from None
            skip_ws()

    def subtree() -> int:
        nonlocal pos
        skip_ws()
        node = next(counter)
        if pos < len(s) and s[pos] == "(":
            pos += 1
            while True:
                child = subtree()
                edges.append((node, child))
                skip_ws()
                if pos >= len(s):
                    raise NewickError("unexpected end of input", pos)
                if s[pos] == ",":
                    pos += 1
                    continue
                if s[pos] == ")":
                    pos += 1
                    break
                raise NewickError(f"unexpected character {s[pos]!r}", pos)
            skip_ws()
            read_name()
        else:
            start = pos
            name = read_name()
            if not name:
                raise NewickError("expected a leaf label", start)
            try:
                label = int(name)
            except ValueError:
                raise LabelError(f"leaf label {name!r} at position {start} is not an integer") from None
            if label in labels.values():
                raise LabelError(f"duplicate leaf label {label}")
            labels[node] = label
        skip_length()
        return node

    root = subtree()
    skip_ws()
    if pos >= len(s) or s[pos] != ";":
        raise NewickError("expected ';'", pos)
    pos += 1
    skip_ws()
    if pos != len(s):
        raise NewickError("trailing characters after ';'", pos)

    degree: dict[int, int] = {}
    for u, v in edges:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    if root not in labels and degree.get(root, 0) == 2:
        a, b = (v for u, v in edges if u == root)
        edges = [e for e in edges if root not in e] + [(a, b)]
        degree.pop(root)
    for node, deg in degree.items():
        want = 1 if node in labels else 3
        if deg != want:
            kind = "leaf" if node in labels else "internal node"
            raise DegreeError(f"{kind} with degree {deg} is not binary-compatible")
    if len(labels) < 3:
        raise LabelError("a tree needs at least 3 leaves")
    return BinaryTree.from_graph(edges, labels)


def format_newick(tree: BinaryTree) -> str:
    return tree.newick()
