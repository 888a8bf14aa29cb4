"""Facet inequalities of BME polytopes and the faces they cut out.

Three families are generated, all in scaled coordinates ``x_ij``:

* caterpillar ``x_ab >= 1`` (tight on caterpillars with a and b at opposite ends),
* intersecting-cherry ``x_ab + x_bc - x_ac <= 2**(n-3)`` (tight on trees with
  cherry {a,b} or {b,c}),
* cyclic ordering ``x_ab + x_bc + x_cd + x_de + x_ea <= 13`` for n = 5
  (tight on the five trees drawn planar around the cycle).
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .coords import VertexVector, scale_factor, vertex_vector
from .geometry.hull import AffineFrame, HPolytope
from .geometry.linalg import affine_dimension
from .trees import (BinaryTree, TreeError, caterpillar, enumerate_constrained_trees,
                    enumerate_trees, num_pairs, pair_from_rank, pair_rank, pairs, star_join)

FAMILIES = ("caterpillar", "cherry", "cyclic")
RELATIONS = ("<=", ">=", "=")


class ValidityError(AssertionError):
    """A vertex of the polytope violates a supposedly valid inequality."""


class Tag(NamedTuple):
    family: str
    labels: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.family == "adhoc":
            return "adhoc"
        return f"{self.family}({','.join(map(str, self.labels))})"


@dataclass(frozen=True)
class LinearConstraint:
    """``sum coeffs[rank] * x[rank]  relation  rhs`` over pair coordinates."""

    n: int
    coeffs: tuple[tuple[int, Fraction], ...]
    relation: str
    rhs: Fraction
    tag: Tag = Tag("adhoc")

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}")
        items = {}
        for k, c in self.coeffs:
            if not 0 <= k < num_pairs(self.n):
                raise ValueError(f"coordinate index {k} out of range for n={self.n}")
            items[k] = items.get(k, 0) + Fraction(c)
        items = tuple(sorted((k, c) for k, c in items.items() if c != 0))
        if not items:
            raise ValueError("constraint has no nonzero coefficients")
        object.__setattr__(self, "coeffs", items)
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    @classmethod
    def from_pairs(cls, n: int, terms: dict[tuple[int, int], object], relation: str, rhs,
                   tag: Tag = Tag("adhoc")) -> "LinearConstraint":
        return cls(n, tuple((pair_rank(i, j, n), Fraction(c)) for (i, j), c in terms.items()),
                   relation, rhs, tag)

    def lhs(self, x: Sequence) -> Fraction:
        return sum((c * x[k] for k, c in self.coeffs), Fraction(0))

    def slack(self, x: Sequence) -> Fraction:
        """Nonnegative iff ``x`` satisfies the constraint (equalities: zero iff)."""
        value = self.lhs(x)
        return value - self.rhs if self.relation == ">=" else self.rhs - value

    def holds(self, x: Sequence) -> bool:
        s = self.slack(x)
        return s == 0 if self.relation == "=" else s >= 0

    def is_tight(self, x: Sequence) -> bool:
        return self.lhs(x) == self.rhs

    def dense(self) -> list[Fraction]:
        out = [Fraction(0)] * num_pairs(self.n)
        for k, c in self.coeffs:
            out[k] = c
        return out

    def as_le(self) -> tuple[list[Fraction], Fraction]:
        """Dense ``a . x <= b`` form (not meaningful for equalities)."""
        a = self.dense()
        if self.relation == ">=":
            return [-c for c in a], -self.rhs
        return a, self.rhs

    @property
    def unscaled_rhs(self) -> Fraction:
        """Right-hand side in Pauplin coordinates c_ij = x_ij / 2**(n-2)."""
        return self.rhs / scale_factor(self.n)

    def to_text(self) -> str:
        terms = []
        for k, c in self.coeffs:
            i, j = pair_from_rank(k, self.n)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = f"x_{i}_{j}" if mag == 1 else f"{mag}*x_{i}_{j}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return f"{self.tag} : {text} {self.relation} {self.rhs}"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "tag": {"family": self.tag.family, "labels": list(self.tag.labels)},
            "coeffs": {"x_%d_%d" % pair_from_rank(k, self.n): str(c) for k, c in self.coeffs},
            "relation": self.relation,
            "rhs": str(self.rhs),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearConstraint":
        n = obj["n"]
        terms = {}
        for name, c in obj["coeffs"].items():
            _, i, j = name.split("_")
            terms[(int(i), int(j))] = Fraction(c)
        tag = Tag(obj["tag"]["family"], tuple(obj["tag"]["labels"]))
        return cls.from_pairs(n, terms, obj["relation"], Fraction(obj["rhs"]), tag)


_TERM = re.compile(r"([+-])?\s*(?:([0-9/]+)\s*\*\s*)?x_(\d+)_(\d+)")
_LINE = re.compile(r"^\s*(\S+)\s*:\s*(.*?)\s*(<=|>=|=)\s*(-?[0-9/]+)\s*$")
_TAG = re.compile(r"^(\w+)(?:\(([\d,]*)\))?$")


def parse_constraint(line: str, n: int) -> LinearConstraint:
    m = _LINE.match(line)
    if not m:
        raise ValueError(f"cannot parse constraint line {line!r}")
    tag_text, body, relation, rhs = m.groups()
    tm = _TAG.match(tag_text)
    if not tm:
        raise ValueError(f"bad constraint tag {tag_text!r}")
    labels = tuple(int(t) for t in tm.group(2).split(",")) if tm.group(2) else ()
    terms: dict[tuple[int, int], Fraction] = {}
    pos = 0
    for tmatch in _TERM.finditer(body):
        if body[pos:tmatch.start()].strip():
            raise ValueError(f"unexpected text {body[pos:tmatch.start()]!r} in {line!r}")
        sign, coef, i, j = tmatch.groups()
        if sign is None and pos > 0:
            raise ValueError(f"missing operator before {tmatch.group(0).strip()!r} in {line!r}")
        c = Fraction(coef) if coef else Fraction(1)
        key = (min(int(i), int(j)), max(int(i), int(j)))
        terms[key] = terms.get(key, 0) + (-c if sign == "-" else c)
        pos = tmatch.end()
    if body[pos:].strip() or not terms:
        raise ValueError(f"cannot parse terms of {line!r}")
    return LinearConstraint.from_pairs(n, terms, relation, Fraction(rhs), Tag(tm.group(1), labels))


def constraints_to_text(constraints: Iterable[LinearConstraint]) -> str:
    return "".join(c.to_text() + "\n" for c in constraints)


def constraints_from_text(text: str, n: int) -> list[LinearConstraint]:
    return [parse_constraint(ln, n) for ln in text.splitlines()
            if ln.strip() and not ln.lstrip().startswith("#")]


def constraints_to_json(constraints: Iterable[LinearConstraint]) -> str:
    return json.dumps([c.to_json() for c in constraints], indent=2)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def caterpillar_inequality(a: int, b: int, n: int) -> LinearConstraint:
    if a == b:
        raise TreeError("caterpillar inequality needs two distinct leaves")
    if n < 4:
        raise TreeError("caterpillar inequalities need n >= 4")
    a, b = sorted((a, b))
    return LinearConstraint.from_pairs(n, {(a, b): 1}, ">=", 1, Tag("caterpillar", (a, b)))


def intersecting_cherry_inequality(a: int, b: int, c: int, n: int) -> LinearConstraint:
    """``x_ab + x_bc - x_ac <= 2**(n-3)``; ``b`` is the shared leaf."""
    if len({a, b, c}) != 3:
        raise TreeError("intersecting cherries need three distinct leaves")
    if n < 4:
        raise TreeError("intersecting-cherry inequalities need n >= 4")
    a, c = sorted((a, c))
    terms = {tuple(sorted((a, b))): 1, tuple(sorted((b, c))): 1, (a, c): -1}
    return LinearConstraint.from_pairs(n, terms, "<=", 2 ** (n - 3), Tag("cherry", (a, b, c)))


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation or reflection of a circular order."""
    seq = list(cycle)
    k = len(seq)
    variants = []
    for s in (seq, seq[::-1]):
        for r in range(k):
            variants.append(tuple(s[r:] + s[:r]))
    return min(variants)


def cyclic_ordering_inequality(cycle: Sequence[int]) -> LinearConstraint:
    n = len(cycle)
    if n != 5:
        raise NotImplementedError("cyclic-ordering facets are only established for n = 5")
    if sorted(cycle) != list(range(1, 6)):
        raise TreeError(f"{list(cycle)} is not a circular order of 1..5")
    cyc = canonical_cycle(cycle)
    terms = {tuple(sorted((cyc[k], cyc[(k + 1) % 5]))): 1 for k in range(5)}
    return LinearConstraint.from_pairs(5, terms, "<=", 13, Tag("cyclic", cyc))


def caterpillar_constraints(n: int) -> list[LinearConstraint]:
    return [caterpillar_inequality(a, b, n) for a, b in pairs(n)]


def intersecting_cherry_constraints(n: int) -> list[LinearConstraint]:
    out = []
    for b in range(1, n + 1):
        others = [x for x in range(1, n + 1) if x != b]
        for a, c in itertools.combinations(others, 2):
            out.append(intersecting_cherry_inequality(a, b, c, n))
    return out


def free_cyclic_orders(n: int) -> list[tuple[int, ...]]:
    """Canonical representatives of the (n-1)!/2 circular orders of 1..n."""
    return sorted({canonical_cycle((1,) + p) for p in itertools.permutations(range(2, n + 1))})


def cyclic_constraints(n: int = 5) -> list[LinearConstraint]:
    if n != 5:
        raise NotImplementedError("cyclic-ordering facets are only established for n = 5")
    return [cyclic_ordering_inequality(c) for c in free_cyclic_orders(5)]


def family_constraints(n: int, family: str = "all") -> list[LinearConstraint]:
    """Constraints of one family, or every family established for this n."""
    if family == "caterpillar":
        return caterpillar_constraints(n)
    if family == "cherry":
        return intersecting_cherry_constraints(n)
    if family == "cyclic":
        return cyclic_constraints(n)
    if family == "all":
        out = caterpillar_constraints(n) + intersecting_cherry_constraints(n)
        if n == 5:
            out += cyclic_constraints(5)
        return out
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Faces
# ---------------------------------------------------------------------------

@dataclass
class FaceCertificate:
    constraint: LinearConstraint
    tight_vertices: list[BinaryTree]
    affine_dim: int
    slack_count: int


def vertex_table(n: int) -> list[tuple[BinaryTree, VertexVector]]:
    return [(t, vertex_vector(t)) for t in enumerate_trees(n)]


def tight_vertices(k: LinearConstraint, vertices: Sequence[tuple[BinaryTree, VertexVector]]
                   ) -> FaceCertificate:
    """Split vertices into tight and slack ones; raise if any violates ``k``."""
    tight, tight_x, slack = [], [], 0
    for t, v in vertices:
        if v.n != k.n:
            raise ValueError(f"vertex for n={v.n} against constraint for n={k.n}")
        if not k.holds(v.x):
            raise ValidityError(f"tree {t.newick()} violates {k.to_text()}")
        if k.is_tight(v.x):
            tight.append(t)
            tight_x.append(v.x)
        else:
            slack += 1
    dim = affine_dimension(tight_x) if tight_x else -1
    return FaceCertificate(k, tight, dim, slack)


def caterpillars_with_ends(a: int, b: int, n: int) -> list[BinaryTree]:
    """The (n-2)! caterpillars with a and b in different cherries."""
    middle = [x for x in range(1, n + 1) if x not in (a, b)]
    return sorted({caterpillar([a, *perm, b]) for perm in itertools.permutations(middle)})


def planar_trees(cycle: Sequence[int]) -> list[BinaryTree]:
    """Trees drawable in the plane with leaves in the given circular order.

    Rooting at the first leaf, these are the binary bracketings of the rest.
    """
    first, rest = cycle[0], tuple(cycle[1:])

    def bracketings(seq: tuple[int, ...]) -> list[object]:
        if len(seq) == 1:
            return [seq[0]]
        out = []
        for cut in range(1, len(seq)):
            for left in bracketings(seq[:cut]):
                for right in bracketings(seq[cut:]):
                    out.append((left, right))
        return out

    return sorted({star_join([first, *br], {}) for br in bracketings(rest)})


def predicted_tight_set(k: LinearConstraint, n: int | None = None) -> set[BinaryTree]:
    """Tight vertices of a family constraint, generated without coordinates."""
    n = k.n if n is None else n
    fam, labels = k.tag
    if fam == "caterpillar":
        return set(caterpillars_with_ends(labels[0], labels[1], n))
    if fam == "cherry":
        a, b, c = labels
        return set(enumerate_constrained_trees(n, [(a, b)])) | set(
            enumerate_constrained_trees(n, [(b, c)]))
    if fam == "cyclic":
        return set(planar_trees(labels))
    raise NotImplementedError(f"no combinatorial description for tag {k.tag}")


def dedup_by_face(constraints: Iterable[LinearConstraint],
                  vertices: Sequence[tuple[BinaryTree, VertexVector]]) -> list[LinearConstraint]:
    """Keep the first constraint for each distinct tight vertex set."""
    seen = set()
    out = []
    for k in constraints:
        face = frozenset(t.key for t, v in vertices if k.is_tight(v.x))
        if face not in seen:
            seen.add(face)
            out.append(k)
    return out


@dataclass
class FacetClassification:
    counts: dict[str, int]
    matches: list[list[LinearConstraint]]
    unmatched: list[int]


def classify_facets(h: HPolytope, frame: AffineFrame, constraints: Sequence[LinearConstraint]
                    ) -> FacetClassification:
    """Match every hull facet to the family constraints defining it.

    Two inequalities match when they agree up to a positive factor once both
    are rewritten as functions on the affine hull (i.e. modulo its equalities).
    """
    by_key: dict[tuple, list[LinearConstraint]] = {}
    for k in constraints:
        a, b = k.as_le()
        by_key.setdefault(frame.reduced_key(a, b), []).append(k)
    counts = {f: 0 for f in FAMILIES}
    matches, unmatched = [], []
    for idx, (a, b) in enumerate(h.inequalities):
        found = by_key.get(frame.reduced_key(a, b), [])
        matches.append(found)
        if len({k.tag.family for k in found}) == 1:
            counts[found[0].tag.family] += 1
        else:
            unmatched.append(idx)
    return FacetClassification(counts, matches, unmatched)


# ---------------------------------------------------------------------------
# Caterpillar projection
# ---------------------------------------------------------------------------

def caterpillar_projection_matrix(n: int = 5) -> list[list[Fraction]]:
    """Linear map from P_n coordinates to P_{n-1} coordinates.

    Coordinates with leaf 3 are dropped; x_12 keeps its name and x_1i moves
    to x_1(i-1) with weight 1; any other x_ij goes to x_i'j' with weight 1/2,
    where labels above 3 shift down by one.
    """
    if n < 4:
        raise ValueError("projection needs n >= 4")
    m = n - 1
    A = [[Fraction(0)] * num_pairs(n) for _ in range(num_pairs(m))]

    def shift(x: int) -> int:
        return x - 1 if x > 3 else x

    for col, (i, j) in enumerate(pairs(n)):
        if 3 in (i, j):
            continue
        row = pair_rank(shift(i), shift(j), m)
        A[row][col] = Fraction(1) if i == 1 else Fraction(1, 2)
    return A


def apply_matrix(A: Sequence[Sequence[Fraction]], x: Sequence) -> tuple[Fraction, ...]:
    return tuple(sum((a * v for a, v in zip(row, x)), Fraction(0)) for row in A)


def caterpillar_subface_123(n: int) -> list[BinaryTree]:
    """Caterpillars with ends {1,3} and {.,2}: the face mapped onto P_{n-1}'s x_12 >= 1 facet."""
    middle = list(range(4, n + 1))
    return sorted({caterpillar([1, 3, *perm, 2]) for perm in itertools.permutations(middle)})
