"""Exact convex hulls by the double description method.

Points are first expressed in a coordinate frame of their affine hull (the
pivot coordinates of the row-reduced difference matrix), homogenized to
``(1, y)``, and the extreme rays of the dual cone ``{a : a . (1, y_i) >= 0}``
are built one generator at a time.  Each ray ``(a0, a')`` is the facet
``-a' . y <= a0``.  All arithmetic is on Python integers.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .linalg import dot, int_rank, inverse, nullspace, primitive, rref

log = logging.getLogger(__name__)

Row = tuple[Fraction, ...]


class BudgetExceeded(RuntimeError):
    """A step budget ran out; ``state`` can be passed back to resume."""

    def __init__(self, message: str, state: dict | None = None):
        super().__init__(message)
        self.state = state


@dataclass
class VPolytope:
    vertices: list[Row]

    def __post_init__(self):
        self.vertices = [tuple(Fraction(x) for x in v) for v in self.vertices]
        if self.vertices and len({len(v) for v in self.vertices}) != 1:
            raise ValueError("vertices have different lengths")

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0


@dataclass
class HPolytope:
    """Equalities ``a . x == b`` plus facet inequalities ``a . x <= b``."""

    ambient_dim: int
    equalities: list[tuple[Row, Fraction]]
    inequalities: list[tuple[Row, Fraction]]
    dim: int | None = None
    # indices into the source vertex list of the vertices on each facet
    facet_vertices: list[frozenset[int]] | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.inequalities)


def normalize(coeffs: Sequence, rhs) -> tuple[tuple[int, ...], int]:
    """Scale ``coeffs . x <= rhs`` to coprime integers (positive factor only)."""
    ints = primitive(list(coeffs) + [rhs])
    return tuple(ints[:-1]), ints[-1]


class AffineFrame:
    """Coordinates on the affine hull of a point set.

    ``pivots`` are ambient coordinates that parametrize the hull; every
    point of the hull is determined by its pivot coordinates.
    """

    def __init__(self, points: Sequence[Sequence]):
        pts = [tuple(Fraction(x) for x in p) for p in points]
        if not pts:
            raise ValueError("empty point set")
        self.ambient_dim = len(pts[0])
        self.base = pts[0]
        diffs = [[a - b for a, b in zip(p, self.base)] for p in pts[1:]]
        if diffs:
            self.basis, self.pivots = rref(diffs)
        else:
            self.basis, self.pivots = [], []
        self.dim = len(self.pivots)

    def project(self, p: Sequence) -> list[Fraction]:
        return [Fraction(p[k]) for k in self.pivots]

    def equalities(self) -> list[tuple[Row, Fraction]]:
        if self.dim == 0:
            rows = [[Fraction(int(i == j)) for j in range(self.ambient_dim)]
                    for i in range(self.ambient_dim)]
        else:
            rows = nullspace(self.basis, self.ambient_dim)
        red, _ = rref(rows) if rows else ([], [])
        out = []
        for r in red:
            a, b = normalize(r, dot(r, self.base))
            out.append((tuple(Fraction(x) for x in a), Fraction(b)))
        return out

    def reduce(self, coeffs: Sequence, rhs) -> tuple[list[Fraction], Fraction]:
        """Rewrite ``coeffs . x <= rhs`` in pivot coordinates, valid on the hull."""
        a = [Fraction(x) for x in coeffs]
        g = [dot(row, a) for row in self.basis]
        const = dot(a, self.base) - sum(gk * self.base[p] for gk, p in zip(g, self.pivots))
        return g, Fraction(rhs) - const

    def reduced_key(self, coeffs: Sequence, rhs) -> tuple[tuple[int, ...], int]:
        """Canonical form of an inequality as a function on the hull."""
        g, h = self.reduce(coeffs, rhs)
        return normalize(g, h)

    def lift(self, g: Sequence, rhs) -> tuple[Row, Fraction]:
        a = [Fraction(0)] * self.ambient_dim
        for gk, p in zip(g, self.pivots):
            a[p] = Fraction(gk)
        return tuple(a), Fraction(rhs)


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------

class DoubleDescription:
    """Incremental computation of the extreme rays of ``{a : G a >= 0}``.

    ``generators`` are integer rows of ``G``; the cone they generate must be
    full dimensional and pointed (as for homogenized affinely spanning
    points).  ``adjacency`` is ``"combinatorial"`` (no other ray's zero set
    contains the common zero set) or ``"algebraic"`` (rank test).
    """

    def __init__(self, generators: Sequence[Sequence[int]], adjacency: str = "combinatorial"):
        if adjacency not in ("combinatorial", "algebraic"):
            raise ValueError(f"unknown adjacency test {adjacency!r}")
        self.generators = [list(map(int, g)) for g in generators]
        self.adjacency = adjacency
        self.dim = len(self.generators[0])
        self.rays: list[list[int]] = []
        self.zeros: list[int] = []
        self.order: list[int] = []
        self.next = 0
        self.partial: dict | None = None
        self.steps = 0
        self._initialize()

    def _initialize(self) -> None:
        chosen: list[int] = []
        for idx, g in enumerate(self.generators):
            if int_rank([self.generators[c] for c in chosen] + [g]) > len(chosen):
                chosen.append(idx)
                if len(chosen) == self.dim:
                    break
        if len(chosen) != self.dim:
            raise ValueError("generators do not span a full-dimensional cone")
        inv = inverse([self.generators[c] for c in chosen])
        full = 0
        for c in chosen:
            full |= 1 << c
        for j in range(self.dim):
            self.rays.append(primitive([inv[i][j] for i in range(self.dim)]))
            self.zeros.append(full & ~(1 << chosen[j]))
        rest = [i for i in range(len(self.generators)) if i not in chosen]
        self.order = chosen + rest
        self.next = self.dim

    # -- checkpoints ----------------------------------------------------------

    def state(self) -> dict:
        return {
            "version": 1,
            "generators": self.generators,
            "adjacency": self.adjacency,
            "order": self.order,
            "next": self.next,
            "rays": self.rays,
            "zeros": self.zeros,
            "partial": self.partial,
            "steps": self.steps,
        }

    @classmethod
    def from_state(cls, state: dict) -> "DoubleDescription":
        obj = cls.__new__(cls)
        obj.generators = state["generators"]
        obj.adjacency = state["adjacency"]
        obj.dim = len(obj.generators[0])
        obj.order = state["order"]
        obj.next = state["next"]
        obj.rays = state["rays"]
        obj.zeros = state["zeros"]
        obj.partial = state["partial"]
        obj.steps = state.get("steps", 0)
        return obj

    def save(self, path: str) -> None:
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(self.state(), fh)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str) -> "DoubleDescription":
        with open(path, encoding="utf-8") as fh:
            return cls.from_state(json.load(fh))

    # -- main loop ------------------------------------------------------------

    def _adjacent(self, p: int, q: int, common: int) -> bool:
        need = self.dim - 2
        if common.bit_count() < need:
            return False
        if self.adjacency == "algebraic":
            rows = [self.generators[i] for i in _bits(common)]
            return int_rank(rows) == need
        for r, z in enumerate(self.zeros):
            if r != p and r != q and z & common == common:
                return False
        return True

    def run(self, max_steps: int | None = None, checkpoint: str | None = None,
            checkpoint_every: int = 1000) -> None:
        """Insert the remaining generators.

        One step is one candidate pair of rays examined.  A checkpoint is
        written whenever ``checkpoint_every`` steps have accumulated, at the
        next point where the state is consistent.
        """
        budget_start = self.steps
        last_saved = self.steps
        while self.next < len(self.order):
            gi = self.order[self.next]
            g = self.generators[gi]
            vals = [dot(g, r) for r in self.rays]
            pos = [k for k, v in enumerate(vals) if v > 0]
            neg = [k for k, v in enumerate(vals) if v < 0]
            if self.partial is None:
                self.partial = {"i": 0, "rays": [], "zeros": []}
            new_rays = self.partial["rays"]
            new_zeros = self.partial["zeros"]
            bit = 1 << gi
            for ii in range(self.partial["i"], len(pos)):
                p = pos[ii]
                zp = self.zeros[p]
                vp = vals[p]
                for q in neg:
                    self.steps += 1
                    common = zp & self.zeros[q]
                    if not self._adjacent(p, q, common):
                        continue
                    vq = vals[q]
                    ray = [vp * b - vq * a for a, b in zip(self.rays[p], self.rays[q])]
                    k = gcd(*ray)
                    if k > 1:
                        ray = [x // k for x in ray]
                    new_rays.append(ray)
                    new_zeros.append(common | bit)
                self.partial["i"] = ii + 1
                if checkpoint and self.steps - last_saved >= checkpoint_every:
                    self.save(checkpoint)
                    last_saved = self.steps
                if max_steps is not None and self.steps - budget_start >= max_steps:
                    if checkpoint:
                        self.save(checkpoint)
                    raise BudgetExceeded(
                        f"step budget {max_steps} exhausted while inserting generator "
                        f"{self.next + 1}/{len(self.order)}", self.state())
            keep = [k for k, v in enumerate(vals) if v >= 0]
            self.rays = [self.rays[k] for k in keep] + new_rays
            self.zeros = [self.zeros[k] | (bit if vals[k] == 0 else 0) for k in keep] + new_zeros
            self.partial = None
            self.next += 1
            log.debug("generator %d/%d: %d rays", self.next, len(self.order), len(self.rays))
        if checkpoint:
            self.save(checkpoint)

    @property
    def done(self) -> bool:
        return self.next >= len(self.order)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def homogenized_generators(frame: AffineFrame, points: Sequence[Sequence]) -> list[list[int]]:
    return [primitive([1] + frame.project(p)) for p in points]


def hull_facets(v: VPolytope | Sequence[Sequence], *, adjacency: str = "combinatorial",
                max_steps: int | None = None, checkpoint: str | None = None,
                checkpoint_every: int = 1000, resume: bool = False) -> HPolytope:
    """Irredundant facet description of the convex hull of the given points.

    Facets are sorted lexicographically by their normalized integer
    coefficients.  With ``resume`` and an existing ``checkpoint`` file the
    computation continues from the saved state.
    """
    pts = v.vertices if isinstance(v, VPolytope) else VPolytope(list(v)).vertices
    frame = AffineFrame(pts)
    equalities = frame.equalities()
    if frame.dim == 0:
        return HPolytope(frame.ambient_dim, equalities, [], 0, [])
    if resume and checkpoint and os.path.exists(checkpoint):
        dd = DoubleDescription.load(checkpoint)
        if dd.generators != homogenized_generators(frame, pts):
            raise ValueError(f"checkpoint {checkpoint} belongs to a different point set")
    else:
        dd = DoubleDescription(homogenized_generators(frame, pts), adjacency=adjacency)
    dd.run(max_steps=max_steps, checkpoint=checkpoint, checkpoint_every=checkpoint_every)

    facets = []
    for ray, zeros in zip(dd.rays, dd.zeros):
        g = [-x for x in ray[1:]]
        a, b = frame.lift(g, ray[0])
        na, nb = normalize(a, b)
        facets.append((na, nb, frozenset(_bits(zeros))))
    facets.sort(key=lambda f: (f[0], f[1]))
    return HPolytope(
        ambient_dim=frame.ambient_dim,
        equalities=equalities,
        inequalities=[(tuple(Fraction(x) for x in a), Fraction(b)) for a, b, _ in facets],
        dim=frame.dim,
        facet_vertices=[z for _, _, z in facets],
    )


def vertex_enumeration(h: HPolytope) -> list[Row]:
    """Vertices of a bounded H-polytope, found without reference to any point list.

    The equalities are solved for their pivot variables; the inequalities in
    the remaining free variables ``y`` become the cone
    ``{(t, y) : t*b - a.y >= 0, t >= 0}``, whose extreme rays with ``t > 0``
    are the vertices.
    """
    n = h.ambient_dim
    eq_rows = [list(a) + [b] for a, b in h.equalities]
    red, piv = rref(eq_rows) if eq_rows else ([], [])
    if n in piv:
        return []
    free = [c for c in range(n) if c not in piv]

    def substitute(a: Sequence, b) -> tuple[list[Fraction], Fraction]:
        # x_p = rhs_r - sum_f red[r][f] x_f for each pivot p of row r
        a = [Fraction(x) for x in a]
        b = Fraction(b)
        for r, p in enumerate(piv):
            if a[p]:
                b -= a[p] * red[r][n]
                for f in free:
                    a[f] -= a[p] * red[r][f]
                a[p] = Fraction(0)
        return [a[f] for f in free], b

    if not free:
        point = [Fraction(0)] * n
        for r, p in enumerate(piv):
            point[p] = red[r][n]
        return [tuple(point)]
    gens = [primitive([1] + [0] * len(free))]
    for a, b in h.inequalities:
        g, rhs = substitute(a, b)
        gens.append(primitive([rhs] + [-x for x in g]))
    dd = DoubleDescription(gens)
    dd.run()
    out = []
    for ray in dd.rays:
        if ray[0] <= 0:
            raise ValueError("H-polytope is unbounded")
        y = {f: Fraction(x, ray[0]) for f, x in zip(free, ray[1:])}
        point = [Fraction(0)] * n
        for f, val in y.items():
            point[f] = val
        for r, p in enumerate(piv):
            point[p] = red[r][n] - sum(red[r][f] * y[f] for f in free)
        out.append(tuple(point))
    return sorted(out)
