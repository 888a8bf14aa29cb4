"""Invariant checks run by ``bmepoly verify``."""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import comb, factorial
from typing import Callable

from .coords import row_sums, scale_factor, vertex_vector
from .geometry import (AffineFrame, affine_dimension, birkhoff_vertices, combinatorially_equivalent,
                       hull_facets, no_clade_facet_scan, polytope, simplex_vertices)
from .inequalities import (ValidityError, caterpillar_inequality, classify_facets, cyclic_ordering_inequality,
                           family_constraints, intersecting_cherry_inequality, predicted_tight_set,
                           tight_vertices, vertex_table)
from .trees import double_factorial, enumerate_trees

EXPECTED_TIGHT = {
    "caterpillar": lambda n: factorial(n - 2),
    "cherry": lambda n: 2 * double_factorial(2 * n - 7),
    "cyclic": lambda n: 5,
}


@dataclass
class Check:
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail, "seconds": round(self.seconds, 3)}


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except ValidityError as exc:
        ok, detail = False, f"invalid constraint: {exc}"
    return Check(name, ok, detail, time.perf_counter() - t0)


def check_tree_count(n: int) -> tuple[bool, str]:
    got = len(enumerate_trees(n))
    want = double_factorial(2 * n - 5)
    return got == want, f"{got} trees, expected {want}"


def check_row_sums(n: int) -> tuple[bool, str]:
    target = scale_factor(n)
    bad = [t.newick() for t in enumerate_trees(n)
           if any(s != target for s in row_sums(vertex_vector(t).x, n))]
    return not bad, f"all row sums equal {target}" if not bad else f"{len(bad)} trees fail, e.g. {bad[0]}"


def check_dimension(n: int) -> tuple[bool, str]:
    got = affine_dimension([x for _, x in ((t, vertex_vector(t).x) for t in enumerate_trees(n))])
    want = comb(n, 2) - n
    return got == want, f"dimension {got}, expected {want}"


def check_families(n: int) -> tuple[bool, str]:
    """Validity, tight counts, facet rank and the combinatorial tight-set description."""
    table = vertex_table(n)
    facet_dim = comb(n, 2) - n - 1
    problems = []
    counts = {}
    for k in family_constraints(n, "all"):
        cert = tight_vertices(k, table)
        fam = k.tag.family
        counts[fam] = counts.get(fam, 0) + 1
        if len(cert.tight_vertices) != EXPECTED_TIGHT[fam](n):
            problems.append(f"{k.tag}: {len(cert.tight_vertices)} tight")
        if cert.affine_dim != facet_dim:
            problems.append(f"{k.tag}: tight set has dimension {cert.affine_dim}")
        if set(cert.tight_vertices) != predicted_tight_set(k, n):
            problems.append(f"{k.tag}: tight set differs from its combinatorial description")
    summary = ", ".join(f"{c} {f}" for f, c in counts.items())
    return not problems, summary if not problems else "; ".join(problems[:3])


def check_hull(n: int) -> tuple[bool, str]:
    pts = [vertex_vector(t).x for t in enumerate_trees(n)]
    h = hull_facets(pts)
    cls = classify_facets(h, AffineFrame(pts), family_constraints(n, "all"))
    counts = {f: c for f, c in cls.counts.items() if c}
    expected = {4: 3, 5: 52}.get(n)
    ok = not cls.unmatched and (expected is None or len(h) == expected)
    return ok, f"{len(h)} facets, classified {counts}, {len(cls.unmatched)} unmatched"


def facet_polytope(constraint):
    """Vertex and facet description of the face cut out by a family constraint."""
    cert = tight_vertices(constraint, vertex_table(constraint.n))
    return polytope([vertex_vector(t).x for t in cert.tight_vertices])


def check_birkhoff() -> tuple[bool, str]:
    b3 = polytope(birkhoff_vertices(3).vertices)
    simplex = polytope(simplex_vertices(4).vertices)
    results = {
        "B(3) facets": len(b3[1]) == 9,
        "caterpillar ~ B(3)": bool(combinatorially_equivalent(facet_polytope(caterpillar_inequality(1, 2, 5)), b3)),
        "cherry ~ B(3)": bool(combinatorially_equivalent(
            facet_polytope(intersecting_cherry_inequality(1, 2, 3, 5)), b3)),
        "cyclic ~ simplex": bool(combinatorially_equivalent(
            facet_polytope(cyclic_ordering_inequality((1, 2, 3, 4, 5))), simplex)),
    }
    return all(results.values()), ", ".join(f"{k}: {v}" for k, v in results.items())


def check_clade_scan(n_max: int = 50) -> tuple[bool, str]:
    rep = no_clade_facet_scan(n_max)
    return rep.ok, f"{rep.checked} (n, k, y) triples up to n={n_max}, {len(rep.hits)} of facet dimension"


def run_checks(n: int, hull: bool | None = None) -> list[Check]:
    """The checks that apply to P_n; the full hull runs by default only for n <= 5."""
    if n < 4:
        raise ValueError("verify needs n >= 4")
    if hull is None:
        hull = n <= 5
    checks = [
        _timed(f"tree count n={n}", lambda: check_tree_count(n)),
        _timed(f"row sums n={n}", lambda: check_row_sums(n)),
        _timed(f"dimension n={n}", lambda: check_dimension(n)),
    ]
    if n >= 5:
        checks.append(_timed(f"family constraints n={n}", lambda: check_families(n)))
    if hull:
        checks.append(_timed(f"hull n={n}", lambda: check_hull(n)))
    if n == 5:
        checks.append(_timed("Birkhoff equivalences", check_birkhoff))
    checks.append(_timed("clade faces", check_clade_scan))
    return checks
