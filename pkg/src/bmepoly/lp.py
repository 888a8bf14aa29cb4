"""Exact two-phase primal simplex with Bland's anti-cycling rule.

Tableau rows are stored as lists of Python integers sharing one positive
denominator per row, which keeps pivoting in integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class IterationLimit(RuntimeError):
    pass


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    iterations: int = 0
    tight_ub: list[int] = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _as_int_row(values: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(v.denominator for v in values))
    return [v.numerator * (den // v.denominator) for v in values], den


def _reduce(row: list[int], den: int) -> tuple[list[int], int]:
    g = gcd(den, *row)
    if g > 1:
        return [x // g for x in row], den // g
    return row, den


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int):
        self.rows: list[list[int]] = []
        self.dens: list[int] = []
        for r in rows:
            nums, den = _as_int_row(r)
            self.rows.append(nums)
            self.dens.append(den)
        self.basis = basis
        self.ncols = ncols
        self.obj: list[int] = [0] * (ncols + 1)
        self.obj_den = 1
        self.iterations = 0

    def set_objective(self, cost: Sequence[Fraction]) -> None:
        """Reduced-cost row for ``cost`` given the current basis."""
        obj = [Fraction(c) for c in cost] + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = obj[b]
            if cb:
                f = cb / self.dens[i]
                obj = [o - f * x for o, x in zip(obj, self.rows[i])]
        self.obj, self.obj_den = _as_int_row(obj)

    def pivot(self, r: int, col: int) -> None:
        prow = self.rows[r]
        pc = prow[col]
        if pc < 0:
            prow = [-x for x in prow]
            pc = -pc
        prow, pc_den = _reduce(prow, pc)
        # the pivot row now reads prow / pc_den with prow[col] == pc_den
        self.rows[r] = prow
        self.dens[r] = pc_den
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[col]
            if f:
                new = [x * pc_den - f * y for x, y in zip(row, prow)]
                self.rows[i], self.dens[i] = _reduce(new, self.dens[i] * pc_den)
        f = self.obj[col]
        if f:
            new = [x * pc_den - f * y for x, y in zip(self.obj, prow)]
            self.obj, self.obj_den = _reduce(new, self.obj_den * pc_den)
        self.basis[r] = col
        self.iterations += 1

    def run(self, allowed: int, max_iter: int | None) -> str:
        """Bland's rule on columns ``0..allowed-1``."""
        while True:
            col = next((j for j in range(allowed) if self.obj[j] < 0), None)
            if col is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = Fraction(row[-1], a)
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            if max_iter is not None and self.iterations >= max_iter:
                raise IterationLimit(f"simplex exceeded {max_iter} pivots")
            self.pivot(best[1], col)

    def value_of(self, col: int) -> Fraction:
        for i, b in enumerate(self.basis):
            if b == col:
                return Fraction(self.rows[i][-1], self.dens[i])
        return Fraction(0)


def solve_lp(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
             lower: Sequence | None = None, upper: Sequence | None = None,
             max_iter: int | None = None) -> LPResult:
    """Minimize ``c . x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq``, ``lower <= x <= upper``.

    ``lower`` defaults to zero; entries of ``upper`` may be ``None``.
    Entering and leaving variables are chosen by Bland's rule over the
    column order structural variables first, then slacks.
    """
    nvar = len(c)
    c = [Fraction(x) for x in c]
    lo = [Fraction(0)] * nvar if lower is None else [Fraction(x) for x in lower]
    hi = [None] * nvar if upper is None else [None if u is None else Fraction(u) for u in upper]

    # rows over the shifted variables s = x - lower >= 0
    raw: list[tuple[list[Fraction], str, Fraction]] = []
    for a, b in zip(A_ub, b_ub):
        a = [Fraction(x) for x in a]
        raw.append((a, "<=", Fraction(b) - sum(x * l for x, l in zip(a, lo))))
    for a, b in zip(A_eq, b_eq):
        a = [Fraction(x) for x in a]
        raw.append((a, "=", Fraction(b) - sum(x * l for x, l in zip(a, lo))))
    for j, u in enumerate(hi):
        if u is None:
            continue
        if u < lo[j]:
            return LPResult(INFEASIBLE)
        a = [Fraction(0)] * nvar
        a[j] = Fraction(1)
        raw.append((a, "<=", u - lo[j]))

    rows_spec = []
    for a, rel, b in raw:
        if b < 0:
            a = [-x for x in a]
            b = -b
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows_spec.append((a, rel, b))

    n_slack = sum(1 for _, rel, _ in rows_spec if rel != "=")
    n_art = sum(1 for _, rel, _ in rows_spec if rel != "<=")
    ncols = nvar + n_slack + n_art
    rows, basis = [], []
    si, ai = nvar, nvar + n_slack
    art_cols = []
    for a, rel, b in rows_spec:
        row = a + [Fraction(0)] * (n_slack + n_art) + [b]
        if rel == "<=":
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if rel == ">=":
                row[si] = Fraction(-1)
                si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        rows.append(row)

    tab = _Tableau(rows, basis, ncols)
    if art_cols:
        phase1 = [Fraction(0)] * ncols
        for j in art_cols:
            phase1[j] = Fraction(1)
        tab.set_objective(phase1)
        tab.run(ncols, max_iter)
        if tab.obj[-1] != 0:
            return LPResult(INFEASIBLE, iterations=tab.iterations)
        first_art = nvar + n_slack
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= first_art:
                col = next((j for j in range(first_art) if tab.rows[i][j] != 0), None)
                if col is None:
                    del tab.rows[i], tab.dens[i], tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1
        allowed = first_art
    else:
        allowed = ncols
    tab.set_objective(c + [Fraction(0)] * (ncols - nvar))
    status = tab.run(allowed, max_iter)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=tab.iterations)
    x = tuple(lo[j] + tab.value_of(j) for j in range(nvar))
    value = sum((cj * xj for cj, xj in zip(c, x)), Fraction(0))
    tight = [k for k, (a, b) in enumerate(zip(A_ub, b_ub))
             if sum(Fraction(p) * q for p, q in zip(a, x)) == Fraction(b)]
    return LPResult(OPTIMAL, value, x, tab.iterations, tight)
