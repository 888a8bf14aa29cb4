"""Text formats for V- and H-representations.

The layout follows the usual polyhedral-file convention::

    H-representation
    linearity 2 1 2
    begin
    5 4 rational
    b  -a1 -a2 -a3
    ...
    end

An H row ``b -a`` means ``b - a.x >= 0``; rows listed after ``linearity``
are equalities.  A V row is ``1 x1 x2 ...``.
"""

from __future__ import annotations

from fractions import Fraction

from .hull import HPolytope, VPolytope


class FormatError(ValueError):
    pass


def write_v(v: VPolytope) -> str:
    lines = ["V-representation", "begin", f"{len(v.vertices)} {v.ambient_dim + 1} rational"]
    lines += [" ".join(["1"] + [str(x) for x in p]) for p in v.vertices]
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_h(h: HPolytope) -> str:
    rows = [(a, b) for a, b in h.equalities] + list(h.inequalities)
    lines = ["H-representation"]
    if h.equalities:
        idx = " ".join(str(i + 1) for i in range(len(h.equalities)))
        lines.append(f"linearity {len(h.equalities)} {idx}")
    lines += ["begin", f"{len(rows)} {h.ambient_dim + 1} rational"]
    lines += [" ".join([str(b)] + [str(-x) for x in a]) for a, b in rows]
    lines.append("end")
    return "\n".join(lines) + "\n"


def _body(text: str, kind: str) -> tuple[list[str], list[list[Fraction]]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("*")]
    header = []
    try:
        start = lines.index("begin")
        end = lines.index("end")
    except ValueError:
        raise FormatError("missing begin/end block") from None
    header = lines[:start]
    if kind not in header:
        raise FormatError(f"expected a {kind} file")
    dims = lines[start + 1].split()
    m, d = int(dims[0]), int(dims[1])
    rows = []
    for ln in lines[start + 2:end]:
        try:
            row = [Fraction(t) for t in ln.split()]
        except ValueError:
            raise FormatError(f"bad row {ln!r}") from None
        if len(row) != d:
            raise FormatError(f"row {ln!r} has {len(row)} entries, expected {d}")
        rows.append(row)
    if len(rows) != m:
        raise FormatError(f"declared {m} rows, found {len(rows)}")
    return header, rows


def read_v(text: str) -> VPolytope:
    _, rows = _body(text, "V-representation")
    if any(r[0] != 1 for r in rows):
        raise FormatError("only points (leading 1) are supported, not rays")
    return VPolytope([tuple(r[1:]) for r in rows])


def read_h(text: str) -> HPolytope:
    header, rows = _body(text, "H-representation")
    lin: set[int] = set()
    for ln in header:
        if ln.startswith("linearity"):
            parts = ln.split()[1:]
            lin = {int(t) - 1 for t in parts[1:]}
    eqs, ineqs = [], []
    for k, r in enumerate(rows):
        entry = (tuple(-x for x in r[1:]), r[0])
        (eqs if k in lin else ineqs).append(entry)
    d = len(rows[0]) - 1 if rows else 0
    return HPolytope(d, eqs, ineqs)
