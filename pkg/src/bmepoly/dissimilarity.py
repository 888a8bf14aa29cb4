"""Dissimilarity matrices: exact storage, file I/O and seeded random instances."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .trees import num_pairs, pair_rank, pairs

DEFAULT_SEED = 20150601


class DissimilarityError(ValueError):
    """Malformed or inconsistent dissimilarity input."""


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric nonnegative matrix stored as its upper triangle.

    ``values`` follows the lexicographic pair order d_12, d_13, ..., d_{n-1,n}.
    """

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 3:
            raise DissimilarityError("need at least 3 taxa")
        if len(self.values) != num_pairs(self.n):
            raise DissimilarityError(
                f"expected {num_pairs(self.n)} entries for n={self.n}, got {len(self.values)}")
        vals = tuple(Fraction(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise DissimilarityError("dissimilarities must be nonnegative")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_square(cls, rows: Sequence[Sequence]) -> "DissimilarityMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DissimilarityError("square matrix rows have unequal lengths")
        m = [[Fraction(x) for x in r] for r in rows]
        for i in range(n):
            if m[i][i] != 0:
                raise DissimilarityError(f"diagonal entry ({i + 1},{i + 1}) is not zero")
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise DissimilarityError(f"matrix is not symmetric at ({i + 1},{j + 1})")
        return cls(n, tuple(m[i - 1][j - 1] for i, j in pairs(n)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i == j:
            return Fraction(0)
        return self.values[pair_rank(i, j, self.n)]

    def square(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def scaled(self, factor) -> "DissimilarityMatrix":
        return DissimilarityMatrix(self.n, tuple(v * factor for v in self.values))

    def shifted(self, amount) -> "DissimilarityMatrix":
        return DissimilarityMatrix(self.n, tuple(v + amount for v in self.values))

    def to_text(self) -> str:
        return f"{self.n}\n" + " ".join(str(v) for v in self.values) + "\n"


def parse_number(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise DissimilarityError(f"cannot read {token!r} as a rational number") from None


def parse_dissimilarity(text: str) -> DissimilarityMatrix:
    """Read ``n`` followed by either the upper triangle or the full square matrix.

    Entries may be integers, ``p/q`` fractions or decimal strings; all are
    converted exactly.
    """
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    tokens = " ".join(lines).split()
    if not tokens:
        raise DissimilarityError("empty dissimilarity file")
    try:
        n = int(tokens[0])
    except ValueError:
        raise DissimilarityError(f"first token {tokens[0]!r} must be the taxon count") from None
    if n < 3:
        raise DissimilarityError(f"taxon count {n} must be at least 3")
    entries = [parse_number(t) for t in tokens[1:]]
    if len(entries) == num_pairs(n):
        return DissimilarityMatrix(n, tuple(entries))
    if len(entries) == n * n:
        return DissimilarityMatrix.from_square([entries[i * n:(i + 1) * n] for i in range(n)])
    raise DissimilarityError(
        f"n={n} needs {num_pairs(n)} upper-triangle or {n * n} square entries, got {len(entries)}")


def read_dissimilarity(path) -> DissimilarityMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_dissimilarity(fh.read())


def random_dissimilarity(n: int, rng: random.Random, max_numerator: int = 1000,
                         max_denominator: int = 16) -> DissimilarityMatrix:
    """Random rational matrix with entries p/q, 1 <= p <= max_numerator, 1 <= q <= max_denominator.

    ``rng`` is a :class:`random.Random` (Mersenne Twister); a fixed seed
    reproduces the instance exactly.
    """
    vals = tuple(Fraction(rng.randint(1, max_numerator), rng.randint(1, max_denominator))
                 for _ in range(num_pairs(n)))
    return DissimilarityMatrix(n, vals)


def random_instances(n: int, count: int, seed: int = DEFAULT_SEED) -> list[DissimilarityMatrix]:
    rng = random.Random(f"bme-{n}-{seed}")
    return [random_dissimilarity(n, rng) for _ in range(count)]
