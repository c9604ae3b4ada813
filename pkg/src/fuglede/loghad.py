"""Predicates and transforms on log-Hadamard matrices over Z_p.

A square matrix over Z_p is log-Hadamard when the difference of any two
distinct rows is equidistributed (every residue appears equally often).
Equivalence moves (all-one shifts on rows/columns plus row/column
permutations) preserve the property; dephasing normalizes the first row and
column to zero and attains the minimum rank in the equivalence class.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gfmat import GFMatrix, GFVector, rank


def is_equidistributed(v: GFVector) -> bool:
    """True iff every residue 0..p-1 appears exactly len(v)/p times."""
    n = len(v)
    p = v.p
    if n % p != 0:
        return False
    quota = n // p
    counts = [0] * p
    for e in v.entries:
        counts[e] += 1
        if counts[e] > quota:
            return False
    return True


def _is_balanced(entries: Sequence[int], p: int) -> bool:
    # same predicate on a raw residue sequence, avoiding GFVector overhead
    n = len(entries)
    if n % p != 0:
        return False
    quota = n // p
    counts = [0] * p
    for e in entries:
        counts[e] += 1
        if counts[e] > quota:
            return False
    return True


def is_log_hadamard(m: GFMatrix) -> bool:
    """Row-difference test: every pair of distinct rows differs equidistributedly.

    Non-square input returns False (callers that want a diagnostic check
    squareness themselves).
    """
    nrows, ncols = m.shape
    if nrows != ncols:
        return False
    p = m.p
    if nrows == 1:
        return True
    if ncols % p != 0:
        return False
    if p == 2:
        words = [sum(bit << j for j, bit in enumerate(row)) for row in m.rows]
        half = ncols // 2
        for i in range(nrows):
            wi = words[i]
            for j in range(i + 1, nrows):
                if (wi ^ words[j]).bit_count() != half:
                    return False
        return True
    rows = m.rows
    for i in range(nrows):
        ri = rows[i]
        for j in range(i + 1, nrows):
            rj = rows[j]
            if not _is_balanced([(a - b) % p for a, b in zip(ri, rj)], p):
                return False
    return True


def is_log_hadamard_by_columns(m: GFMatrix) -> bool:
    """Column-wise variant, kept as an independent cross-check of the row test."""
    nrows, ncols = m.shape
    if nrows != ncols:
        return False
    p = m.p
    if ncols == 1:
        return True
    if nrows % p != 0:
        return False
    cols = tuple(zip(*m.rows))
    for i in range(ncols):
        ci = cols[i]
        for j in range(i + 1, ncols):
            cj = cols[j]
            if not _is_balanced([(a - b) % p for a, b in zip(ci, cj)], p):
                return False
    return True


def dephase(m: GFMatrix) -> GFMatrix:
    """Normalize so the first row and first column are all zero.

    Subtracts row 0 from every row, then subtracts the resulting column 0
    from every column; both steps are equivalence moves, so the output is
    equivalent to the input and stays log-Hadamard when the input is.
    """
    p = m.p
    top = m.rows[0]
    shifted = [[(e - t) % p for e, t in zip(row, top)] for row in m.rows]
    return GFMatrix(p, tuple(tuple((e - row[0]) % p for e in row) for row in shifted))


def _check_permutation(perm: Sequence[int], n: int, what: str) -> None:
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValueError(f"{what} is not a permutation of 0..{n - 1}: {perm!r}")


@dataclass(frozen=True)
class EquivalenceMove:
    """One combined equivalence move: all-one shifts plus permutations.

    ``row_shifts[i]`` is the multiple of the all-one vector added to source
    row i; likewise ``col_shifts[j]`` for source column j.  Permutations map
    source index -> target index.
    """

    p: int
    row_shifts: tuple[int, ...]
    col_shifts: tuple[int, ...]
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_permutation(self.row_perm, len(self.row_shifts), "row_perm")
        _check_permutation(self.col_perm, len(self.col_shifts), "col_perm")
        for s in self.row_shifts + self.col_shifts:
            if not 0 <= s < self.p:
                raise ValueError(f"shift {s} out of range for Z_{self.p}")

    @classmethod
    def identity(cls, p: int, nrows: int, ncols: int) -> "EquivalenceMove":
        return cls(p, (0,) * nrows, (0,) * ncols, tuple(range(nrows)), tuple(range(ncols)))


def random_move(
    rng: random.Random,
    p: int,
    nrows: int,
    ncols: int,
    *,
    row0_shift: int | None = None,
) -> EquivalenceMove:
    """Draw a uniformly random move; ``row0_shift`` pins the shift on source row 0."""
    row_shifts = [rng.randrange(p) for _ in range(nrows)]
    if row0_shift is not None:
        row_shifts[0] = row0_shift % p
    col_shifts = [rng.randrange(p) for _ in range(ncols)]
    row_perm = list(range(nrows))
    col_perm = list(range(ncols))
    rng.shuffle(row_perm)
    rng.shuffle(col_perm)
    return EquivalenceMove(p, tuple(row_shifts), tuple(col_shifts), tuple(row_perm), tuple(col_perm))


def apply_move(m: GFMatrix, mv: EquivalenceMove) -> GFMatrix:
    """Apply an equivalence move; preserves the log-Hadamard property."""
    nrows, ncols = m.shape
    if mv.p != m.p or len(mv.row_shifts) != nrows or len(mv.col_shifts) != ncols:
        raise ValueError(f"move shape {len(mv.row_shifts)}x{len(mv.col_shifts)} (p={mv.p}) "
                         f"does not match matrix {nrows}x{ncols} (p={m.p})")
    p = m.p
    out = [[0] * ncols for _ in range(nrows)]
    for i in range(nrows):
        src = m.rows[i]
        rs = mv.row_shifts[i]
        ti = mv.row_perm[i]
        target = out[ti]
        for j in range(ncols):
            target[mv.col_perm[j]] = (src[j] + rs + mv.col_shifts[j]) % p
    return GFMatrix(p, tuple(tuple(row) for row in out))


@dataclass(frozen=True)
class SignMatrix:
    """A matrix with entries +1/-1 (integer arithmetic, not mod anything)."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows or not self.rows[0]:
            raise ValueError("sign matrix must have at least one row and one column")
        n = len(self.rows[0])
        for row in self.rows:
            if len(row) != n:
                raise ValueError("ragged rows")
            for e in row:
                if e not in (1, -1):
                    raise ValueError(f"sign matrix entry must be +1 or -1, got {e}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "SignMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])


def hadamard_defect(h: SignMatrix) -> tuple[int, int] | None:
    """First row pair (i, j) with nonzero integer dot product, or None if Hadamard."""
    nrows, ncols = h.shape
    if nrows != ncols:
        return (0, 0) if nrows == 1 else (0, 1)
    for i in range(nrows):
        ri = h.rows[i]
        for j in range(i + 1, nrows):
            if sum(a * b for a, b in zip(ri, h.rows[j])) != 0:
                return (i, j)
    return None


def from_sign_matrix(h: SignMatrix, *, strict: bool = False) -> GFMatrix:
    """Map +1 -> 0 and -1 -> 1, giving the Z_2 log-image.

    If h is Hadamard (all pairwise row dot products vanish over the integers)
    the output is log-Hadamard over Z_2.  ``strict`` verifies that up front.
    """
    if strict:
        defect = hadamard_defect(h)
        if defect is not None:
            raise ValueError(f"not a Hadamard matrix: rows {defect[0]} and {defect[1]} "
                             "are not orthogonal")
    return GFMatrix(2, tuple(tuple(1 if e == -1 else 0 for e in row) for row in h.rows))


def min_rank_in_class(m: GFMatrix) -> int:
    """Minimum rank over the equivalence class of a log-Hadamard matrix.

    The dephased form attains the class minimum, so no search is needed:
    dephase and take the rank.
    """
    if not is_log_hadamard(m):
        raise ValueError("input is not log-Hadamard")
    return rank(dephase(m))
