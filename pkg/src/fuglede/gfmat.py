"""Exact linear algebra over the prime field Z_p.

Everything here is integer arithmetic reduced mod p; no floating point
anywhere.  Values are immutable and hashable, so they can be shared across
threads and used as dict keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Sequence


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (moduli fit a machine word)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    r = isqrt(n)
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    """Validate a modulus and return it."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError(f"modulus must be an int, got {type(p).__name__}")
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    return p


@dataclass(frozen=True)
class GFVector:
    """A vector of residues mod a prime p, stored reduced in {0, ..., p-1}."""

    p: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if not self.entries:
            raise ValueError("vector must be nonempty")
        for e in self.entries:
            if not 0 <= e < self.p:
                raise ValueError(f"entry {e} out of range for Z_{self.p}")

    @classmethod
    def reduce(cls, p: int, entries: Iterable[int]) -> "GFVector":
        """Build a vector, reducing arbitrary integers mod p."""
        return cls(p, tuple(e % p for e in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __add__(self, other: "GFVector") -> "GFVector":
        self._check_compatible(other)
        return GFVector(self.p, tuple((a + b) % self.p for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "GFVector") -> "GFVector":
        self._check_compatible(other)
        return GFVector(self.p, tuple((a - b) % self.p for a, b in zip(self.entries, other.entries)))

    def scale(self, c: int) -> "GFVector":
        return GFVector(self.p, tuple((c * a) % self.p for a in self.entries))

    def concat(self, other: "GFVector") -> "GFVector":
        if other.p != self.p:
            raise ValueError("modulus mismatch")
        return GFVector(self.p, self.entries + other.entries)

    def _check_compatible(self, other: "GFVector") -> None:
        if other.p != self.p or len(other) != len(self):
            raise ValueError("vector shape/modulus mismatch")


@dataclass(frozen=True)
class GFMatrix:
    """An m x n matrix of residues mod a prime p, stored reduced."""

    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        n = len(self.rows[0])
        for row in self.rows:
            if len(row) != n:
                raise ValueError("ragged rows")
            for e in row:
                if not 0 <= e < self.p:
                    raise ValueError(f"entry {e} out of range for Z_{self.p}")

    @classmethod
    def from_rows(cls, p: int, rows: Iterable[Sequence[int]]) -> "GFMatrix":
        """Build a matrix, reducing arbitrary integers mod p."""
        return cls(p, tuple(tuple(e % p for e in row) for row in rows))

    @classmethod
    def identity(cls, p: int, n: int) -> "GFMatrix":
        return cls(p, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, p: int, m: int, n: int) -> "GFMatrix":
        return cls(p, tuple((0,) * n for _ in range(m)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_cols(self) -> int:
        return len(self.rows[0])

    def row(self, i: int) -> GFVector:
        return GFVector(self.p, self.rows[i])

    def col(self, j: int) -> GFVector:
        return GFVector(self.p, tuple(row[j] for row in self.rows))

    def transpose(self) -> "GFMatrix":
        return GFMatrix(self.p, tuple(zip(*self.rows)))

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]


def matmul(a: GFMatrix, b: GFMatrix) -> GFMatrix:
    """Exact matrix product over Z_p."""
    if a.p != b.p:
        raise ValueError("modulus mismatch")
    if a.num_cols != b.num_rows:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    p = a.p
    bt = tuple(zip(*b.rows))
    rows = tuple(
        tuple(sum(x * y for x, y in zip(arow, bcol)) % p for bcol in bt) for arow in a.rows
    )
    return GFMatrix(p, rows)


def row_reduce(m: GFMatrix) -> tuple[GFMatrix, tuple[int, ...]]:
    """Reduced row-echelon form over Z_p, plus the pivot column list.

    Gaussian elimination with modular-inverse pivot scaling; the pivot count
    equals the rank.
    """
    p = m.p
    work = [list(row) for row in m.rows]
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, nrows):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = pow(work[r][c], -1, p)
        if inv != 1:
            work[r] = [(inv * x) % p for x in work[r]]
        for i in range(nrows):
            f = work[i][c]
            if i != r and f != 0:
                row_r = work[r]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], row_r)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return GFMatrix(p, tuple(tuple(row) for row in work)), tuple(pivots)


def _rank_gf2_packed(m: GFMatrix) -> int:
    """Bit-packed GF(2) rank; must agree with the generic elimination path."""
    words = [sum(bit << j for j, bit in enumerate(row)) for row in m.rows]
    rank = 0
    for c in range(m.num_cols):
        mask = 1 << c
        pivot = -1
        for i in range(rank, len(words)):
            if words[i] & mask:
                pivot = i
                break
        if pivot < 0:
            continue
        words[rank], words[pivot] = words[pivot], words[rank]
        w = words[rank]
        for i in range(len(words)):
            if i != rank and (words[i] & mask):
                words[i] ^= w
        rank += 1
        if rank == len(words):
            break
    return rank


def rank(m: GFMatrix) -> int:
    """Rank of m over Z_p (dimension of the row space)."""
    if m.p == 2:
        return _rank_gf2_packed(m)
    _, pivots = row_reduce(m)
    return len(pivots)


@dataclass(frozen=True)
class RankFactorization:
    """Result of factoring M = left . right^T with inner dimension rank.

    A zero-rank input has no usable factors: ``left`` and ``right`` are None
    and ``is_zero`` is True, so callers cannot silently multiply with it.
    """

    rank: int
    left: GFMatrix | None
    right: GFMatrix | None

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def product(self) -> GFMatrix:
        if self.left is None or self.right is None:
            raise ValueError("zero factorization has no factors to multiply")
        return matmul(self.left, self.right.transpose())


def rank_factorization(m: GFMatrix) -> RankFactorization:
    """Factor M as B . E^T with inner dimension rank(M).

    Uses the pivot-column/RREF-row (CR) construction: B is the pivot columns
    of M and E^T the nonzero rows of the RREF.  Factorizations are not unique;
    the contract is only that the product reproduces M.
    """
    rref, pivots = row_reduce(m)
    r = len(pivots)
    if r == 0:
        return RankFactorization(0, None, None)
    left = GFMatrix(m.p, tuple(tuple(row[c] for c in pivots) for row in m.rows))
    right = GFMatrix(m.p, tuple(tuple(rref.rows[i][j] for i in range(r)) for j in range(m.num_cols)))
    return RankFactorization(r, left, right)
