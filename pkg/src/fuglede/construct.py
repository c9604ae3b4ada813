"""Deterministic generators: moment vectors, the 2p x 2p counterexample
matrices, the explicit spectral pair in Z_p^4, and the dephased 12x12
matrix over Z_2."""

from __future__ import annotations

from dataclasses import dataclass

from .deciders import PointSet
from .gfmat import GFMatrix, GFVector, check_prime


def moment_vector(p: int, k: int) -> GFVector:
    """v_k = (0^k, 1^k, ..., (p-1)^k) mod p, with 0^0 = 1."""
    check_prime(p)
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    return GFVector(p, tuple(pow(j, k, p) for j in range(p)))


def is_nonsquare(p: int, n: int) -> bool:
    """Euler's criterion: n is a quadratic nonresidue iff n^((p-1)/2) = -1 mod p."""
    check_prime(p)
    if p == 2:
        return False
    return pow(n % p, (p - 1) // 2, p) == p - 1


def nonsquares(p: int) -> tuple[int, ...]:
    """All quadratic nonresidues in {1, ..., p-1}, ascending."""
    check_prime(p)
    if p == 2:
        return ()
    return tuple(n for n in range(1, p) if is_nonsquare(p, n))


def smallest_nonsquare(p: int) -> int:
    """The least nonsquare mod p; undefined for p = 2 (every residue is a square)."""
    ns = nonsquares(p)
    if not ns:
        raise ValueError("there is no nonsquare modulo 2")
    return ns[0]


def beta_for(p: int, n: int, alpha: int) -> int:
    """The unique beta with beta - n*alpha + (n^2 + n) = 0 mod p."""
    return (n * alpha - n * n - n) % p


@dataclass(frozen=True)
class CounterexampleParams:
    """Parameters (p, n, alpha, beta) of the modified 2p x 2p construction.

    n must be a nonsquare mod p and beta must satisfy the parallelism
    relation beta - n*alpha + (n^2 + n) = 0 mod p, which makes the two
    quadratic-coefficient vectors parallel and caps the rank at four.
    """

    p: int
    n: int
    alpha: int
    beta: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.p == 2:
            raise ValueError("construction requires an odd prime")
        if not 0 <= self.n < self.p or not is_nonsquare(self.p, self.n):
            raise ValueError(f"n = {self.n} is not a nonsquare modulo {self.p}")
        if not 0 <= self.alpha < self.p or not 0 <= self.beta < self.p:
            raise ValueError("alpha and beta must be reduced residues")
        if (self.beta - self.n * self.alpha + self.n * self.n + self.n) % self.p != 0:
            raise ValueError(
                f"beta = {self.beta} violates beta - n*alpha + (n^2 + n) = 0 mod {self.p}")

    @classmethod
    def from_alpha(cls, p: int, n: int, alpha: int) -> "CounterexampleParams":
        return cls(p, n % p, alpha % p, beta_for(p, n, alpha))


def build_original(p: int, n: int) -> GFMatrix:
    """The original 2p x 2p log-Hadamard matrix for an odd prime p and nonsquare n.

    Rows, for 0 <= k <= p-1 (row index from zero):
        row k       = 2k(v1, n v1) - k^2 (v0, n v0)
        row k + p   = (v2, n v2) - 2nk(v1, v1) + n k^2 (n v0, v0)
    Rank is at most five, and at most four when n = -1 mod p.
    """
    check_prime(p)
    if p == 2:
        raise ValueError("construction requires an odd prime")
    n %= p
    if not is_nonsquare(p, n):
        raise ValueError(f"n = {n} is not a nonsquare modulo {p}")
    rows = []
    for k in range(p):
        rows.append([(2 * k * j - k * k) % p for j in range(p)]
                    + [(n * (2 * k * j - k * k)) % p for j in range(p)])
    for k in range(p):
        rows.append([(j * j - 2 * n * k * j + n * n * k * k) % p for j in range(p)]
                    + [(n * j * j - 2 * n * k * j + n * k * k) % p for j in range(p)])
    return GFMatrix.from_rows(p, rows)


def build_modified(params: CounterexampleParams) -> GFMatrix:
    """The modified 2p x 2p matrix: log-Hadamard of rank exactly four.

    Obtained from the original by adding alpha*k^2 (resp. beta*k^2) times the
    all-one vector to row k (resp. row k+p):
        row k     = 2k(v1, n v1) + k^2 ((alpha-1) v0, (alpha-n) v0)
        row k + p = (v2, n v2) - 2nk(v1, v1) + k^2 ((beta+n^2) v0, (beta+n) v0)
    """
    p, n, alpha, beta = params.p, params.n, params.alpha, params.beta
    rows = []
    for k in range(p):
        a = (alpha - 1) * k * k
        b = (alpha - n) * k * k
        rows.append([(2 * k * j + a) % p for j in range(p)]
                    + [(2 * n * k * j + b) % p for j in range(p)])
    for k in range(p):
        a = (beta + n * n) * k * k
        b = (beta + n) * k * k
        rows.append([(j * j - 2 * n * k * j + a) % p for j in range(p)]
                    + [(n * j * j - 2 * n * k * j + b) % p for j in range(p)])
    return GFMatrix.from_rows(p, rows)


def build_spectral_pair(p: int, n: int, alpha: int) -> tuple[PointSet, PointSet]:
    """The explicit size-2p spectral set E in Z_p^4 and its spectrum B.

    E = {(k^2, k, k, alpha-1)} U {(n k^2, n k, k, alpha-n)},
    B = {(0, 2k, 0, k^2)} U {(1, 0, -2nk, n k^2)},   k in Z_p.

    The inner products B x E^T reproduce the modified matrix row by row, so B
    is a spectrum for E; |E| = 2p does not divide p^4, so E cannot tile.
    """
    check_prime(p)
    if p == 2:
        raise ValueError("construction requires an odd prime")
    n %= p
    if not is_nonsquare(p, n):
        raise ValueError(f"n = {n} is not a nonsquare modulo {p}")
    e_pts = [(k * k, k, k, alpha - 1) for k in range(p)]
    e_pts += [(n * k * k, n * k, k, alpha - n) for k in range(p)]
    b_pts = [(0, 2 * k, 0, k * k) for k in range(p)]
    b_pts += [(1, 0, -2 * n * k, n * k * k) for k in range(p)]
    return (PointSet.from_points(p, 4, e_pts), PointSet.from_points(p, 4, b_pts))


# Size-8 subset of Z_2^5 that is neither a tile, nor spectral, nor a graph on
# a 3-dimensional subspace: 0, the five unit vectors, e1+e2, and the all-one
# vector.
def nontiling_size8_example() -> PointSet:
    pts = [(0, 0, 0, 0, 0)]
    pts += [tuple(1 if i == j else 0 for j in range(5)) for i in range(5)]
    pts.append((1, 1, 0, 0, 0))
    pts.append((1, 1, 1, 1, 1))
    return PointSet.from_points(2, 5, pts)


_TAO12_ROWS = (
    "000000000000",
    "010100011101",
    "011010001110",
    "001101000111",
    "010110100011",
    "011011010001",
    "011101101000",
    "001110110100",
    "000111011010",
    "000011101101",
    "010001110110",
    "001000111011",
)


def tao_dephased_12() -> GFMatrix:
    """The dephased 12x12 log-Hadamard matrix over Z_2 of rank ten.

    This is the dephasing of the log-image of the order-12 Hadamard matrix;
    first row and column are zero and every other row has exactly six ones.
    """
    return GFMatrix(2, tuple(tuple(int(c) for c in row) for row in _TAO12_ROWS))


__all__ = [
    "moment_vector",
    "is_nonsquare",
    "nonsquares",
    "smallest_nonsquare",
    "beta_for",
    "CounterexampleParams",
    "build_original",
    "build_modified",
    "build_spectral_pair",
    "nontiling_size8_example",
    "tao_dephased_12",
]
